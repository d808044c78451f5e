#include "rankmatch/rank_likelihood.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "rankmatch/parallel.h"

namespace rankmatch {

double CombinedScoreSpec::operator()(std::span<const double> s, double d) const {
  double v = d_weight * d;
  const std::size_t n = std::min(s.size(), s_weights.size());
  for (std::size_t i = 0; i < n; ++i) v += s_weights[i] * s[i];
  return v;
}

CombinedScoreSpec CombinedScoreSpec::final_only(std::size_t s_dims) {
  return {"f1", std::vector<double>(s_dims, 0.0), 1.0};
}

CombinedScoreSpec CombinedScoreSpec::weighted_course() {
  return {"f2", {0.25, 0.25}, 0.5};
}

CombinedScoreSpec CombinedScoreSpec::by_id(const std::string& id) {
  if (id == "f1") return final_only();
  if (id == "f2") return weighted_course();
  throw std::invalid_argument("unknown combined score '" + id + "' (expected f1 or f2)");
}

std::size_t GridSpec::s_cells() const {
  std::size_t cells = 1;
  for (const auto& axis : s_axes) cells *= axis.bins;
  return cells;
}

double GridSpec::cell_area() const {
  double area = d_axis.width;
  for (const auto& axis : s_axes) area *= axis.width;
  return area;
}

BinLookup GridSpec::locate_s(std::span<const double> s) const {
  BinLookup out;
  for (std::size_t i = 0; i < s_axes.size(); ++i) {
    const BinLookup b = s_axes[i].locate(s[i]);
    out.bin = out.bin * s_axes[i].bins + b.bin;
    out.clamped = out.clamped || b.clamped;
  }
  return out;
}

std::vector<double> GridSpec::s_midpoint(std::size_t s_cell) const {
  std::vector<double> mid(s_axes.size());
  for (std::size_t i = s_axes.size(); i-- > 0;) {
    mid[i] = s_axes[i].midpoint(s_cell % s_axes[i].bins);
    s_cell /= s_axes[i].bins;
  }
  return mid;
}

JointGrid::JointGrid(GridSpec grid, std::vector<double> mass)
    : grid_(std::move(grid)), mass_(std::move(mass)) {
  if (mass_.size() != grid_.s_cells() * grid_.d_bins()) {
    throw DistributionError("joint grid mass has the wrong shape");
  }
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0)) throw DistributionError("joint grid masses must be nonnegative");
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) throw DistributionError("joint grid mass must sum to 1");
}

std::vector<double> JointGrid::s_marginal() const {
  std::vector<double> out(grid_.s_cells(), 0.0);
  for (std::size_t s = 0; s < out.size(); ++s)
    for (std::size_t d = 0; d < grid_.d_bins(); ++d) out[s] += mass(s, d);
  return out;
}

std::vector<double> JointGrid::d_marginal() const {
  std::vector<double> out(grid_.d_bins(), 0.0);
  for (std::size_t s = 0; s < grid_.s_cells(); ++s)
    for (std::size_t d = 0; d < out.size(); ++d) out[d] += mass(s, d);
  return out;
}

RankLikelihoodModel::RankLikelihoodModel(GridSpec grid, CombinedScoreSpec combined,
                                         int cohort_size, std::vector<double> joint_mass)
    : grid_(std::move(grid)),
      combined_(std::move(combined)),
      cohort_size_(cohort_size),
      joint_mass_(std::move(joint_mass)) {
  if (cohort_size_ < 1) throw DistributionError("cohort size must be >= 1");
  const std::size_t s_cells = grid_.s_cells();
  const std::size_t d_bins = grid_.d_bins();
  const std::size_t per_rank = s_cells * d_bins;
  if (per_rank == 0 || joint_mass_.size() != per_rank * static_cast<std::size_t>(cohort_size_)) {
    throw DistributionError("rank likelihood tables have the wrong shape");
  }

  const double log_area = std::log(grid_.cell_area());
  log_joint_.resize(joint_mass_.size());
  conditional_.assign(joint_mass_.size(), 0.0);
  ell_.assign(s_cells * static_cast<std::size_t>(cohort_size_), kLogFloor);

  for (Rank k = 1; k <= cohort_size_; ++k) {
    for (std::size_t s = 0; s < s_cells; ++s) {
      const std::size_t base = index(k, s, 0);
      double marginal = 0.0;
      for (std::size_t d = 0; d < d_bins; ++d) {
        const double m = joint_mass_[base + d];
        marginal += m;
        const double lj = m > 0.0 ? std::log(m) - log_area : kLogFloor;
        log_joint_[base + d] = std::max(lj, kLogFloor);
      }
      if (!(marginal > 0.0)) continue;
      double ell = 0.0;
      for (std::size_t d = 0; d < d_bins; ++d) {
        const double c = joint_mass_[base + d] / marginal;
        conditional_[base + d] = c;
        if (c > 0.0) ell += c * log_joint_[base + d];
      }
      ell_[static_cast<std::size_t>(k - 1) * s_cells + s] = ell;
    }
  }
}

JointGrid RankLikelihoodModel::pooled() const {
  const std::size_t per_rank = grid_.s_cells() * grid_.d_bins();
  std::vector<double> mass(per_rank, 0.0);
  for (std::size_t k = 0; k < static_cast<std::size_t>(cohort_size_); ++k)
    for (std::size_t c = 0; c < per_rank; ++c) mass[c] += joint_mass_[k * per_rank + c];
  double total = 0.0;
  for (double m : mass) total += m;
  for (double& m : mass) m /= total;
  return JointGrid(grid_, std::move(mass));
}

RankLikelihoodModel build_rank_likelihood_model(const JointSampler& sampler,
                                                const CombinedScoreSpec& combined,
                                                int cohort_size, const GridSpec& grid,
                                                const MonteCarloOptions& options) {
  if (cohort_size < 1) throw DistributionError("cohort size must be >= 1");
  if (options.cohorts < kMinMonteCarloCohorts) {
    throw DistributionError("Monte Carlo needs at least " +
                            std::to_string(kMinMonteCarloCohorts) + " cohorts");
  }
  if (grid.s_axes.empty() || grid.d_bins() == 0 || grid.s_cells() == 0) {
    throw DistributionError("grid must have at least one s axis and one d bin");
  }
  if (options.shards == 0) throw DistributionError("need at least one shard");

  const std::size_t n = static_cast<std::size_t>(cohort_size);
  const std::size_t dims = grid.s_dims();
  const std::size_t s_cells = grid.s_cells();
  const std::size_t d_bins = grid.d_bins();
  const std::size_t per_rank = s_cells * d_bins;
  const std::size_t shards = std::min(options.shards, options.cohorts);
  const std::size_t lanes =
      std::min<std::size_t>(shards, static_cast<std::size_t>(std::max(options.workers, 1)));

  std::vector<std::vector<std::uint32_t>> counts(lanes);
  std::vector<std::uint64_t> clipped(lanes, 0);

  parallel_for(lanes, static_cast<int>(lanes), [&](std::size_t lane) {
    auto& hist = counts[lane];
    hist.assign(per_rank * n, 0);
    std::vector<double> draw(dims + 1);
    std::vector<double> mid(dims);
    std::vector<std::size_t> cell(n);
    std::vector<double> score(n);
    std::vector<std::size_t> order(n);
    for (std::size_t shard = lane; shard < shards; shard += lanes) {
      std::mt19937_64 rng(derive_seed(options.seed, shard));
      const std::size_t begin = shard * options.cohorts / shards;
      const std::size_t end = (shard + 1) * options.cohorts / shards;
      for (std::size_t c = begin; c < end; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          sampler(rng, draw);
          const BinLookup s = grid.locate_s(std::span<const double>(draw.data(), dims));
          const BinLookup d = grid.locate_d(draw[dims]);
          if (s.clamped || d.clamped) ++clipped[lane];
          std::size_t rest = s.bin;
          for (std::size_t a = dims; a-- > 0;) {
            mid[a] = grid.s_axes[a].midpoint(rest % grid.s_axes[a].bins);
            rest /= grid.s_axes[a].bins;
          }
          cell[i] = s.bin * d_bins + d.bin;
          score[i] = combined(mid, grid.d_axis.midpoint(d.bin));
        }
        std::iota(order.begin(), order.end(), std::size_t{0});
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
          return score[a] < score[b] || (score[a] == score[b] && a < b);
        });
        for (std::size_t pos = 0; pos < n; ++pos) ++hist[pos * per_rank + cell[order[pos]]];
      }
    }
  });

  const std::uint64_t total_clipped = std::accumulate(clipped.begin(), clipped.end(), std::uint64_t{0});
  const double clipped_fraction =
      static_cast<double>(total_clipped) / (static_cast<double>(options.cohorts) * static_cast<double>(n));
  if (clipped_fraction > kMaxClippedFraction) {
    std::ostringstream msg;
    msg << "grid does not cover the sampler support: " << clipped_fraction * 100.0
        << "% of draws fall outside it";
    throw DistributionError(msg.str());
  }

  const double eps = 1.0 / static_cast<double>(options.cohorts);
  const double denom = static_cast<double>(options.cohorts) + eps * static_cast<double>(per_rank);
  std::vector<double> mass(per_rank * n);
  for (std::size_t i = 0; i < mass.size(); ++i) {
    std::uint64_t c = 0;
    for (const auto& hist : counts) c += hist[i];
    mass[i] = (static_cast<double>(c) + eps) / denom;
  }
  return RankLikelihoodModel(grid, combined, cohort_size, std::move(mass));
}

}  // namespace rankmatch
