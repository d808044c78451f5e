#include "rankmatch/ranking.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include "rankmatch/assignment.h"

namespace rankmatch {
namespace {

// Rows that share a key have identical weights; give the ranks the solver
// chose for them back out in input order.
std::vector<Rank> canonicalize_ties(const std::vector<int>& rank_index,
                                    const std::vector<std::size_t>& key) {
  std::vector<Rank> ranks(rank_index.size());
  std::vector<std::size_t> order(rank_index.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key[a] < key[b]; });
  for (std::size_t g = 0; g < order.size();) {
    std::size_t e = g;
    while (e < order.size() && key[order[e]] == key[order[g]]) ++e;
    std::vector<int> chosen;
    for (std::size_t t = g; t < e; ++t) chosen.push_back(rank_index[order[t]]);
    std::sort(chosen.begin(), chosen.end());
    for (std::size_t t = g; t < e; ++t) ranks[order[t]] = chosen[t - g] + 1;
    g = e;
  }
  return ranks;
}

}  // namespace

RankingSnapshot predict_ranks_full_info(std::span<const ScoredCandidate> revealed,
                                        const OrderStatisticTable& table, UnrevealedMode mode) {
  const auto n = static_cast<std::size_t>(table.cohort_size());
  const std::size_t m = revealed.size();
  if (m > n) {
    throw std::invalid_argument("more revealed candidates (" + std::to_string(m) +
                                ") than the cohort size " + std::to_string(n));
  }
  RankingSnapshot snap;
  snap.step = static_cast<int>(m);
  if (m == 0) return snap;

  const std::size_t rows = mode == UnrevealedMode::kPadded ? n : m;
  std::vector<double> weights(rows * n, kPaddingWeight);
  std::vector<std::size_t> key(m);
  for (std::size_t i = 0; i < m; ++i) {
    const BinLookup b = table.locate(revealed[i].score);
    if (b.clamped) ++snap.clamped;
    key[i] = b.bin;
    for (std::size_t k = 0; k < n; ++k) {
      weights[i * n + k] = table.log_density(static_cast<Rank>(k + 1), b.bin);
    }
  }

  const MatchingResult match = solve_max_matching(AssignmentProblem(rows, n, std::move(weights)));
  std::vector<int> chosen(match.assignment.begin(), match.assignment.begin() + static_cast<long>(m));
  const std::vector<Rank> ranks = canonicalize_ties(chosen, key);
  for (std::size_t i = 0; i < m; ++i) {
    snap.revealed.push_back(revealed[i].id);
    snap.predicted_rank[revealed[i].id] = ranks[i];
    snap.log_likelihood += table.log_density(ranks[i], key[i]);
  }
  return snap;
}

RankingSnapshot predict_ranks_delayed(std::span<const CandidateRecord> candidates, int step,
                                      const RankLikelihoodModel& model) {
  const auto n = static_cast<std::size_t>(model.cohort_size());
  const GridSpec& grid = model.grid();
  RankingSnapshot snap;
  snap.step = step;

  std::vector<const CandidateRecord*> present;
  for (const auto& c : candidates) {
    if (c.arrival_time <= step) present.push_back(&c);
  }
  const std::size_t m = present.size();
  if (m > n) {
    throw std::invalid_argument("more arrived candidates than the cohort size");
  }
  if (m == 0) return snap;

  std::vector<double> weights(m * n);
  std::vector<std::size_t> key(m);
  std::vector<std::size_t> s_cell(m), d_bin(m);
  std::vector<char> known(m);
  for (std::size_t i = 0; i < m; ++i) {
    const CandidateRecord& c = *present[i];
    if (c.instantaneous.size() != grid.s_dims()) {
      throw std::invalid_argument("candidate " + std::to_string(c.id) +
                                  " has the wrong number of instantaneous scores");
    }
    const BinLookup s = grid.locate_s(c.instantaneous);
    s_cell[i] = s.bin;
    bool clamped = s.clamped;
    known[i] = c.delayed_known_at(step) ? 1 : 0;
    if (known[i]) {
      const BinLookup d = grid.locate_d(*c.delayed);
      clamped = clamped || d.clamped;
      d_bin[i] = d.bin;
      key[i] = (s.bin * grid.d_bins() + d.bin) * 2;
      for (std::size_t k = 0; k < n; ++k) {
        weights[i * n + k] = model.log_joint(static_cast<Rank>(k + 1), s.bin, d.bin);
      }
      snap.known.push_back(c.id);
    } else {
      key[i] = s.bin * 2 + 1;
      for (std::size_t k = 0; k < n; ++k) {
        weights[i * n + k] = model.expected_log_likelihood(static_cast<Rank>(k + 1), s.bin);
      }
      snap.unknown.push_back(c.id);
    }
    if (clamped) ++snap.clamped;
    snap.revealed.push_back(c.id);
  }

  const MatchingResult match = solve_max_matching(AssignmentProblem(m, n, std::move(weights)));
  const std::vector<Rank> ranks = canonicalize_ties(match.assignment, key);
  for (std::size_t i = 0; i < m; ++i) {
    snap.predicted_rank[present[i]->id] = ranks[i];
    snap.log_likelihood += known[i] ? model.log_joint(ranks[i], s_cell[i], d_bin[i])
                                    : model.expected_log_likelihood(ranks[i], s_cell[i]);
  }
  return snap;
}

bool HiringLog::hired(int id) const {
  return std::any_of(hires.begin(), hires.end(), [id](const Hire& h) { return h.id == id; });
}

HiringLog hiring_rule(int cohort_size, int last_step, const RankPredictor& predictor, int top_m) {
  HiringLog log;
  log.top_m = top_m;
  const Rank threshold = cohort_size - top_m + 1;
  for (int step = 1; step <= last_step; ++step) {
    const RankingSnapshot snap = predictor(step);
    for (int id : snap.revealed) {
      const Rank r = snap.predicted_rank.at(id);
      if (r >= threshold && !log.hired(id)) log.hires.push_back({id, step});
    }
  }
  return log;
}

std::vector<Rank> true_ranks(std::span<const double> scores) {
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  std::vector<Rank> ranks(scores.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) ranks[order[pos]] = static_cast<Rank>(pos + 1);
  return ranks;
}

AadrSummary aadr(const std::vector<std::vector<Rank>>& true_rank,
                 const std::vector<std::vector<Rank>>& predicted_at_arrival) {
  if (true_rank.size() != predicted_at_arrival.size()) {
    throw std::invalid_argument("aadr: trial counts differ");
  }
  AadrSummary out;
  if (true_rank.empty()) return out;
  const std::size_t steps = true_rank.front().size();
  std::vector<double> sum(steps, 0.0), sum_sq(steps, 0.0);
  for (std::size_t t = 0; t < true_rank.size(); ++t) {
    if (true_rank[t].size() != steps || predicted_at_arrival[t].size() != steps) {
      throw std::invalid_argument("aadr: every trial needs one entry per step");
    }
    for (std::size_t s = 0; s < steps; ++s) {
      const double dev = std::abs(static_cast<double>(true_rank[t][s] - predicted_at_arrival[t][s]));
      sum[s] += dev;
      sum_sq[s] += dev * dev;
    }
  }
  const double trials = static_cast<double>(true_rank.size());
  out.mean.resize(steps);
  out.standard_error.resize(steps);
  for (std::size_t s = 0; s < steps; ++s) {
    out.mean[s] = sum[s] / trials;
    const double var = trials > 1 ? (sum_sq[s] - trials * out.mean[s] * out.mean[s]) / (trials - 1) : 0.0;
    out.standard_error[s] = std::sqrt(std::max(var, 0.0) / trials);
  }
  return out;
}

double mean_absolute_rank_deviation(std::span<const Rank> a, std::span<const Rank> b) {
  if (a.size() != b.size()) throw std::invalid_argument("rank vectors differ in length");
  if (a.empty()) return 0.0;
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) total += std::abs(a[i] - b[i]);
  return total / static_cast<double>(a.size());
}

double random_rank_baseline(int n) {
  const double nn = static_cast<double>(n);
  return (nn * nn - 1.0) / (3.0 * nn);
}

}  // namespace rankmatch
