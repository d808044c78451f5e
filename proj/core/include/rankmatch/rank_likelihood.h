#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "rankmatch/common.h"
#include "rankmatch/distributions.h"

namespace rankmatch {

// Combined score f(s, d) = sum_i s_weights[i] * s[i] + d_weight * d.
struct CombinedScoreSpec {
  std::string id;
  std::vector<double> s_weights;
  double d_weight = 1.0;

  double operator()(std::span<const double> s, double d) const;

  // f1(s, d) = d.
  static CombinedScoreSpec final_only(std::size_t s_dims = 2);
  // f2(s, d) = 0.25 s1 + 0.25 s2 + 0.5 d.
  static CombinedScoreSpec weighted_course();
  // Looks up "f1" / "f2".
  static CombinedScoreSpec by_id(const std::string& id);

  bool operator==(const CombinedScoreSpec&) const = default;
};

// Geometry of the (instantaneous, delayed) grid. A multi-dimensional
// instantaneous score is flattened to a product grid, first axis most
// significant.
struct GridSpec {
  std::vector<BinAxis> s_axes;
  BinAxis d_axis;

  std::size_t s_dims() const { return s_axes.size(); }
  std::size_t s_cells() const;
  std::size_t d_bins() const { return d_axis.bins; }
  double cell_area() const;

  // Flattened s-cell of a score vector; clamped if any axis clamps.
  BinLookup locate_s(std::span<const double> s) const;
  BinLookup locate_d(double d) const { return d_axis.locate(d); }
  // Midpoint coordinates of an s-cell.
  std::vector<double> s_midpoint(std::size_t s_cell) const;

  bool operator==(const GridSpec&) const = default;
};

// A joint probability mass over S x D grid cells.
class JointGrid {
 public:
  JointGrid(GridSpec grid, std::vector<double> mass);

  const GridSpec& grid() const { return grid_; }
  double mass(std::size_t s_cell, std::size_t d_bin) const {
    return mass_[s_cell * grid_.d_bins() + d_bin];
  }
  std::vector<double> s_marginal() const;
  std::vector<double> d_marginal() const;

 private:
  GridSpec grid_;
  std::vector<double> mass_;
};

// Draws one (s, d) pair: writes s_dims values followed by d into out.
using JointSampler = std::function<void(std::mt19937_64&, std::span<double>)>;

struct MonteCarloOptions {
  std::size_t cohorts = 100000;
  std::uint64_t seed = 0;
  int workers = 1;
  // Cohorts are split into this many deterministic shards, each with its own
  // RNG stream. Fixed independently of `workers`.
  std::size_t shards = 64;
};

inline constexpr std::size_t kMinMonteCarloCohorts = 10000;
inline constexpr double kMaxClippedFraction = 0.01;

// Per-rank joint and conditional tables for (instantaneous, delayed) score
// pairs, conditioned on the rank of the combined score within a cohort.
class RankLikelihoodModel {
 public:
  RankLikelihoodModel(GridSpec grid, CombinedScoreSpec combined, int cohort_size,
                      std::vector<double> joint_mass);

  int cohort_size() const { return cohort_size_; }
  const GridSpec& grid() const { return grid_; }
  const CombinedScoreSpec& combined() const { return combined_; }

  // log of the rank-k joint density at a cell.
  double log_joint(Rank rank, std::size_t s_cell, std::size_t d_bin) const {
    return log_joint_[index(rank, s_cell, d_bin)];
  }
  // Rank-k conditional mass of the d-bin given the s-cell.
  double conditional(Rank rank, std::size_t s_cell, std::size_t d_bin) const {
    return conditional_[index(rank, s_cell, d_bin)];
  }
  // sum_d conditional(k, s, d) * log_joint(k, s, d).
  double expected_log_likelihood(Rank rank, std::size_t s_cell) const {
    return ell_[static_cast<std::size_t>(rank - 1) * grid_.s_cells() + s_cell];
  }
  // Rank-k joint probability mass of a cell.
  double joint_mass(Rank rank, std::size_t s_cell, std::size_t d_bin) const {
    return joint_mass_[index(rank, s_cell, d_bin)];
  }
  // The rank-averaged joint, i.e. the estimate of the base distribution.
  JointGrid pooled() const;

 private:
  std::size_t index(Rank rank, std::size_t s_cell, std::size_t d_bin) const {
    return (static_cast<std::size_t>(rank - 1) * grid_.s_cells() + s_cell) * grid_.d_bins() +
           d_bin;
  }

  GridSpec grid_;
  CombinedScoreSpec combined_;
  int cohort_size_;
  std::vector<double> joint_mass_;
  std::vector<double> log_joint_;
  std::vector<double> conditional_;
  std::vector<double> ell_;
};

// Simulates cohorts of N i.i.d. pairs, sorts each cohort by the combined
// score of the binned pair (ties by draw order) and histograms the cell at
// each rank. Cells get additive smoothing 1/cohorts before normalization.
// Throws if more than 1% of draws fall outside the grid.
RankLikelihoodModel build_rank_likelihood_model(const JointSampler& sampler,
                                                const CombinedScoreSpec& combined,
                                                int cohort_size, const GridSpec& grid,
                                                const MonteCarloOptions& options);

}  // namespace rankmatch
