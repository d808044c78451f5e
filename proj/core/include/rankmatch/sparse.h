#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rankmatch/assignment.h"

namespace rankmatch {

// N left vertices to be matched into k groups; group j takes exactly
// capacities[j] of them. weights is N x k.
struct GroupedProblem {
  AssignmentProblem weights;
  std::vector<int> capacities;
  double c = 10.0;

  GroupedProblem(AssignmentProblem w, std::vector<int> caps, double c_factor = 10.0);

  std::size_t left() const { return weights.rows(); }
  std::size_t groups() const { return weights.cols(); }
};

// min(ceil(c ln n), n), and at least 1.
int sparse_degree(int group_size, double c);

// For every (left vertex, group), the duplicate indices (0-based within the
// group) it is connected to, in sampling order.
class SparseGraph {
 public:
  SparseGraph(std::size_t left, std::vector<int> capacities, std::vector<int> degrees);

  std::size_t left() const { return left_; }
  std::size_t groups() const { return capacities_.size(); }
  std::span<const int> capacities() const { return capacities_; }
  std::span<const int> degrees() const { return degrees_; }
  std::size_t edge_count() const { return duplicates_.size(); }

  std::span<const int> duplicates(std::size_t i, std::size_t g) const {
    return {duplicates_.data() + slot(i, g), static_cast<std::size_t>(degrees_[g])};
  }
  std::span<int> mutable_duplicates(std::size_t i, std::size_t g) {
    return {duplicates_.data() + slot(i, g), static_cast<std::size_t>(degrees_[g])};
  }

  bool operator==(const SparseGraph&) const = default;

 private:
  std::size_t slot(std::size_t i, std::size_t g) const { return i * row_stride_ + group_start_[g]; }

  std::size_t left_;
  std::vector<int> capacities_;
  std::vector<int> degrees_;
  std::vector<std::size_t> group_start_;
  std::size_t row_stride_ = 0;
  std::vector<int> duplicates_;
};

// Each (left vertex, group) gets sparse_degree(n_j, c) distinct duplicates
// chosen uniformly without replacement. Every pair samples from its own
// stream seeded from `rng`, so for a fixed rng state the neighbour list at a
// smaller c is a prefix of the list at a larger c.
SparseGraph sparsify(const GroupedProblem& problem, std::mt19937_64& rng);

// Maximum-weight perfect matching of the duplicated graph restricted to the
// sampled edges (missing edges are absent, not penalized). Shortest augmenting
// paths over adjacency lists with a binary heap. nullopt when the sparse
// graph has no perfect matching. assignment[i] is a group index.
std::optional<MatchingResult> solve_sparse_graph(const GroupedProblem& problem,
                                                 const SparseGraph& graph);

class SparseInfeasibleError : public std::runtime_error {
 public:
  SparseInfeasibleError(const std::string& what, int degree)
      : std::runtime_error(what), degree_(degree) {}
  int degree() const { return degree_; }

 private:
  int degree_;
};

struct SparseSolveReport {
  MatchingResult result;
  int attempts = 0;
  int matched_on_attempt = 0;
  int degree = 0;  // largest per-group degree
  std::size_t edges = 0;
};

inline constexpr int kDefaultMaxRetries = 3;

// Sparsify and solve; on an infeasible sample, resample with fresh randomness
// up to max_retries attempts in total. Throws SparseInfeasibleError when every
// attempt fails.
SparseSolveReport solve_nk_sparse(const GroupedProblem& problem, std::mt19937_64& rng,
                                  int max_retries = kDefaultMaxRetries);

struct SurvivalStats {
  int n = 0;
  int k = 0;
  double c = 0.0;
  int trials = 0;
  int degree = 0;
  double feasibility_rate = 0.0;  // first attempt has a perfect matching
  double agreement_rate = 0.0;    // first attempt recovers the dense optimum
  int dominance_violations = 0;   // sparse objective above dense (must be 0)
};

// Random weights in [0, 1), equal capacities n. Trial t uses seed
// derive_seed(seed, t); results do not depend on `workers`.
SurvivalStats survival_experiment(int n, int k, double c, int trials, std::uint64_t seed,
                                  int workers = 1);

struct BenchRow {
  int size = 0;
  std::string solver;
  double median_ms = 0.0;
  int repeats = 0;
};

// Median wall-clock of solve_nk_naive and solve_nk_sparse on random k-group
// problems with n per group, for each n in sizes.
std::vector<BenchRow> bench_sparse_vs_naive(std::span<const int> sizes, int k, double c,
                                            int repeats, std::uint64_t seed);

// Weights uniform in [0, 1), n per group.
GroupedProblem random_grouped_problem(int n, int k, double c, std::mt19937_64& rng);

}  // namespace rankmatch
