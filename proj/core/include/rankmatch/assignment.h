#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace rankmatch {

class AssignmentError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dense weights of a complete bipartite graph with rows() left vertices and
// cols() right vertices, row-major. The matching solvers need rows() <= cols();
// N:k group weights are N x k.
class AssignmentProblem {
 public:
  AssignmentProblem(std::size_t rows, std::size_t cols, std::vector<double> weights);
  static AssignmentProblem from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double weight(std::size_t i, std::size_t j) const { return weights_[i * cols_ + j]; }
  std::span<const double> row(std::size_t i) const { return {weights_.data() + i * cols_, cols_}; }
  std::span<const double> weights() const { return weights_; }

 private:
  std::size_t rows_;
  std::size_t cols_;
  std::vector<double> weights_;
};

struct MatchingResult {
  // assignment[i] = right vertex matched to left vertex i.
  std::vector<int> assignment;
  // Sum of the matched weights.
  double objective = 0.0;
  // Dual prices (a weighted vertex cover). Empty for the brute-force oracle.
  std::vector<double> left_prices;
  std::vector<double> right_prices;
  bool certificate_valid = false;
};

inline constexpr double kCertificateTolerance = 1e-9;

struct CertificateReport {
  bool valid = false;
  // First violated condition, empty when valid.
  std::string violation;
  explicit operator bool() const { return valid; }
};

// Maximum-weight left-saturating matching by the primal-dual Hungarian
// method. Starts from left prices = row maxima and right prices = 0, grows
// one alternating tree per free left vertex over tight edges, and lowers the
// tree's left prices / raises its right prices by the minimum slack across
// the cut until a free right vertex becomes reachable. Columns are scanned in
// index order, so the result is deterministic. O(rows^2 * cols).
//
// At termination every matched edge is tight, all prices are feasible, and
// right vertices left unmatched keep price 0, so the dual objective equals
// the matching weight.
MatchingResult solve_max_matching(const AssignmentProblem& problem);

// Checks (a) dual feasibility p_i + p_j >= w_ij - tol on every edge,
// (b) tightness of matched edges, (c) the assignment is an injective map that
// covers every left vertex, and (d) right prices are >= 0 and zero on
// unmatched right vertices.
CertificateReport verify_certificate(const AssignmentProblem& problem,
                                     const MatchingResult& result);

// Exhaustive search over all injective maps; refuses rows() > 8.
MatchingResult brute_force_matching(const AssignmentProblem& problem);

inline constexpr std::size_t kBruteForceMaxRows = 8;

// N:k matching by duplicating right vertex j capacities[j] times and solving
// the resulting N x N problem. assignment[i] is the group (original column)
// of left vertex i; prices refer to the duplicated graph.
MatchingResult solve_nk_naive(const AssignmentProblem& weights, std::span<const int> capacities);

// Column layout of the duplicated graph: offsets[j] is the first duplicate of
// group j, offsets.back() == sum(capacities).
std::vector<int> group_offsets(std::span<const int> capacities);

}  // namespace rankmatch
