#include "rankmatch/assignment.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace rankmatch {

AssignmentProblem::AssignmentProblem(std::size_t rows, std::size_t cols,
                                     std::vector<double> weights)
    : rows_(rows), cols_(cols), weights_(std::move(weights)) {
  if (rows_ < 1 || cols_ < 1) throw AssignmentError("assignment problem must be non-empty");
  if (weights_.size() != rows_ * cols_) throw AssignmentError("weight matrix has the wrong size");
  for (double w : weights_) {
    if (!std::isfinite(w)) throw AssignmentError("weights must be finite");
  }
}

AssignmentProblem AssignmentProblem::from_rows(const std::vector<std::vector<double>>& rows) {
  if (rows.empty()) throw AssignmentError("assignment problem must be non-empty");
  const std::size_t cols = rows.front().size();
  std::vector<double> flat;
  flat.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw AssignmentError("ragged weight matrix");
    flat.insert(flat.end(), r.begin(), r.end());
  }
  return AssignmentProblem(rows.size(), cols, std::move(flat));
}

MatchingResult solve_max_matching(const AssignmentProblem& problem) {
  const std::size_t L = problem.rows();
  const std::size_t R = problem.cols();
  if (L > R) throw AssignmentError("left-saturating matching needs rows <= cols");
  constexpr double kInf = std::numeric_limits<double>::infinity();

  std::vector<double> pl(L), pr(R, 0.0);
  for (std::size_t i = 0; i < L; ++i) {
    const auto row = problem.row(i);
    pl[i] = *std::max_element(row.begin(), row.end());
  }

  std::vector<int> match_left(L, -1), match_right(R, -1);
  std::vector<double> min_slack(R);
  std::vector<int> way(R);
  std::vector<char> right_in_tree(R);
  std::vector<std::size_t> tree_left, tree_right;
  tree_left.reserve(L);
  tree_right.reserve(R);

  for (std::size_t root = 0; root < L; ++root) {
    std::fill(min_slack.begin(), min_slack.end(), kInf);
    std::fill(way.begin(), way.end(), -1);
    std::fill(right_in_tree.begin(), right_in_tree.end(), 0);
    tree_left.clear();
    tree_right.clear();
    tree_left.push_back(root);
    std::size_t current = root;

    for (;;) {
      // Relax the edges of the newest tree vertex and find the cheapest
      // right vertex outside the tree.
      const double* w = problem.row(current).data();
      const double p = pl[current];
      double delta = kInf;
      std::size_t best = R;
      for (std::size_t j = 0; j < R; ++j) {
        if (right_in_tree[j]) continue;
        const double s = p + pr[j] - w[j];
        if (s < min_slack[j]) {
          min_slack[j] = s;
          way[j] = static_cast<int>(current);
        }
        if (min_slack[j] < delta) {
          delta = min_slack[j];
          best = j;
        }
      }

      // Dual step: makes (way[best], best) tight and keeps every edge feasible.
      if (delta != 0.0) {
        for (std::size_t i : tree_left) pl[i] -= delta;
        for (std::size_t j : tree_right) pr[j] += delta;
        for (std::size_t j = 0; j < R; ++j) {
          if (!right_in_tree[j]) min_slack[j] -= delta;
        }
      }
      right_in_tree[best] = 1;
      tree_right.push_back(best);

      if (match_right[best] < 0) {
        // Augment along the alternating path ending at `best`.
        for (int j = static_cast<int>(best); j >= 0;) {
          const int i = way[j];
          const int next = match_left[i];
          match_right[j] = i;
          match_left[i] = j;
          j = next;
        }
        break;
      }
      current = static_cast<std::size_t>(match_right[best]);
      tree_left.push_back(current);
    }
  }

  MatchingResult result;
  result.assignment = std::move(match_left);
  for (std::size_t i = 0; i < L; ++i) {
    result.objective += problem.weight(i, static_cast<std::size_t>(result.assignment[i]));
  }
  result.left_prices = std::move(pl);
  result.right_prices = std::move(pr);
  result.certificate_valid = verify_certificate(problem, result).valid;
  return result;
}

CertificateReport verify_certificate(const AssignmentProblem& problem,
                                     const MatchingResult& result) {
  const std::size_t L = problem.rows();
  const std::size_t R = problem.cols();
  auto fail = [](const std::string& what) { return CertificateReport{false, what}; };

  if (result.assignment.size() != L) return fail("assignment does not cover every left vertex");
  std::vector<char> used(R, 0);
  for (std::size_t i = 0; i < L; ++i) {
    const int j = result.assignment[i];
    if (j < 0 || static_cast<std::size_t>(j) >= R) {
      return fail("left vertex " + std::to_string(i) + " is unassigned");
    }
    if (used[j]) return fail("right vertex " + std::to_string(j) + " is assigned twice");
    used[j] = 1;
  }
  if (result.left_prices.size() != L || result.right_prices.size() != R) {
    return fail("dual prices missing");
  }

  const double tol = kCertificateTolerance;
  for (std::size_t i = 0; i < L; ++i) {
    for (std::size_t j = 0; j < R; ++j) {
      const double slack = result.left_prices[i] + result.right_prices[j] - problem.weight(i, j);
      if (slack < -tol) {
        std::ostringstream msg;
        msg << "dual infeasible on edge (" << i << ", " << j << "): slack " << slack;
        return fail(msg.str());
      }
    }
    const auto j = static_cast<std::size_t>(result.assignment[i]);
    const double slack = result.left_prices[i] + result.right_prices[j] - problem.weight(i, j);
    if (std::abs(slack) > tol) {
      std::ostringstream msg;
      msg << "matched edge (" << i << ", " << j << ") is not tight: slack " << slack;
      return fail(msg.str());
    }
  }
  for (std::size_t j = 0; j < R; ++j) {
    if (result.right_prices[j] < -tol) {
      return fail("right vertex " + std::to_string(j) + " has a negative price");
    }
    if (!used[j] && std::abs(result.right_prices[j]) > tol) {
      return fail("unmatched right vertex " + std::to_string(j) + " has a nonzero price");
    }
  }
  return {true, {}};
}

MatchingResult brute_force_matching(const AssignmentProblem& problem) {
  const std::size_t L = problem.rows();
  const std::size_t R = problem.cols();
  if (L > kBruteForceMaxRows) {
    throw AssignmentError("brute_force_matching refuses more than 8 left vertices");
  }
  if (L > R) throw AssignmentError("left-saturating matching needs rows <= cols");

  std::vector<int> current(L, -1), best;
  std::vector<char> used(R, 0);
  double best_value = -std::numeric_limits<double>::infinity();

  auto search = [&](auto&& self, std::size_t i, double value) -> void {
    if (i == L) {
      if (value > best_value) {
        best_value = value;
        best = current;
      }
      return;
    }
    for (std::size_t j = 0; j < R; ++j) {
      if (used[j]) continue;
      used[j] = 1;
      current[i] = static_cast<int>(j);
      self(self, i + 1, value + problem.weight(i, j));
      used[j] = 0;
    }
  };
  search(search, 0, 0.0);

  MatchingResult result;
  result.assignment = std::move(best);
  for (std::size_t i = 0; i < L; ++i) {
    result.objective += problem.weight(i, static_cast<std::size_t>(result.assignment[i]));
  }
  return result;
}

std::vector<int> group_offsets(std::span<const int> capacities) {
  std::vector<int> offsets(capacities.size() + 1, 0);
  for (std::size_t j = 0; j < capacities.size(); ++j) {
    if (capacities[j] < 1) throw AssignmentError("group capacities must be positive");
    offsets[j + 1] = offsets[j] + capacities[j];
  }
  return offsets;
}

MatchingResult solve_nk_naive(const AssignmentProblem& weights, std::span<const int> capacities) {
  if (capacities.size() != weights.cols()) {
    throw AssignmentError("need one capacity per group");
  }
  const std::vector<int> offsets = group_offsets(capacities);
  const auto total = static_cast<std::size_t>(offsets.back());
  if (total != weights.rows()) {
    throw AssignmentError("capacities sum to " + std::to_string(total) + " but there are " +
                          std::to_string(weights.rows()) + " left vertices");
  }

  std::vector<double> expanded(total * total);
  for (std::size_t i = 0; i < total; ++i) {
    double* out = expanded.data() + i * total;
    for (std::size_t g = 0; g < capacities.size(); ++g) {
      std::fill(out + offsets[g], out + offsets[g + 1], weights.weight(i, g));
    }
  }
  const AssignmentProblem dup(total, total, std::move(expanded));
  MatchingResult result = solve_max_matching(dup);
  for (int& j : result.assignment) {
    j = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), j) - offsets.begin()) - 1;
  }
  return result;
}

}  // namespace rankmatch
