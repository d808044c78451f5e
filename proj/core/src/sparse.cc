#include "rankmatch/sparse.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <queue>
#include <utility>

#include "rankmatch/common.h"
#include "rankmatch/parallel.h"

namespace rankmatch {

GroupedProblem::GroupedProblem(AssignmentProblem w, std::vector<int> caps, double c_factor)
    : weights(std::move(w)), capacities(std::move(caps)), c(c_factor) {
  if (capacities.size() != weights.cols()) throw AssignmentError("need one capacity per group");
  const std::vector<int> offsets = group_offsets(capacities);
  if (static_cast<std::size_t>(offsets.back()) != weights.rows()) {
    throw AssignmentError("capacities must sum to the number of left vertices");
  }
  if (!(c > 0.0)) throw AssignmentError("sparsity constant c must be positive");
}

int sparse_degree(int group_size, double c) {
  const double raw = std::ceil(c * std::log(static_cast<double>(group_size)));
  const int d = raw >= group_size ? group_size : static_cast<int>(raw);
  return std::max(1, d);
}

SparseGraph::SparseGraph(std::size_t left, std::vector<int> capacities, std::vector<int> degrees)
    : left_(left), capacities_(std::move(capacities)), degrees_(std::move(degrees)) {
  group_start_.resize(degrees_.size());
  for (std::size_t g = 0; g < degrees_.size(); ++g) {
    group_start_[g] = row_stride_;
    row_stride_ += static_cast<std::size_t>(degrees_[g]);
  }
  duplicates_.assign(left_ * row_stride_, 0);
}

SparseGraph sparsify(const GroupedProblem& problem, std::mt19937_64& rng) {
  std::vector<int> degrees;
  for (int cap : problem.capacities) degrees.push_back(sparse_degree(cap, problem.c));
  SparseGraph graph(problem.left(), problem.capacities, degrees);

  const int widest = *std::max_element(problem.capacities.begin(), problem.capacities.end());
  std::vector<char> taken(static_cast<std::size_t>(widest), 0);
  for (std::size_t i = 0; i < problem.left(); ++i) {
    for (std::size_t g = 0; g < problem.groups(); ++g) {
      std::mt19937_64 local(rng());
      const int n = problem.capacities[g];
      std::uniform_int_distribution<int> pick(0, n - 1);
      auto out = graph.mutable_duplicates(i, g);
      for (auto& slot : out) {
        int v;
        do {
          v = pick(local);
        } while (taken[v]);
        taken[v] = 1;
        slot = v;
      }
      for (int v : out) taken[v] = 0;
    }
  }
  return graph;
}

std::optional<MatchingResult> solve_sparse_graph(const GroupedProblem& problem,
                                                 const SparseGraph& graph) {
  const std::size_t n_left = problem.left();
  const std::vector<int> offsets = group_offsets(problem.capacities);
  const auto n_right = static_cast<std::size_t>(offsets.back());
  constexpr double kInf = std::numeric_limits<double>::infinity();

  // CSR adjacency over the duplicated right vertices.
  std::vector<std::size_t> begin(n_left + 1, 0);
  std::vector<int> head;
  std::vector<double> weight;
  head.reserve(graph.edge_count());
  weight.reserve(graph.edge_count());
  for (std::size_t i = 0; i < n_left; ++i) {
    for (std::size_t g = 0; g < graph.groups(); ++g) {
      const double w = problem.weights.weight(i, g);
      for (int dup : graph.duplicates(i, g)) {
        head.push_back(offsets[g] + dup);
        weight.push_back(w);
      }
    }
    begin[i + 1] = head.size();
  }

  std::vector<double> pl(n_left, -kInf), pr(n_right, 0.0);
  for (std::size_t i = 0; i < n_left; ++i) {
    for (std::size_t e = begin[i]; e < begin[i + 1]; ++e) pl[i] = std::max(pl[i], weight[e]);
    if (begin[i] == begin[i + 1]) return std::nullopt;
  }

  std::vector<int> match_left(n_left, -1), match_right(n_right, -1);
  std::vector<double> dist(n_right, kInf), left_dist(n_left, 0.0);
  std::vector<int> pred(n_right, -1);
  std::vector<char> done(n_right, 0);
  std::vector<int> touched, finalized;
  std::vector<std::size_t> tree_left;
  using Entry = std::pair<double, int>;
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;

  auto relax = [&](std::size_t i, double base) {
    for (std::size_t e = begin[i]; e < begin[i + 1]; ++e) {
      const int j = head[e];
      if (done[j]) continue;
      const double d = base + std::max(0.0, pl[i] + pr[j] - weight[e]);
      if (d < dist[j]) {
        if (dist[j] == kInf) touched.push_back(j);
        dist[j] = d;
        pred[j] = static_cast<int>(i);
        heap.emplace(d, j);
      }
    }
  };

  for (std::size_t root = 0; root < n_left; ++root) {
    tree_left.assign(1, root);
    left_dist[root] = 0.0;
    relax(root, 0.0);

    int found = -1;
    double reach = 0.0;
    while (!heap.empty()) {
      const auto [d, j] = heap.top();
      heap.pop();
      if (done[j] || d > dist[j]) continue;
      done[j] = 1;
      finalized.push_back(j);
      if (match_right[j] < 0) {
        found = j;
        reach = d;
        break;
      }
      const auto i = static_cast<std::size_t>(match_right[j]);
      left_dist[i] = d;
      tree_left.push_back(i);
      relax(i, d);
    }
    if (found < 0) return std::nullopt;

    for (std::size_t i : tree_left) pl[i] -= reach - left_dist[i];
    for (int j : finalized) pr[j] += reach - dist[j];
    for (int j = found; j >= 0;) {
      const int i = pred[j];
      const int next = match_left[i];
      match_right[j] = i;
      match_left[i] = j;
      j = next;
    }

    for (int j : touched) {
      dist[j] = kInf;
      done[j] = 0;
    }
    for (int j : finalized) done[j] = 0;
    touched.clear();
    finalized.clear();
    heap = {};
  }

  MatchingResult result;
  result.assignment.resize(n_left);
  for (std::size_t i = 0; i < n_left; ++i) {
    const int g = static_cast<int>(std::upper_bound(offsets.begin(), offsets.end(), match_left[i]) -
                                   offsets.begin()) - 1;
    result.assignment[i] = g;
    result.objective += problem.weights.weight(i, static_cast<std::size_t>(g));
  }
  result.left_prices = std::move(pl);
  result.right_prices = std::move(pr);
  result.certificate_valid = false;
  return result;
}

SparseSolveReport solve_nk_sparse(const GroupedProblem& problem, std::mt19937_64& rng,
                                  int max_retries) {
  if (max_retries < 1) throw std::invalid_argument("max_retries must be >= 1");
  SparseSolveReport report;
  for (int attempt = 1; attempt <= max_retries; ++attempt) {
    const SparseGraph graph = sparsify(problem, rng);
    report.attempts = attempt;
    report.degree = *std::max_element(graph.degrees().begin(), graph.degrees().end());
    report.edges = graph.edge_count();
    if (auto result = solve_sparse_graph(problem, graph)) {
      report.result = std::move(*result);
      report.matched_on_attempt = attempt;
      return report;
    }
  }
  throw SparseInfeasibleError("sparse graph had no perfect matching in " +
                                  std::to_string(max_retries) + " attempts at degree " +
                                  std::to_string(report.degree) + "; raise c",
                              report.degree);
}

GroupedProblem random_grouped_problem(int n, int k, double c, std::mt19937_64& rng) {
  const auto total = static_cast<std::size_t>(n) * static_cast<std::size_t>(k);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> w(total * static_cast<std::size_t>(k));
  for (double& v : w) v = unit(rng);
  return GroupedProblem(AssignmentProblem(total, static_cast<std::size_t>(k), std::move(w)),
                        std::vector<int>(static_cast<std::size_t>(k), n), c);
}

SurvivalStats survival_experiment(int n, int k, double c, int trials, std::uint64_t seed,
                                  int workers) {
  if (n < 1 || k < 1 || trials < 1) throw std::invalid_argument("survival_experiment: counts must be positive");
  if (n * k > 1000) throw std::invalid_argument("survival_experiment: n*k must be <= 1000");
  struct Outcome {
    bool feasible = false;
    bool agrees = false;
    bool violates = false;
  };
  std::vector<Outcome> outcomes(static_cast<std::size_t>(trials));
  parallel_for(outcomes.size(), workers, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    const GroupedProblem problem = random_grouped_problem(n, k, c, rng);
    const MatchingResult dense = solve_nk_naive(problem.weights, problem.capacities);
    const SparseGraph graph = sparsify(problem, rng);
    const auto sparse = solve_sparse_graph(problem, graph);
    Outcome& o = outcomes[t];
    o.feasible = sparse.has_value();
    if (sparse) {
      o.agrees = std::abs(sparse->objective - dense.objective) <= 1e-9;
      o.violates = sparse->objective > dense.objective + 1e-9;
    }
  });

  SurvivalStats stats;
  stats.n = n;
  stats.k = k;
  stats.c = c;
  stats.trials = trials;
  stats.degree = sparse_degree(n, c);
  int feasible = 0, agree = 0;
  for (const auto& o : outcomes) {
    feasible += o.feasible;
    agree += o.agrees;
    stats.dominance_violations += o.violates;
  }
  stats.feasibility_rate = static_cast<double>(feasible) / trials;
  stats.agreement_rate = static_cast<double>(agree) / trials;
  return stats;
}

std::vector<BenchRow> bench_sparse_vs_naive(std::span<const int> sizes, int k, double c,
                                            int repeats, std::uint64_t seed) {
  using Clock = std::chrono::steady_clock;
  auto median = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
  };
  std::vector<BenchRow> rows;
  for (int n : sizes) {
    std::vector<double> naive_ms, sparse_ms;
    for (int r = 0; r < repeats; ++r) {
      std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(n) * 1000003ULL + r));
      const GroupedProblem problem = random_grouped_problem(n, k, c, rng);

      auto t0 = Clock::now();
      const MatchingResult dense = solve_nk_naive(problem.weights, problem.capacities);
      auto t1 = Clock::now();
      const SparseSolveReport sparse = solve_nk_sparse(problem, rng);
      auto t2 = Clock::now();
      if (sparse.result.objective > dense.objective + 1e-9) {
        throw std::logic_error("sparse objective exceeds the dense optimum");
      }
      naive_ms.push_back(std::chrono::duration<double, std::milli>(t1 - t0).count());
      sparse_ms.push_back(std::chrono::duration<double, std::milli>(t2 - t1).count());
    }
    rows.push_back({n, "naive", median(naive_ms), repeats});
    rows.push_back({n, "sparse", median(sparse_ms), repeats});
  }
  return rows;
}

}  // namespace rankmatch
