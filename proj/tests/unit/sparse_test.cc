#include "rankmatch/sparse.h"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <vector>

namespace rankmatch {
namespace {

constexpr double kMissing = -1e7;

// Dense oracle on the duplicated graph: absent edges get a weight so low that
// any perfect matching avoiding them wins.
std::optional<double> dense_restricted_optimum(const GroupedProblem& p, const SparseGraph& g) {
  const std::vector<int> offsets = group_offsets(p.capacities);
  const auto total = static_cast<std::size_t>(offsets.back());
  std::vector<double> w(total * total, kMissing);
  for (std::size_t i = 0; i < p.left(); ++i) {
    for (std::size_t grp = 0; grp < p.groups(); ++grp) {
      for (int dup : g.duplicates(i, grp)) {
        w[i * total + static_cast<std::size_t>(offsets[grp] + dup)] = p.weights.weight(i, grp);
      }
    }
  }
  const MatchingResult r = solve_max_matching(AssignmentProblem(total, total, std::move(w)));
  if (r.objective < kMissing / 2) return std::nullopt;
  return r.objective;
}

void expect_capacities(const GroupedProblem& p, const MatchingResult& r) {
  std::vector<int> used(p.groups(), 0);
  for (int g : r.assignment) ++used[static_cast<std::size_t>(g)];
  EXPECT_EQ(used, p.capacities);
}

TEST(SparseDegree, Formula) {
  EXPECT_EQ(sparse_degree(100, 10.0), 47);
  EXPECT_EQ(sparse_degree(50, 10.0), 40);
  EXPECT_EQ(sparse_degree(20, 0.1), 1);
  EXPECT_EQ(sparse_degree(10, 10.0), 10);
  EXPECT_EQ(sparse_degree(1, 10.0), 1);
}

TEST(Sparsify, DegreeLawAndDistinctDuplicates) {
  std::mt19937_64 rng(1);
  const GroupedProblem p = random_grouped_problem(100, 3, 10.0, rng);
  const SparseGraph g = sparsify(p, rng);
  EXPECT_EQ(g.edge_count(), 300u * 3 * 47);
  for (std::size_t i = 0; i < p.left(); ++i) {
    for (std::size_t grp = 0; grp < 3; ++grp) {
      const auto dups = g.duplicates(i, grp);
      ASSERT_EQ(dups.size(), 47u);
      const std::set<int> unique(dups.begin(), dups.end());
      EXPECT_EQ(unique.size(), 47u);
      EXPECT_GE(*unique.begin(), 0);
      EXPECT_LT(*unique.rbegin(), 100);
    }
  }
}

TEST(Sparsify, UnequalCapacitiesUseTheirOwnDegree) {
  std::mt19937_64 rng(2);
  std::vector<double> w(30 * 2);
  for (double& x : w) x = std::uniform_real_distribution<double>()(rng);
  const GroupedProblem p(AssignmentProblem(30, 2, w), {10, 20}, 1.0);
  const SparseGraph g = sparsify(p, rng);
  EXPECT_EQ(g.degrees()[0], sparse_degree(10, 1.0));
  EXPECT_EQ(g.degrees()[1], sparse_degree(20, 1.0));
}

TEST(Sparsify, SeedDeterminesTheGraph) {
  std::mt19937_64 a(9), b(9), c(10);
  std::mt19937_64 prng(0);
  const GroupedProblem p = random_grouped_problem(40, 4, 2.0, prng);
  const SparseGraph ga = sparsify(p, a);
  EXPECT_EQ(ga, sparsify(p, b));
  EXPECT_FALSE(ga == sparsify(p, c));
}

TEST(Sparsify, SmallerDegreeIsAPrefix) {
  std::mt19937_64 prng(0);
  GroupedProblem lo = random_grouped_problem(60, 2, 2.0, prng);
  GroupedProblem hi = lo;
  hi.c = 6.0;
  std::mt19937_64 a(33), b(33);
  const SparseGraph gl = sparsify(lo, a);
  const SparseGraph gh = sparsify(hi, b);
  for (std::size_t i = 0; i < lo.left(); ++i) {
    for (std::size_t grp = 0; grp < 2; ++grp) {
      const auto small = gl.duplicates(i, grp);
      const auto large = gh.duplicates(i, grp);
      ASSERT_LE(small.size(), large.size());
      EXPECT_TRUE(std::equal(small.begin(), small.end(), large.begin()));
    }
  }
}

TEST(Sparsify, SaturatedGraphIsTheFullDuplication) {
  std::mt19937_64 rng(4);
  const GroupedProblem p = random_grouped_problem(10, 3, 10.0, rng);
  const SparseGraph g = sparsify(p, rng);
  for (std::size_t i = 0; i < p.left(); ++i) {
    for (std::size_t grp = 0; grp < 3; ++grp) {
      std::vector<int> d(g.duplicates(i, grp).begin(), g.duplicates(i, grp).end());
      std::sort(d.begin(), d.end());
      std::vector<int> all(10);
      std::iota(all.begin(), all.end(), 0);
      EXPECT_EQ(d, all);
    }
  }
}

TEST(SolveSparseGraph, AgreesWithRestrictedDenseOracle) {
  for (int t = 0; t < 150; ++t) {
    std::mt19937_64 rng(500 + t);
    const int n = 4 + t % 9;
    const int k = 1 + t % 3;
    const double c = 0.4 + 0.1 * (t % 8);
    const GroupedProblem p = random_grouped_problem(n, k, c, rng);
    const SparseGraph g = sparsify(p, rng);
    const auto sparse = solve_sparse_graph(p, g);
    const auto oracle = dense_restricted_optimum(p, g);
    ASSERT_EQ(sparse.has_value(), oracle.has_value()) << "trial " << t;
    if (sparse) {
      EXPECT_NEAR(sparse->objective, *oracle, 1e-9) << "trial " << t;
      expect_capacities(p, *sparse);
    }
  }
}

TEST(SolveNkSparse, SaturatedEqualsNaive) {
  for (int t = 0; t < 40; ++t) {
    std::mt19937_64 rng(t);
    const GroupedProblem p = random_grouped_problem(10, 4, 10.0, rng);
    const MatchingResult dense = solve_nk_naive(p.weights, p.capacities);
    const SparseSolveReport r = solve_nk_sparse(p, rng);
    EXPECT_EQ(r.result.objective, dense.objective);
    EXPECT_EQ(r.result.assignment, dense.assignment);
    EXPECT_EQ(r.matched_on_attempt, 1);
  }
}

TEST(SolveNkSparse, SingleGroupTakesTheColumnSum) {
  std::mt19937_64 rng(3);
  const GroupedProblem p = random_grouped_problem(100, 1, 10.0, rng);
  const SparseSolveReport r = solve_nk_sparse(p, rng);
  double sum = 0.0;
  for (std::size_t i = 0; i < p.left(); ++i) sum += p.weights.weight(i, 0);
  EXPECT_NEAR(r.result.objective, sum, 1e-9);
  expect_capacities(p, r.result);
}

TEST(SolveNkSparse, NeverBeatsTheDenseOptimum) {
  for (int t = 0; t < 60; ++t) {
    std::mt19937_64 rng(1000 + t);
    const GroupedProblem p = random_grouped_problem(30, 3, 2.0, rng);
    const MatchingResult dense = solve_nk_naive(p.weights, p.capacities);
    const SparseSolveReport r = solve_nk_sparse(p, rng);
    EXPECT_LE(r.result.objective, dense.objective + 1e-9);
    expect_capacities(p, r.result);
  }
}

TEST(SolveNkSparse, SameSeedSameReport) {
  std::mt19937_64 prng(8);
  const GroupedProblem p = random_grouped_problem(50, 4, 10.0, prng);
  std::mt19937_64 a(1), b(1);
  const SparseSolveReport ra = solve_nk_sparse(p, a);
  const SparseSolveReport rb = solve_nk_sparse(p, b);
  EXPECT_EQ(ra.result.assignment, rb.result.assignment);
  EXPECT_EQ(ra.result.objective, rb.result.objective);
  EXPECT_EQ(ra.attempts, rb.attempts);
  EXPECT_EQ(ra.degree, 40);
}

TEST(SolveNkSparse, ThrowsWithDegreeWhenEveryAttemptFails) {
  std::mt19937_64 rng(5);
  // Degree 1 in a single group of 20: a perfect matching needs the 20 random
  // picks to form a permutation.
  const GroupedProblem p = random_grouped_problem(20, 1, 0.1, rng);
  try {
    solve_nk_sparse(p, rng, 3);
    FAIL() << "expected SparseInfeasibleError";
  } catch (const SparseInfeasibleError& e) {
    EXPECT_EQ(e.degree(), 1);
  }
  EXPECT_THROW(solve_nk_sparse(p, rng, 0), std::invalid_argument);
}

TEST(SurvivalExperiment, SaturationGivesCertainty) {
  const SurvivalStats s = survival_experiment(8, 3, 10.0, 50, 4);
  EXPECT_EQ(s.feasibility_rate, 1.0);
  EXPECT_EQ(s.agreement_rate, 1.0);
  EXPECT_EQ(s.dominance_violations, 0);
}

TEST(SurvivalExperiment, NearThresholdDegreeOftenFails) {
  const SurvivalStats s = survival_experiment(20, 1, 0.1, 200, 6);
  EXPECT_EQ(s.degree, 1);
  EXPECT_LT(s.feasibility_rate, 0.5);
}

TEST(SurvivalExperiment, WorkerCountDoesNotMatter) {
  const SurvivalStats a = survival_experiment(20, 3, 1.0, 60, 12, 1);
  const SurvivalStats b = survival_experiment(20, 3, 1.0, 60, 12, 4);
  EXPECT_EQ(a.feasibility_rate, b.feasibility_rate);
  EXPECT_EQ(a.agreement_rate, b.agreement_rate);
}

TEST(SurvivalExperiment, RejectsOversizedInstances) {
  EXPECT_THROW(survival_experiment(300, 4, 10.0, 1, 1), std::invalid_argument);
}

TEST(BenchSparseVsNaive, TinyTableIsWellFormed) {
  const std::vector<int> sizes{5, 10};
  const std::vector<BenchRow> rows = bench_sparse_vs_naive(sizes, 2, 10.0, 3, 1);
  ASSERT_EQ(rows.size(), 4u);
  EXPECT_EQ(rows[0].solver, "naive");
  EXPECT_EQ(rows[1].solver, "sparse");
  EXPECT_EQ(rows[2].size, 10);
  for (const auto& r : rows) {
    EXPECT_GE(r.median_ms, 0.0);
    EXPECT_EQ(r.repeats, 3);
  }
}

}  // namespace
}  // namespace rankmatch
