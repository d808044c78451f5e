#include "rankmatch/experiments.h"

#include <gtest/gtest.h>

#include <cmath>
#include <numeric>

namespace rankmatch {
namespace {

ExperimentConfig small_exp1(std::uint64_t seed, int workers = 1) {
  ExperimentConfig c;
  c.experiment = ExperimentId::kExp1;
  c.n = 10;
  c.trials = 40;
  c.seed = seed;
  c.workers = workers;
  return c;
}

ExperimentConfig small_delayed(int workers) {
  ExperimentConfig c;
  c.experiment = ExperimentId::kDelayed;
  c.n = 20;
  c.seed = 5;
  c.cohorts = 10000;
  c.seeds = 2;
  c.workers = workers;
  return c;
}

std::string json(const ResultBundle& b) { return serialize(b, OutputFormat::kJson); }

TEST(Experiments, RandomizedRunsNeedASeed) {
  ExperimentConfig c = small_exp1(1);
  c.seed.reset();
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
  c.experiment = ExperimentId::kHire;
  EXPECT_THROW(run_experiment(c), std::invalid_argument);
}

TEST(Experiments, SameSeedGivesIdenticalBytes) {
  EXPECT_EQ(json(run_exp1(small_exp1(3))), json(run_exp1(small_exp1(3))));
  EXPECT_EQ(serialize(run_exp1(small_exp1(3)), OutputFormat::kCsv),
            serialize(run_exp1(small_exp1(3)), OutputFormat::kCsv));
}

TEST(Experiments, WorkerCountDoesNotChangeOutput) {
  EXPECT_EQ(json(run_exp1(small_exp1(3, 1))), json(run_exp1(small_exp1(3, 4))));
  EXPECT_EQ(json(run_delayed_experiment(small_delayed(1))), json(run_delayed_experiment(small_delayed(3))));
}

TEST(Experiments, DifferentSeedsDifferButShareLayout) {
  const ResultBundle a = run_exp1(small_exp1(1));
  const ResultBundle b = run_exp1(small_exp1(2));
  EXPECT_NE(a.series.at("aadr"), b.series.at("aadr"));
  ASSERT_EQ(a.series.size(), b.series.size());
  for (auto ia = a.series.begin(), ib = b.series.begin(); ia != a.series.end(); ++ia, ++ib) {
    EXPECT_EQ(ia->first, ib->first);
  }
  EXPECT_EQ(a.seed, 1u);
  EXPECT_EQ(a.config.at("seed"), 1);
  EXPECT_FALSE(a.config.contains("workers"));
}

TEST(Experiments, SingleCandidateHasZeroDeviation) {
  ExperimentConfig c = small_exp1(4);
  c.n = 1;
  c.trials = 1;
  for (ExperimentId id : {ExperimentId::kExp1, ExperimentId::kExp2}) {
    c.experiment = id;
    const ResultBundle b = run_experiment(c);
    ASSERT_EQ(b.series.at("aadr").size(), 1u);
    EXPECT_EQ(b.series.at("aadr")[0], 0.0);
  }
}

TEST(Experiments, StandardErrorShrinksWithTrials) {
  ExperimentConfig c = small_exp1(6);
  c.n = 25;
  c.trials = 400;
  const ResultBundle few = run_exp1(c);
  c.trials = 1600;
  const ResultBundle many = run_exp1(c);
  const auto& se_few = few.series.at("aadr_standard_error");
  const auto& se_many = many.series.at("aadr_standard_error");
  double ratio = 0.0;
  int used = 0;
  for (std::size_t t = 0; t < se_few.size(); ++t) {
    if (se_few[t] <= 0.0) continue;
    ratio += se_many[t] / se_few[t];
    ++used;
  }
  ASSERT_GT(used, 20);
  // Four times the trials halves the standard error.
  EXPECT_NEAR(ratio / used, 0.5, 0.06);
}

TEST(Experiments, Exp1ReportsSteppedSummary) {
  ExperimentConfig c = small_exp1(7);
  c.n = 25;
  c.trials = 20;
  const ResultBundle b = run_exp1(c);
  EXPECT_EQ(b.series.at("aadr").size(), 25u);
  EXPECT_EQ(b.summary.at("aadr_step_24"), b.series.at("aadr")[23]);
  EXPECT_NEAR(b.summary.at("random_baseline"), (25.0 * 25.0 - 1.0) / 75.0, 1e-12);
  EXPECT_EQ(b.experiment, "exp1");
}

TEST(Experiments, HiringEveryoneHiresOnArrival) {
  ExperimentConfig c;
  c.experiment = ExperimentId::kHire;
  c.n = 12;
  c.trials = 5;
  c.top_m = 12;
  c.seed = 2;
  const ResultBundle b = run_hire(c);
  EXPECT_EQ(b.summary.at("mean_hires"), 12.0);
  EXPECT_EQ(b.summary.at("fraction_hired_on_arrival"), 1.0);
  EXPECT_EQ(b.summary.at("max_hire_latency"), 0.0);
  EXPECT_EQ(b.summary.at("fraction_all_top_m_hired"), 1.0);
  EXPECT_EQ(b.table.rows.size(), 60u);
}

TEST(Experiments, SparseSurvivalSummary) {
  ExperimentConfig c;
  c.experiment = ExperimentId::kSparse;
  c.n = 8;
  c.k = 3;
  c.trials = 20;
  c.seed = 1;
  const ResultBundle b = run_sparse_experiment(c);
  EXPECT_EQ(b.summary.at("feasibility_rate"), 1.0);
  EXPECT_EQ(b.summary.at("agreement_rate"), 1.0);
  EXPECT_EQ(b.summary.at("degree"), 8.0);
}

TEST(Experiments, RankGradebookFullInformation) {
  ExperimentConfig c;
  c.experiment = ExperimentId::kRank;
  c.csv_path = std::string(RANKMATCH_TEST_DATA) + "/gradebook.csv";
  c.surrogate.fit_rows = 10;
  const ResultBundle b = run_rank(c);
  ASSERT_EQ(b.table.rows.size(), 20u);
  EXPECT_EQ(b.table.columns.front(), "candidate");
  // With everything observed the last snapshot sorts the stream exactly.
  EXPECT_EQ(b.summary.at("mean_deviation_final"), 0.0);
}

TEST(Experiments, ConfigEchoAndNames) {
  for (ExperimentId id : {ExperimentId::kExp1, ExperimentId::kExp2, ExperimentId::kDelayed,
                          ExperimentId::kSparse, ExperimentId::kHire, ExperimentId::kRank}) {
    EXPECT_EQ(parse_experiment(experiment_name(id)), id);
  }
  EXPECT_THROW(parse_experiment("exp3"), std::invalid_argument);
  ExperimentConfig c;
  EXPECT_EQ(config_to_json(c).at("tau"), "never");
  EXPECT_TRUE(config_to_json(c).at("seed").is_null());
  c.tau = 3;
  c.seed = 11;
  EXPECT_EQ(config_to_json(c).at("tau"), 3);
  EXPECT_EQ(config_to_json(c).at("seed"), 11);
}

TEST(MedianOf, OddAndEven) {
  EXPECT_EQ(median_of({3.0, 1.0, 2.0}), 2.0);
  EXPECT_EQ(median_of({4.0, 1.0, 2.0, 3.0}), 2.5);
  EXPECT_THROW(median_of({}), std::invalid_argument);
}

}  // namespace
}  // namespace rankmatch
