#include "rankmatch/experiments.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <stdexcept>

#include "rankmatch/common.h"
#include "rankmatch/distributions.h"
#include "rankmatch/order_statistics.h"
#include "rankmatch/parallel.h"
#include "rankmatch/rank_likelihood.h"
#include "rankmatch/sparse.h"

namespace rankmatch {
namespace {

constexpr double kHireQuantizeStep = 3.0;
constexpr double kDelayedQuantizeStep = 5.0;
// Half-width, in fitted standard deviations, of the grids built around a fit.
constexpr double kFullInfoSpan = 6.0;
constexpr double kDelayedSpan = 5.0;

std::uint64_t require_seed(const ExperimentConfig& cfg) {
  if (!cfg.seed) {
    throw std::invalid_argument(experiment_name(cfg.experiment) + " is randomized and needs a seed");
  }
  return *cfg.seed;
}

void require_positive(int v, const char* what) {
  if (v < 1) throw std::invalid_argument(std::string(what) + " must be positive");
}

ResultBundle make_bundle(const ExperimentConfig& cfg) {
  ResultBundle b;
  b.experiment = experiment_name(cfg.experiment);
  b.config = config_to_json(cfg);
  b.seed = cfg.seed.value_or(0);
  b.version = kVersion;
  return b;
}

double step_or_default(const ExperimentConfig& cfg, double fallback) {
  return cfg.quantize > 0.0 ? cfg.quantize : fallback;
}

// Records for one exam-style run: the CSV as given, or a fresh surrogate of
// fit_rows + n rows.
std::vector<ExamRecord> exam_records(const ExperimentConfig& cfg, std::mt19937_64& rng) {
  if (!cfg.csv_path.empty()) {
    CsvSchema schema;
    schema.weights = cfg.surrogate.weights;
    return ingest_csv(cfg.csv_path, schema);
  }
  SurrogateSpec spec = cfg.surrogate;
  spec.records = spec.fit_rows + cfg.n;
  return generate_surrogate(spec, rng);
}

int stream_size(const ExperimentConfig& cfg, std::size_t records) {
  const int fit = cfg.surrogate.fit_rows;
  if (fit < 2) throw std::invalid_argument("need at least 2 rows to fit");
  if (static_cast<int>(records) <= fit) {
    throw std::invalid_argument("need more records than the " + std::to_string(fit) + " fit rows");
  }
  return static_cast<int>(records) - fit;
}

OrderStatisticTable fitted_gaussian_table(std::span<const double> fit_scores, double step,
                                          int cohort) {
  const GaussianFit fit = fit_gaussian(fit_scores);
  const double sd = std::sqrt(fit.variance);
  const BinAxis axis =
      BinAxis::centered_on_multiples(fit.mean - kFullInfoSpan * sd, fit.mean + kFullInfoSpan * sd, step);
  const DiscreteDistribution dist = discretize(
      [&](double x) { return gaussian_pdf(x, fit.mean, sd); }, axis.lower, axis.upper(), step);
  return order_statistic_table(dist, cohort);
}

std::string fmt(double v) { return format_number(v); }

ResultBundle run_full_info_aadr(const ExperimentConfig& cfg, bool gaussian) {
  const std::uint64_t seed = require_seed(cfg);
  require_positive(cfg.n, "n");
  require_positive(cfg.trials, "trials");
  const DiscreteDistribution dist =
      gaussian ? discretize([](double x) { return gaussian_pdf(x, 0.0, 1.0); }, -5.0, 5.0, cfg.bin_width)
               : discretize([](double) { return 1.0; }, 0.0, 1.0, cfg.bin_width);
  const OrderStatisticTable table = order_statistic_table(dist, cfg.n);

  const auto trials = static_cast<std::size_t>(cfg.trials);
  const auto n = static_cast<std::size_t>(cfg.n);
  std::vector<std::vector<Rank>> truth(trials), predicted(trials);
  std::vector<int> clamped(trials, 0);
  parallel_for(trials, cfg.workers, [&](std::size_t t) {
    std::mt19937_64 rng(derive_seed(seed, t));
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<double> scores(n);
    for (double& s : scores) s = gaussian ? normal(rng) : unit(rng);
    truth[t] = true_ranks(scores);

    std::vector<ScoredCandidate> revealed;
    predicted[t].resize(n);
    for (std::size_t step = 0; step < n; ++step) {
      revealed.push_back({static_cast<int>(step), scores[step]});
      const RankingSnapshot snap = predict_ranks_full_info(revealed, table);
      predicted[t][step] = snap.predicted_rank.at(static_cast<int>(step));
      if (step + 1 == n) clamped[t] = snap.clamped;
    }
  });

  const AadrSummary summary = aadr(truth, predicted);
  ResultBundle b = make_bundle(cfg);
  b.series["aadr"] = summary.mean;
  b.series["aadr_standard_error"] = summary.standard_error;
  b.summary["mean_aadr"] =
      std::accumulate(summary.mean.begin(), summary.mean.end(), 0.0) / static_cast<double>(n);
  for (std::size_t step : {std::size_t{1}, std::size_t{12}, std::size_t{24}}) {
    if (step <= n) b.summary["aadr_step_" + std::to_string(step)] = summary.mean[step - 1];
  }
  b.summary["random_baseline"] = random_rank_baseline(cfg.n);
  b.summary["clamped_scores"] = std::accumulate(clamped.begin(), clamped.end(), 0.0);
  b.notes["distribution"] = gaussian ? "standard Gaussian on [-5, 5]" : "uniform on [0, 1]";
  b.notes["reference_aadr"] = gaussian ? "step 1: 1.56, step 12: 1.54, step 24: 0.66 (N=25, 1000 trials)"
                                       : "step 1: 1.53, step 12: 1.45, step 24: 0.52 (N=25, 1000 trials)";
  return b;
}

struct DelayedRun {
  std::vector<double> deviation;
  double mean = 0.0;
  double median = 0.0;
  int clamped = 0;
  bool jittered = false;
};

DelayedRun delayed_once(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(derive_seed(seed, 2 * index));
  std::vector<ExamRecord> records = exam_records(cfg, rng);
  shuffle_records(records, rng);
  const int n = stream_size(cfg, records.size());
  const int fit_rows = cfg.surrogate.fit_rows;
  const double step = step_or_default(cfg, kDelayedQuantizeStep);

  Eigen::MatrixXd fit_data(fit_rows, 3);
  for (int r = 0; r < fit_rows; ++r) {
    fit_data(r, 0) = records[r].midterm1;
    fit_data(r, 1) = records[r].midterm2;
    fit_data(r, 2) = records[r].final_exam;
  }
  const MvnFit fit = fit_mvn(fit_data);

  std::vector<BinAxis> axes;
  for (int a = 0; a < 3; ++a) {
    const double sd = std::sqrt(fit.covariance(a, a));
    axes.push_back(BinAxis::centered_on_multiples(fit.mean[a] - kDelayedSpan * sd,
                                                  fit.mean[a] + kDelayedSpan * sd, step));
  }
  const GridSpec grid{{axes[0], axes[1]}, axes[2]};
  const CombinedScoreSpec combined = CombinedScoreSpec::by_id(cfg.combined);
  const MvnSampler sampler(fit.mean, fit.covariance);
  MonteCarloOptions mc;
  mc.cohorts = cfg.cohorts;
  mc.seed = derive_seed(seed, 2 * index + 1);
  mc.workers = cfg.workers;
  const RankLikelihoodModel model = build_rank_likelihood_model(
      [&](std::mt19937_64& g, std::span<double> out) { sampler.sample(g, out); }, combined, n, grid, mc);

  std::vector<CandidateRecord> stream;
  std::vector<double> combined_scores;
  for (int i = 0; i < n; ++i) {
    const ExamRecord& r = records[static_cast<std::size_t>(fit_rows + i)];
    CandidateRecord c;
    c.id = i;
    c.arrival_time = i + 1;
    c.instantaneous = {quantize(r.midterm1, step), quantize(r.midterm2, step)};
    c.delayed = quantize(r.final_exam, step);
    c.delay = cfg.tau;
    combined_scores.push_back(combined(c.instantaneous, *c.delayed));
    stream.push_back(std::move(c));
  }
  const std::vector<Rank> truth = true_ranks(combined_scores);
  const RankingSnapshot snap = predict_ranks_delayed(stream, n, model);

  DelayedRun run;
  run.clamped = snap.clamped;
  run.jittered = fit.jittered;
  for (int i = 0; i < n; ++i) {
    run.deviation.push_back(std::abs(truth[i] - snap.predicted_rank.at(i)));
  }
  run.mean = std::accumulate(run.deviation.begin(), run.deviation.end(), 0.0) / n;
  run.median = median_of(run.deviation);
  return run;
}

struct HireRun {
  int hires = 0;
  bool all_top5 = false;
  bool all_top_m = false;
  double precision = 0.0;
  int worst_place = 0;
  int immediate = 0;
  int max_latency = 0;
  std::vector<std::vector<std::string>> rows;
};

HireRun hire_once(const ExperimentConfig& cfg, std::uint64_t seed, std::size_t index) {
  std::mt19937_64 rng(derive_seed(seed, index));
  std::vector<ExamRecord> records = exam_records(cfg, rng);
  shuffle_records(records, rng);
  const int n = stream_size(cfg, records.size());
  const int fit_rows = cfg.surrogate.fit_rows;
  const double step = step_or_default(cfg, kHireQuantizeStep);

  std::vector<double> fit_scores;
  for (int r = 0; r < fit_rows; ++r) fit_scores.push_back(records[r].overall);
  const OrderStatisticTable table = fitted_gaussian_table(fit_scores, step, n);

  std::vector<ScoredCandidate> stream;
  std::vector<double> scores;
  for (int i = 0; i < n; ++i) {
    const double s = quantize(records[static_cast<std::size_t>(fit_rows + i)].overall, step);
    stream.push_back({i, s});
    scores.push_back(s);
  }
  const std::vector<Rank> truth = true_ranks(scores);

  const HiringLog log = hiring_rule(
      n, n,
      [&](int t) {
        return predict_ranks_full_info(std::span<const ScoredCandidate>(stream.data(), static_cast<std::size_t>(t)),
                                       table);
      },
      cfg.top_m);

  HireRun run;
  run.hires = static_cast<int>(log.hires.size());
  int correct = 0;
  run.worst_place = 0;
  for (const Hire& h : log.hires) {
    const int place = n - truth[h.id] + 1;
    if (place <= cfg.top_m) ++correct;
    run.worst_place = std::max(run.worst_place, place);
    const int latency = h.step - (h.id + 1);
    if (latency == 0) ++run.immediate;
    run.max_latency = std::max(run.max_latency, latency);
    run.rows.push_back({std::to_string(index), std::to_string(h.id), std::to_string(h.id + 1),
                        std::to_string(h.step), std::to_string(place), fmt(scores[h.id])});
  }
  run.precision = run.hires ? static_cast<double>(correct) / run.hires : 0.0;
  auto all_hired_within = [&](int places) {
    for (int i = 0; i < n; ++i) {
      if (n - truth[i] + 1 <= places && !log.hired(i)) return false;
    }
    return true;
  };
  run.all_top5 = all_hired_within(std::min(5, n));
  run.all_top_m = all_hired_within(std::min(cfg.top_m, n));
  return run;
}

}  // namespace

std::string experiment_name(ExperimentId id) {
  switch (id) {
    case ExperimentId::kExp1: return "exp1";
    case ExperimentId::kExp2: return "exp2";
    case ExperimentId::kDelayed: return "exp-delayed";
    case ExperimentId::kSparse: return "exp-sparse";
    case ExperimentId::kHire: return "hire";
    case ExperimentId::kRank: return "rank";
  }
  return "unknown";
}

ExperimentId parse_experiment(const std::string& name) {
  for (ExperimentId id : {ExperimentId::kExp1, ExperimentId::kExp2, ExperimentId::kDelayed,
                          ExperimentId::kSparse, ExperimentId::kHire, ExperimentId::kRank}) {
    if (experiment_name(id) == name) return id;
  }
  throw std::invalid_argument("unknown experiment '" + name + "'");
}

nlohmann::json config_to_json(const ExperimentConfig& cfg) {
  nlohmann::json j;
  j["experiment"] = experiment_name(cfg.experiment);
  j["n"] = cfg.n;
  j["trials"] = cfg.trials;
  j["seed"] = cfg.seed ? nlohmann::json(*cfg.seed) : nlohmann::json(nullptr);
  j["bin_width"] = cfg.bin_width;
  j["quantize"] = cfg.quantize;
  j["tau"] = cfg.tau == kNeverRevealed ? nlohmann::json("never") : nlohmann::json(cfg.tau);
  j["top_m"] = cfg.top_m;
  j["c"] = cfg.c;
  j["k"] = cfg.k;
  j["combined"] = cfg.combined;
  j["cohorts"] = cfg.cohorts;
  j["seeds"] = cfg.seeds;
  j["sizes"] = cfg.sizes;
  j["repeats"] = cfg.repeats;
  j["csv"] = cfg.csv_path;
  j["surrogate"] = {{"mean", cfg.surrogate.mean},
                    {"stddev", cfg.surrogate.stddev},
                    {"correlation", cfg.surrogate.correlation},
                    {"fit_rows", cfg.surrogate.fit_rows},
                    {"weights", cfg.surrogate.weights}};
  return j;
}

double median_of(std::vector<double> values) {
  if (values.empty()) throw std::invalid_argument("median of an empty sample");
  std::sort(values.begin(), values.end());
  const std::size_t m = values.size() / 2;
  return values.size() % 2 ? values[m] : 0.5 * (values[m - 1] + values[m]);
}

ResultBundle run_exp1(const ExperimentConfig& config) { return run_full_info_aadr(config, true); }
ResultBundle run_exp2(const ExperimentConfig& config) { return run_full_info_aadr(config, false); }

ResultBundle run_delayed_experiment(const ExperimentConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  require_positive(cfg.seeds, "seeds");
  CombinedScoreSpec::by_id(cfg.combined);

  std::vector<DelayedRun> runs;
  for (std::size_t s = 0; s < static_cast<std::size_t>(cfg.seeds); ++s) {
    runs.push_back(delayed_once(cfg, seed, s));
  }

  const std::size_t n = runs.front().deviation.size();
  std::vector<double> histogram(n, 0.0), means, medians, pooled;
  double clamped = 0.0, jittered = 0.0;
  for (const auto& r : runs) {
    for (double d : r.deviation) {
      histogram[static_cast<std::size_t>(d)] += 1.0;
      pooled.push_back(d);
    }
    means.push_back(r.mean);
    medians.push_back(r.median);
    clamped += r.clamped;
    jittered += r.jittered;
  }
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(means.size());
  double ss = 0.0;
  for (double m : means) ss += (m - mean) * (m - mean);

  ResultBundle b = make_bundle(cfg);
  b.series["deviation_histogram"] = histogram;
  b.series["mean_by_seed"] = means;
  b.series["median_by_seed"] = medians;
  if (runs.size() == 1) b.series["deviation"] = runs.front().deviation;
  b.summary["mean_deviation"] = mean;
  b.summary["median_deviation"] = median_of(pooled);
  b.summary["mean_deviation_sd"] = means.size() > 1 ? std::sqrt(ss / static_cast<double>(means.size() - 1)) : 0.0;
  b.summary["random_baseline"] = random_rank_baseline(static_cast<int>(n));
  b.summary["clamped_candidates"] = clamped;
  b.summary["jittered_fits"] = jittered;
  b.notes["data"] = cfg.csv_path.empty() ? "surrogate trivariate Gaussian" : cfg.csv_path;
  b.notes["reference_real_data"] =
      "f1 mean 8.32 median 5.5, f2 mean 5.68 median 4.5 (real course data, not distributed)";
  return b;
}

ResultBundle run_hire(const ExperimentConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  require_positive(cfg.trials, "trials");
  require_positive(cfg.top_m, "top_m");

  std::vector<HireRun> runs(static_cast<std::size_t>(cfg.trials));
  parallel_for(runs.size(), cfg.workers, [&](std::size_t t) { runs[t] = hire_once(cfg, seed, t); });

  ResultBundle b = make_bundle(cfg);
  b.table.columns = {"stream", "candidate", "arrival", "hire_step", "true_place", "score"};
  std::vector<double> hires, precision, worst;
  double top5 = 0.0, top_m = 0.0, immediate = 0.0, total_hires = 0.0;
  int max_latency = 0;
  for (auto& r : runs) {
    hires.push_back(r.hires);
    precision.push_back(r.precision);
    worst.push_back(r.worst_place);
    top5 += r.all_top5;
    top_m += r.all_top_m;
    immediate += r.immediate;
    total_hires += r.hires;
    max_latency = std::max(max_latency, r.max_latency);
    for (auto& row : r.rows) b.table.rows.push_back(std::move(row));
  }
  const double streams = static_cast<double>(runs.size());
  b.series["hires_by_stream"] = hires;
  b.series["precision_by_stream"] = precision;
  b.series["worst_place_by_stream"] = worst;
  b.summary["streams"] = streams;
  b.summary["mean_hires"] = total_hires / streams;
  b.summary["fraction_all_top5_hired"] = top5 / streams;
  b.summary["fraction_all_top_m_hired"] = top_m / streams;
  b.summary["mean_precision"] = std::accumulate(precision.begin(), precision.end(), 0.0) / streams;
  b.summary["mean_worst_place"] = std::accumulate(worst.begin(), worst.end(), 0.0) / streams;
  b.summary["fraction_hired_on_arrival"] = total_hires > 0 ? immediate / total_hires : 0.0;
  b.summary["max_hire_latency"] = max_latency;
  b.notes["reference_real_data"] =
      "hires 13, true top 10 covered, worst place 15 (real course data, not distributed)";
  return b;
}

ResultBundle run_sparse_experiment(const ExperimentConfig& cfg) {
  const std::uint64_t seed = require_seed(cfg);
  require_positive(cfg.n, "n");
  require_positive(cfg.k, "k");
  require_positive(cfg.trials, "trials");

  ResultBundle b = make_bundle(cfg);
  if (cfg.n * cfg.k <= 1000) {
    const SurvivalStats stats = survival_experiment(cfg.n, cfg.k, cfg.c, cfg.trials, seed, cfg.workers);
    b.summary["degree"] = stats.degree;
    b.summary["feasibility_rate"] = stats.feasibility_rate;
    b.summary["agreement_rate"] = stats.agreement_rate;
    b.summary["dominance_violations"] = stats.dominance_violations;
  }
  if (!cfg.sizes.empty()) {
    require_positive(cfg.repeats, "repeats");
    b.table.columns = {"size", "solver", "median_ms", "repeats"};
    for (const BenchRow& row : bench_sparse_vs_naive(cfg.sizes, cfg.k, cfg.c, cfg.repeats, seed)) {
      b.table.rows.push_back({std::to_string(row.size), row.solver, fmt(row.median_ms),
                              std::to_string(row.repeats)});
    }
    b.notes["timing"] = "wall-clock medians are machine dependent and not reproducible byte-for-byte";
  }
  return b;
}

ResultBundle run_rank(const ExperimentConfig& cfg) {
  if (cfg.csv_path.empty()) throw std::invalid_argument("rank needs a CSV input");
  std::mt19937_64 unused(0);
  const std::vector<ExamRecord> records = exam_records(cfg, unused);
  const int n = stream_size(cfg, records.size());
  const int fit_rows = cfg.surrogate.fit_rows;
  const bool delayed = cfg.tau != kNeverRevealed;
  const double step = step_or_default(cfg, delayed ? kDelayedQuantizeStep : kHireQuantizeStep);

  ResultBundle b = make_bundle(cfg);
  std::vector<Rank> at_arrival(static_cast<std::size_t>(n));
  RankingSnapshot final_snap;
  std::vector<double> truth_scores;

  if (!delayed) {
    std::vector<double> fit_scores;
    for (int r = 0; r < fit_rows; ++r) fit_scores.push_back(records[r].overall);
    const OrderStatisticTable table = fitted_gaussian_table(fit_scores, step, n);
    std::vector<ScoredCandidate> stream;
    for (int i = 0; i < n; ++i) {
      stream.push_back({i, quantize(records[static_cast<std::size_t>(fit_rows + i)].overall, step)});
      truth_scores.push_back(stream.back().score);
      const RankingSnapshot snap = predict_ranks_full_info(stream, table);
      at_arrival[i] = snap.predicted_rank.at(i);
      if (i + 1 == n) final_snap = snap;
    }
  } else {
    const std::uint64_t seed = require_seed(cfg);
    if (cfg.tau < 1) throw std::invalid_argument("tau must be >= 1");
    Eigen::MatrixXd fit_data(fit_rows, 3);
    for (int r = 0; r < fit_rows; ++r) {
      fit_data.row(r) << records[r].midterm1, records[r].midterm2, records[r].final_exam;
    }
    const MvnFit fit = fit_mvn(fit_data);
    std::vector<BinAxis> axes;
    for (int a = 0; a < 3; ++a) {
      const double sd = std::sqrt(fit.covariance(a, a));
      axes.push_back(BinAxis::centered_on_multiples(fit.mean[a] - kDelayedSpan * sd,
                                                    fit.mean[a] + kDelayedSpan * sd, step));
    }
    const CombinedScoreSpec combined = CombinedScoreSpec::by_id(cfg.combined);
    const MvnSampler sampler(fit.mean, fit.covariance);
    MonteCarloOptions mc;
    mc.cohorts = cfg.cohorts;
    mc.seed = derive_seed(seed, 1);
    mc.workers = cfg.workers;
    const RankLikelihoodModel model = build_rank_likelihood_model(
        [&](std::mt19937_64& g, std::span<double> out) { sampler.sample(g, out); }, combined, n,
        GridSpec{{axes[0], axes[1]}, axes[2]}, mc);

    std::vector<CandidateRecord> stream;
    for (int i = 0; i < n; ++i) {
      const ExamRecord& r = records[static_cast<std::size_t>(fit_rows + i)];
      CandidateRecord c;
      c.id = i;
      c.arrival_time = i + 1;
      c.instantaneous = {quantize(r.midterm1, step), quantize(r.midterm2, step)};
      c.delayed = quantize(r.final_exam, step);
      c.delay = cfg.tau;
      truth_scores.push_back(combined(c.instantaneous, *c.delayed));
      stream.push_back(std::move(c));
    }
    for (int i = 0; i < n; ++i) {
      at_arrival[i] = predict_ranks_delayed(stream, i + 1, model).predicted_rank.at(i);
    }
    // Run until every delayed score has been revealed.
    final_snap = predict_ranks_delayed(stream, n + cfg.tau, model);
  }

  const std::vector<Rank> truth = true_ranks(truth_scores);
  b.table.columns = {"candidate", "arrival", "score", "rank_at_arrival", "final_rank", "true_rank"};
  std::vector<Rank> final_ranks;
  for (int i = 0; i < n; ++i) {
    final_ranks.push_back(final_snap.predicted_rank.at(i));
    b.table.rows.push_back({std::to_string(i), std::to_string(i + 1), fmt(truth_scores[i]),
                            std::to_string(at_arrival[i]), std::to_string(final_ranks.back()),
                            std::to_string(truth[i])});
  }
  b.summary["mean_deviation_at_arrival"] = mean_absolute_rank_deviation(truth, at_arrival);
  b.summary["mean_deviation_final"] = mean_absolute_rank_deviation(truth, final_ranks);
  b.summary["clamped_candidates"] = final_snap.clamped;
  return b;
}

ResultBundle run_experiment(const ExperimentConfig& config) {
  switch (config.experiment) {
    case ExperimentId::kExp1: return run_exp1(config);
    case ExperimentId::kExp2: return run_exp2(config);
    case ExperimentId::kDelayed: return run_delayed_experiment(config);
    case ExperimentId::kSparse: return run_sparse_experiment(config);
    case ExperimentId::kHire: return run_hire(config);
    case ExperimentId::kRank: return run_rank(config);
  }
  throw std::invalid_argument("unknown experiment");
}

}  // namespace rankmatch
