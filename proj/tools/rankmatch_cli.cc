#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <list>
#include <map>
#include <string>

#include "rankmatch/experiments.h"
#include "rankmatch/result_bundle.h"

namespace {

using rankmatch::ExperimentConfig;
using rankmatch::ExperimentId;

struct Flags {
  ExperimentConfig config;
  std::uint64_t seed = 0;
  std::string tau = "never";
  std::string format = "json";
  std::string out;
  CLI::Option* seed_opt = nullptr;
};

int parse_tau(const std::string& text) {
  if (text == "never" || text == "inf") return rankmatch::kNeverRevealed;
  const int tau = std::stoi(text);
  if (tau < 1) throw CLI::ValidationError("--tau", "must be >= 1 or 'never'");
  return tau;
}

CLI::App* add_experiment(CLI::App& app, ExperimentId id, const std::string& help, Flags& f) {
  f.config.experiment = id;
  CLI::App* sub = app.add_subcommand(rankmatch::experiment_name(id), help);
  f.seed_opt = sub->add_option("--seed", f.seed, "Master seed (required for randomized runs)");
  sub->add_option("--out", f.out, "Output file (default: stdout)");
  sub->add_option("--format", f.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}))
      ->capture_default_str();
  sub->add_option("--workers", f.config.workers, "Threads (0 = all cores); never changes results")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  return sub;
}

void add_n(CLI::App* sub, Flags& f, const char* help) {
  sub->add_option("--n", f.config.n, help)->check(CLI::PositiveNumber)->capture_default_str();
}

void add_trials(CLI::App* sub, Flags& f, const char* help) {
  sub->add_option("--trials", f.config.trials, help)->check(CLI::PositiveNumber)->capture_default_str();
}

void add_exam_options(CLI::App* sub, Flags& f) {
  sub->add_option("--quantize", f.config.quantize, "Score quantization step (0 = experiment default)")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  sub->add_option("--csv", f.config.csv_path, "Gradebook CSV (midterm1,midterm2,final)")
      ->check(CLI::ExistingFile);
  sub->add_option("--fit-rows", f.config.surrogate.fit_rows, "Rows used to fit the score model")
      ->check(CLI::Range(2, 1 << 20))
      ->capture_default_str();
  sub->add_option("--correlation", f.config.surrogate.correlation, "Surrogate pairwise correlation")
      ->capture_default_str();
}

void add_delayed_options(CLI::App* sub, Flags& f) {
  sub->add_option("--combined", f.config.combined, "Combined score")
      ->check(CLI::IsMember({"f1", "f2"}))
      ->capture_default_str();
  sub->add_option("--cohorts", f.config.cohorts, "Monte Carlo cohorts for the rank model")
      ->check(CLI::Range(std::size_t{rankmatch::kMinMonteCarloCohorts}, std::size_t{1} << 32))
      ->capture_default_str();
}

bool randomized(const ExperimentConfig& c) {
  return c.experiment != ExperimentId::kRank || c.tau != rankmatch::kNeverRevealed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Online rank prediction by bipartite matching"};
  app.set_version_flag("--version", std::string(rankmatch::kVersion));
  app.require_subcommand(1);

  // std::list keeps addresses stable while CLI11 holds pointers into Flags.
  std::list<Flags> storage;
  std::map<CLI::App*, Flags*> flags;
  auto make = [&](ExperimentId id, const std::string& help) {
    Flags& f = storage.emplace_back();
    CLI::App* sub = add_experiment(app, id, help, f);
    flags[sub] = &f;
    return std::pair<CLI::App*, Flags&>{sub, f};
  };

  {
    auto [sub, f] = make(ExperimentId::kExp1, "AADR on i.i.d. standard Gaussian scores");
    add_n(sub, f, "Cohort size");
    add_trials(sub, f, "Trials");
    sub->add_option("--bin-width", f.config.bin_width, "Bin width")->check(CLI::PositiveNumber)->capture_default_str();
  }
  {
    auto [sub, f] = make(ExperimentId::kExp2, "AADR on i.i.d. uniform [0, 1] scores");
    add_n(sub, f, "Cohort size");
    add_trials(sub, f, "Trials");
    sub->add_option("--bin-width", f.config.bin_width, "Bin width")->check(CLI::PositiveNumber)->capture_default_str();
  }
  {
    auto [sub, f] = make(ExperimentId::kDelayed, "Rank deviation with delayed scores never revealed");
    f.config.n = 50;
    f.config.seeds = 20;
    add_n(sub, f, "Stream length after the fit rows (surrogate only)");
    add_exam_options(sub, f);
    add_delayed_options(sub, f);
    sub->add_option("--seeds", f.config.seeds, "Independent shuffles")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--tau", f.tau, "Delay in steps, or 'never'")->capture_default_str();
  }
  {
    auto [sub, f] = make(ExperimentId::kSparse, "Sparsified N:k matching survival and timing");
    f.config.n = 50;
    f.config.trials = 200;
    add_n(sub, f, "Left vertices per group");
    add_trials(sub, f, "Survival trials");
    sub->add_option("--k", f.config.k, "Groups")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--c", f.config.c, "Degree factor: ceil(c ln n) edges per group")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    sub->add_option("--sizes", f.config.sizes, "Timing sizes (n per group); omit to skip timing");
    sub->add_option("--repeats", f.config.repeats, "Timing repeats per size")->check(CLI::PositiveNumber)->capture_default_str();
  }
  {
    auto [sub, f] = make(ExperimentId::kHire, "Online hiring on fully observed streams");
    f.config.n = 50;
    f.config.trials = 200;
    add_n(sub, f, "Stream length after the fit rows (surrogate only)");
    add_trials(sub, f, "Streams");
    add_exam_options(sub, f);
    sub->add_option("--top-m", f.config.top_m, "Hire predicted ranks in the top m")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
  }
  {
    auto [sub, f] = make(ExperimentId::kRank, "Rank a gradebook CSV in row order");
    add_exam_options(sub, f);
    sub->get_option("--csv")->required();
    add_delayed_options(sub, f);
    sub->add_option("--tau", f.tau, "Final-exam delay in steps, or 'never' for full information")
        ->capture_default_str();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // --help and --version exit 0; every other parse error is a usage error.
    return app.exit(e) == 0 ? 0 : 2;
  }

  CLI::App* chosen = app.get_subcommands().front();
  Flags& f = *flags.at(chosen);
  try {
    ExperimentConfig& config = f.config;
    config.tau = parse_tau(f.tau);
    if (f.seed_opt->count() > 0) config.seed = f.seed;
    if (randomized(config) && !config.seed) {
      std::cerr << "error: " << chosen->get_name() << " is randomized; pass --seed\n";
      return 2;
    }
    const rankmatch::OutputFormat format = rankmatch::parse_output_format(f.format);
    const rankmatch::ResultBundle bundle = rankmatch::run_experiment(config);
    if (f.out.empty()) {
      std::cout << rankmatch::serialize(bundle, format);
    } else {
      rankmatch::emit(bundle, f.out, format);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
