#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <vector>

#include "rankmatch/common.h"
#include "rankmatch/order_statistics.h"
#include "rankmatch/rank_likelihood.h"

namespace rankmatch {

// Delay value meaning "the delayed score is never revealed".
inline constexpr int kNeverRevealed = std::numeric_limits<int>::max();

struct CandidateRecord {
  int id = 0;
  int arrival_time = 0;
  std::vector<double> instantaneous;
  // Eventual delayed score, if the candidate has one.
  std::optional<double> delayed;
  int delay = kNeverRevealed;

  // kNeverRevealed when the delayed score never arrives.
  int reveal_time() const {
    return delay == kNeverRevealed ? kNeverRevealed : arrival_time + delay;
  }
  bool delayed_known_at(int step) const {
    return delayed.has_value() && delay != kNeverRevealed && step >= reveal_time();
  }
};

struct StreamConfig {
  int cohort_size = 25;
  int delay = kNeverRevealed;
  double quantize_step = 0.0;  // 0 disables quantization
  CombinedScoreSpec combined = CombinedScoreSpec::weighted_course();
};

struct RankingSnapshot {
  int step = 0;
  // Candidate ids in arrival order; known/unknown split the delayed setting.
  std::vector<int> revealed;
  std::vector<int> known;
  std::vector<int> unknown;
  std::map<int, Rank> predicted_rank;
  // Scores that fell outside the model's range and were clamped.
  int clamped = 0;
  double log_likelihood = 0.0;
};

struct ScoredCandidate {
  int id = 0;
  double score = 0.0;
};

// How candidates that have not arrived are represented in the matching.
enum class UnrevealedMode {
  // |revealed| x N rectangular problem; unrevealed ranks stay free.
  kRectangular,
  // N x N problem, unrevealed rows filled with kPaddingWeight.
  kPadded,
};

inline constexpr double kPaddingWeight = -1e6;

// Matches the revealed candidates (given in arrival order) to rank nodes
// 1..N with weight log p^(k)(score). Candidates sharing a bin have identical
// likelihood rows; their ranks are handed out in arrival order.
RankingSnapshot predict_ranks_full_info(std::span<const ScoredCandidate> revealed,
                                        const OrderStatisticTable& table,
                                        UnrevealedMode mode = UnrevealedMode::kRectangular);

// Matches the candidates that have arrived by `step` to rank nodes. Known
// delayed scores use the rank-k joint log-density of (s, d); unknown ones use
// the rank-k expected log-likelihood given s.
RankingSnapshot predict_ranks_delayed(std::span<const CandidateRecord> candidates, int step,
                                      const RankLikelihoodModel& model);

struct Hire {
  int id = 0;
  int step = 0;
};

struct HiringLog {
  int top_m = 0;
  std::vector<Hire> hires;
  bool hired(int id) const;
};

// Produces the ranking after the arrivals (and reveals) of a given step.
using RankPredictor = std::function<RankingSnapshot(int step)>;

// After every step, hires each not-yet-hired candidate whose predicted rank is
// among the top_m (ranks N - top_m + 1 .. N). Steps run from 1 to last_step.
HiringLog hiring_rule(int cohort_size, int last_step, const RankPredictor& predictor, int top_m);

// Ranks 1..n by ascending score; ties by position (earlier = lower rank).
std::vector<Rank> true_ranks(std::span<const double> scores);

struct AadrSummary {
  std::vector<double> mean;
  std::vector<double> standard_error;
};

// Per arrival step, the mean over trials of |true - predicted| for the
// candidate arriving at that step. Inputs are trial x step.
AadrSummary aadr(const std::vector<std::vector<Rank>>& true_rank,
                 const std::vector<std::vector<Rank>>& predicted_at_arrival);

// Mean |a_i - b_i|.
double mean_absolute_rank_deviation(std::span<const Rank> a, std::span<const Rank> b);

// Expected mean |sigma(i) - pi(i)| for two independent uniform permutations of
// 1..n: (n^2 - 1) / (3n).
double random_rank_baseline(int n);

}  // namespace rankmatch
