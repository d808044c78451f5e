#pragma once

#include <random>
#include <vector>

#include "rankmatch/csv.h"

namespace rankmatch {

// Stand-in for a course gradebook: (midterm1, midterm2, final) drawn from a
// trivariate Gaussian with equal means, equal standard deviations and one
// pairwise correlation.
struct SurrogateSpec {
  double mean = 70.0;
  double stddev = 15.0;
  double correlation = 0.6;
  int records = 191;
  // Rows used to fit the model; the rest form the ranked stream.
  int fit_rows = 141;
  std::vector<double> weights{0.25, 0.25, 0.5};

  bool operator==(const SurrogateSpec&) const = default;
};

std::vector<ExamRecord> generate_surrogate(const SurrogateSpec& spec, std::mt19937_64& rng);

// In-place Fisher-Yates shuffle driven by rng (portable across standard
// libraries, unlike std::shuffle).
template <typename T>
void shuffle_records(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const std::size_t j = static_cast<std::size_t>(rng() % i);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace rankmatch
