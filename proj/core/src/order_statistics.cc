#include "rankmatch/order_statistics.h"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rankmatch {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// count * log(p) with 0 * log(0) = 0.
double xlogy(int count, double log_p) {
  return count == 0 ? 0.0 : static_cast<double>(count) * log_p;
}

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

}  // namespace

double log_choose(int n, int k) {
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

OrderStatisticTable::OrderStatisticTable(DiscreteDistribution base, int cohort_size,
                                         std::vector<double> log_density)
    : base_(std::move(base)), cohort_size_(cohort_size), log_density_(std::move(log_density)) {
  if (cohort_size_ < 1) throw DistributionError("cohort size must be >= 1");
  if (log_density_.size() != static_cast<std::size_t>(cohort_size_) * base_.bins()) {
    throw DistributionError("order statistic table has the wrong shape");
  }
}

OrderStatisticTable order_statistic_table(const DiscreteDistribution& dist, int cohort_size) {
  if (cohort_size < 1) throw DistributionError("order_statistic_table: N must be >= 1");
  const int n = cohort_size;
  const std::size_t bins = dist.bins();
  const auto mass = dist.mass();

  // Survival masses from the top so the upper tail keeps full precision.
  std::vector<double> below(bins + 1, 0.0), at_or_above(bins + 1, 0.0);
  for (std::size_t b = 0; b < bins; ++b) below[b + 1] = below[b] + mass[b];
  for (std::size_t b = bins; b-- > 0;) at_or_above[b] = at_or_above[b + 1] + mass[b];

  std::vector<double> log_fact(n + 1, 0.0);
  for (int i = 1; i <= n; ++i) log_fact[i] = log_fact[i - 1] + std::log(static_cast<double>(i));
  auto lchoose = [&](int top, int k) { return log_fact[top] - log_fact[k] - log_fact[top - k]; };

  // tail[m][j] = log P(Binomial(m, q) >= j), m = 1..n, j = 0..m.
  std::vector<std::vector<double>> tail(n + 1);
  for (int m = 1; m <= n; ++m) tail[m].assign(m + 2, kNegInf);

  const double log_width = std::log(dist.bin_width());
  std::vector<double> out(static_cast<std::size_t>(n) * bins, kLogFloor);
  for (std::size_t b = 0; b < bins; ++b) {
    if (!(mass[b] > 0.0) || !(at_or_above[b] > 0.0)) continue;
    const double log_lo = safe_log(below[b]);
    const double log_hi = safe_log(at_or_above[b]);
    // Given a draw is not below bin b, it lands in b with probability q.
    const double log_q = std::log(mass[b]) - log_hi;
    const double log_1mq = safe_log(at_or_above[b + 1]) - log_hi;

    for (int m = 1; m <= n; ++m) {
      auto& t = tail[m];
      t[m + 1] = kNegInf;
      for (int i = m; i >= 0; --i) {
        const double term = lchoose(m, i) + xlogy(i, log_q) + xlogy(m - i, log_1mq);
        t[i] = log_add_exp(t[i + 1], term);
      }
    }

    // P(X_(k) in b) = sum_{a<k} P(#below = a) P(Bin(n-a, q) >= k-a).
    for (int k = 1; k <= n; ++k) {
      double acc = kNegInf;
      for (int a = 0; a < k; ++a) {
        const double log_below = lchoose(n, a) + xlogy(a, log_lo) + xlogy(n - a, log_hi);
        if (log_below == kNegInf) continue;
        acc = log_add_exp(acc, log_below + tail[n - a][k - a]);
      }
      const double v = acc - log_width;
      out[static_cast<std::size_t>(k - 1) * bins + b] = v < kLogFloor ? kLogFloor : v;
    }
  }
  return OrderStatisticTable(dist, n, std::move(out));
}

}  // namespace rankmatch
