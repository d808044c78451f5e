#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rankmatch/common.h"
#include "rankmatch/distributions.h"

namespace rankmatch {

// Log-densities of the order statistics of a cohort of N i.i.d. draws from a
// binned distribution. Row k (1-based) is the density of the kth smallest
// draw, per bin, so rank N is the largest score.
//
// Each bin value is the exact probability that the kth order statistic falls
// in that bin, divided by the bin width. That is the bin average of
// N C(N-1,k-1) F^(k-1) (1-F)^(N-k) f, which keeps every row normalized and
// makes the rows average back to the base density exactly.
class OrderStatisticTable {
 public:
  OrderStatisticTable(DiscreteDistribution base, int cohort_size,
                      std::vector<double> log_density);

  int cohort_size() const { return cohort_size_; }
  const DiscreteDistribution& base() const { return base_; }
  std::size_t bins() const { return base_.bins(); }

  // Floored at kLogFloor.
  double log_density(Rank rank, std::size_t bin) const {
    return log_density_[static_cast<std::size_t>(rank - 1) * bins() + bin];
  }
  std::span<const double> row(Rank rank) const {
    return {log_density_.data() + static_cast<std::size_t>(rank - 1) * bins(), bins()};
  }

  BinLookup locate(double score) const { return base_.locate(score); }

 private:
  DiscreteDistribution base_;
  int cohort_size_;
  std::vector<double> log_density_;
};

OrderStatisticTable order_statistic_table(const DiscreteDistribution& dist, int cohort_size);

// log C(n, k) via lgamma.
double log_choose(int n, int k);

}  // namespace rankmatch
