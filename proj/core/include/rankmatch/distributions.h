#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <functional>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

namespace rankmatch {

class DistributionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Result of mapping a score onto a binned axis. Out-of-range scores land in
// the nearest edge bin and are flagged.
struct BinLookup {
  std::size_t bin = 0;
  bool clamped = false;
};

// Uniform bins [lower + b*width, lower + (b+1)*width), b = 0..bins-1.
struct BinAxis {
  double lower = 0.0;
  double width = 1.0;
  std::size_t bins = 0;

  double upper() const { return lower + width * static_cast<double>(bins); }
  double midpoint(std::size_t b) const {
    return lower + width * (static_cast<double>(b) + 0.5);
  }
  BinLookup locate(double x) const;

  // Axis whose bin midpoints are the multiples of `step` in [low, high]
  // (both rounded outward to multiples of step).
  static BinAxis centered_on_multiples(double low, double high, double step);

  bool operator==(const BinAxis&) const = default;
};

// A probability distribution over uniform score bins.
// Invariants: >= 2 bins, width > 0, masses >= 0 and summing to 1 (1e-9).
class DiscreteDistribution {
 public:
  DiscreteDistribution(double lower_bound, double bin_width,
                       std::vector<double> mass);

  // Normalizes nonnegative `weights`; throws if they are all zero.
  static DiscreteDistribution from_weights(double lower_bound, double bin_width,
                                           std::vector<double> weights);

  const BinAxis& axis() const { return axis_; }
  double lower_bound() const { return axis_.lower; }
  double bin_width() const { return axis_.width; }
  double upper_bound() const { return axis_.upper(); }
  std::size_t bins() const { return axis_.bins; }
  std::span<const double> mass() const { return mass_; }

  double density(std::size_t b) const { return mass_[b] / axis_.width; }
  BinLookup locate(double x) const { return axis_.locate(x); }

 private:
  BinAxis axis_;
  std::vector<double> mass_;
};

// mass[b] proportional to density(midpoint_b) * bin_width, renormalized.
DiscreteDistribution discretize(const std::function<double(double)>& density,
                                double low, double high, double bin_width);

double gaussian_pdf(double x, double mean, double stddev);

struct GaussianFit {
  double mean = 0.0;
  double variance = 0.0;
  bool jittered = false;
};

// Maximum-likelihood (denominator n) fit. Zero variance is replaced by the
// 1e-8 jitter and flagged.
GaussianFit fit_gaussian(std::span<const double> samples);

struct MvnFit {
  Eigen::VectorXd mean;
  Eigen::MatrixXd covariance;
  bool jittered = false;
};

inline constexpr double kCovarianceJitter = 1e-8;

// Rows of `samples` are observations. Maximum-likelihood covariance; a
// covariance that is not positive definite gets kCovarianceJitter added to
// its diagonal.
MvnFit fit_mvn(const Eigen::MatrixXd& samples);

class MvnSampler {
 public:
  MvnSampler(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance);

  std::size_t dims() const { return static_cast<std::size_t>(mean_.size()); }
  // Writes dims() values into out.
  void sample(std::mt19937_64& rng, std::span<double> out) const;

 private:
  Eigen::VectorXd mean_;
  Eigen::MatrixXd lower_;
};

// Nearest multiple of step; exact halves round toward +infinity.
double quantize(double score, double step);

}  // namespace rankmatch
