#include "rankmatch/distributions.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

namespace rankmatch {

BinLookup BinAxis::locate(double x) const {
  const double pos = std::floor((x - lower) / width);
  if (!(pos >= 0.0)) return {0, true};
  if (pos >= static_cast<double>(bins)) return {bins - 1, true};
  return {static_cast<std::size_t>(pos), false};
}

BinAxis BinAxis::centered_on_multiples(double low, double high, double step) {
  if (!(step > 0.0) || !(high >= low)) {
    throw DistributionError("centered_on_multiples: need step > 0 and high >= low");
  }
  const double first = std::floor(low / step);
  const double last = std::ceil(high / step);
  BinAxis axis;
  axis.width = step;
  axis.lower = (first - 0.5) * step;
  axis.bins = static_cast<std::size_t>(last - first) + 1;
  return axis;
}

DiscreteDistribution::DiscreteDistribution(double lower_bound, double bin_width,
                                           std::vector<double> mass)
    : axis_{lower_bound, bin_width, mass.size()}, mass_(std::move(mass)) {
  if (!(bin_width > 0.0) || !std::isfinite(bin_width)) {
    throw DistributionError("bin width must be positive and finite");
  }
  if (mass_.size() < 2) throw DistributionError("need at least 2 bins");
  double total = 0.0;
  for (double m : mass_) {
    if (!(m >= 0.0) || !std::isfinite(m)) {
      throw DistributionError("bin masses must be finite and nonnegative");
    }
    total += m;
  }
  if (std::abs(total - 1.0) > 1e-9) {
    throw DistributionError("bin masses sum to " + std::to_string(total) +
                            ", expected 1");
  }
}

DiscreteDistribution DiscreteDistribution::from_weights(
    double lower_bound, double bin_width, std::vector<double> weights) {
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw DistributionError("weights must be finite and nonnegative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw DistributionError("all-zero density over range");
  for (double& w : weights) w /= total;
  return DiscreteDistribution(lower_bound, bin_width, std::move(weights));
}

DiscreteDistribution discretize(const std::function<double(double)>& density,
                                double low, double high, double bin_width) {
  if (!(high > low)) throw DistributionError("discretize: need high > low");
  if (!(bin_width > 0.0)) throw DistributionError("discretize: need bin_width > 0");
  const double span = (high - low) / bin_width;
  const auto bins = static_cast<std::size_t>(std::ceil(span - 1e-9));
  std::vector<double> weights(bins);
  for (std::size_t b = 0; b < bins; ++b) {
    const double x = low + bin_width * (static_cast<double>(b) + 0.5);
    const double v = density(x);
    if (v < 0.0) throw DistributionError("density evaluator returned a negative value");
    weights[b] = v * bin_width;
  }
  return DiscreteDistribution::from_weights(low, bin_width, std::move(weights));
}

double gaussian_pdf(double x, double mean, double stddev) {
  const double z = (x - mean) / stddev;
  return std::exp(-0.5 * z * z) / (stddev * std::sqrt(2.0 * std::numbers::pi));
}

GaussianFit fit_gaussian(std::span<const double> samples) {
  if (samples.size() < 2) throw DistributionError("fit_gaussian: need >= 2 samples");
  const double n = static_cast<double>(samples.size());
  const double mean = std::accumulate(samples.begin(), samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  GaussianFit fit{mean, ss / n, false};
  if (!(fit.variance > 0.0)) {
    fit.variance = kCovarianceJitter;
    fit.jittered = true;
  }
  return fit;
}

MvnFit fit_mvn(const Eigen::MatrixXd& samples) {
  if (samples.rows() < 2) throw DistributionError("fit_mvn: need >= 2 samples");
  if (samples.cols() < 1) throw DistributionError("fit_mvn: need >= 1 dimension");
  MvnFit fit;
  fit.mean = samples.colwise().mean().transpose();
  const Eigen::MatrixXd centered = samples.rowwise() - fit.mean.transpose();
  fit.covariance = centered.transpose() * centered / static_cast<double>(samples.rows());
  Eigen::LLT<Eigen::MatrixXd> llt(fit.covariance);
  if (llt.info() != Eigen::Success) {
    fit.covariance.diagonal().array() += kCovarianceJitter;
    fit.jittered = true;
  }
  return fit;
}

MvnSampler::MvnSampler(Eigen::VectorXd mean, const Eigen::MatrixXd& covariance)
    : mean_(std::move(mean)) {
  if (covariance.rows() != mean_.size() || covariance.cols() != mean_.size()) {
    throw DistributionError("MvnSampler: covariance shape does not match mean");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw DistributionError("MvnSampler: covariance is not positive definite");
  }
  lower_ = llt.matrixL();
}

void MvnSampler::sample(std::mt19937_64& rng, std::span<double> out) const {
  std::normal_distribution<double> normal;
  const auto d = mean_.size();
  double z[16];
  Eigen::VectorXd zv;
  double* zp = z;
  if (d > 16) {
    zv.resize(d);
    zp = zv.data();
  }
  for (Eigen::Index i = 0; i < d; ++i) zp[i] = normal(rng);
  for (Eigen::Index i = 0; i < d; ++i) {
    double v = mean_[i];
    for (Eigen::Index j = 0; j <= i; ++j) v += lower_(i, j) * zp[j];
    out[static_cast<std::size_t>(i)] = v;
  }
}

double quantize(double score, double step) {
  if (!(step > 0.0)) throw DistributionError("quantize: step must be positive");
  return std::floor(score / step + 0.5) * step;
}

}  // namespace rankmatch
