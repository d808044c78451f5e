#include "rankmatch/surrogate.h"

#include <stdexcept>

#include "rankmatch/distributions.h"

namespace rankmatch {

std::vector<ExamRecord> generate_surrogate(const SurrogateSpec& spec, std::mt19937_64& rng) {
  if (spec.records < 2) throw std::invalid_argument("surrogate needs at least 2 records");
  if (!(spec.stddev > 0.0)) throw std::invalid_argument("surrogate stddev must be positive");
  if (!(spec.correlation > -0.5 && spec.correlation < 1.0)) {
    throw std::invalid_argument("surrogate correlation must lie in (-0.5, 1)");
  }
  const double var = spec.stddev * spec.stddev;
  Eigen::Matrix3d cov = Eigen::Matrix3d::Constant(spec.correlation * var);
  cov.diagonal().setConstant(var);
  const MvnSampler sampler(Eigen::Vector3d::Constant(spec.mean), cov);

  std::vector<ExamRecord> out;
  out.reserve(static_cast<std::size_t>(spec.records));
  double v[3];
  for (int r = 0; r < spec.records; ++r) {
    sampler.sample(rng, v);
    ExamRecord rec{v[0], v[1], v[2], 0.0};
    rec.overall = spec.weights[0] * v[0] + spec.weights[1] * v[1] + spec.weights[2] * v[2];
    out.push_back(rec);
  }
  return out;
}

}  // namespace rankmatch
