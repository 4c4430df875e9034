#include "ckme/gaussian_sum.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "ckme/errors.hpp"

namespace ckme {

namespace {

constexpr std::size_t kMinDegree = 32;
constexpr std::size_t kMaxDegree = 4096;
constexpr std::size_t kProbeCount = 64;

} // namespace

GaussianSumProfile::GaussianSumProfile(const Embedding& e, double sigma, double tolerance)
    : atoms_(e.atoms()), weights_(e.weights()), sigma_(sigma) {
  if (!(sigma > 0.0)) throw ValidationError("gaussian sum bandwidth must be positive");
  if (atoms_.empty()) return;

  const auto [mn, mx] = std::minmax_element(atoms_.begin(), atoms_.end());
  // Beyond ~6.5 bandwidths every term is below 1e-18 of its weight.
  const double pad = 6.5 * std::sqrt(sigma_);
  lo_ = *mn - pad;
  hi_ = *mx + pad;

  const double width = hi_ - lo_;
  auto degree = static_cast<std::size_t>(std::ceil(6.0 * width / std::sqrt(sigma_))) + kMinDegree;
  degree = std::clamp(degree, kMinDegree, kMaxDegree);
  while (degree <= kMaxDegree) {
    if (build(degree, tolerance)) return;
    degree *= 2;
  }
  coeffs_.clear();
}

double GaussianSumProfile::direct(double y) const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    const double diff = y - atoms_[i];
    s += weights_[i] * std::exp(-diff * diff / sigma_);
  }
  return s;
}

bool GaussianSumProfile::build(std::size_t degree, double tolerance) {
  const std::size_t nodes = degree + 1;
  std::vector<double> values(nodes);
  const double mid = 0.5 * (hi_ + lo_);
  const double half = 0.5 * (hi_ - lo_);
  for (std::size_t k = 0; k < nodes; ++k) {
    const double theta = std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
    values[k] = direct(mid + half * std::cos(theta));
  }
  coeffs_.assign(nodes, 0.0);
  for (std::size_t j = 0; j < nodes; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < nodes; ++k) {
      const double theta =
          std::numbers::pi * (static_cast<double>(k) + 0.5) / static_cast<double>(nodes);
      s += values[k] * std::cos(static_cast<double>(j) * theta);
    }
    coeffs_[j] = 2.0 * s / static_cast<double>(nodes);
  }
  coeffs_[0] *= 0.5;

  double scale = 0.0;
  for (double w : weights_) scale += std::abs(w);
  for (std::size_t p = 0; p < kProbeCount; ++p) {
    // Deterministic probes between interpolation nodes.
    const double t = -1.0 + 2.0 * (static_cast<double>(p) + 0.37) / static_cast<double>(kProbeCount);
    const double y = mid + half * t;
    if (std::abs((*this)(y) - direct(y)) > tolerance * scale) return false;
  }
  return true;
}

double GaussianSumProfile::operator()(double y) const {
  if (coeffs_.empty() || y < lo_ || y > hi_) return direct(y);
  const double t = (2.0 * y - lo_ - hi_) / (hi_ - lo_);
  // Clenshaw recurrence.
  double b1 = 0.0;
  double b2 = 0.0;
  for (std::size_t j = coeffs_.size() - 1; j >= 1; --j) {
    const double b0 = 2.0 * t * b1 - b2 + coeffs_[j];
    b2 = b1;
    b1 = b0;
  }
  return t * b1 - b2 + coeffs_[0];
}

double GaussianSumProfile::squared_norm() const {
  double s = 0.0;
  for (std::size_t i = 0; i < atoms_.size(); ++i) s += weights_[i] * (*this)(atoms_[i]);
  return std::max(s, 0.0);
}

} // namespace ckme
