#pragma once

#include <cstddef>
#include <vector>

#include "ckme/embedding.hpp"

namespace ckme {

/// Fast evaluation of f(y) = sum_i w_i exp(-(y - a_i)^2 / sigma) for large
/// atom sets.
///
/// f is entire, so a Chebyshev interpolant on [min a - pad, max a + pad]
/// reproduces it to near machine precision. The degree is doubled until a
/// probe against direct summation agrees within `tolerance * sum|w|`;
/// outside the interval, and if no degree up to the cap passes, evaluation
/// falls back to direct summation.
class GaussianSumProfile {
public:
  GaussianSumProfile(const Embedding& e, double sigma, double tolerance = 1e-13);

  double operator()(double y) const;
  double direct(double y) const;

  /// Squared RKHS norm of the source embedding, sum_i w_i f(a_i).
  double squared_norm() const;

  bool interpolated() const noexcept { return !coeffs_.empty(); }
  std::size_t degree() const noexcept { return coeffs_.empty() ? 0 : coeffs_.size() - 1; }

private:
  bool build(std::size_t degree, double tolerance);

  std::vector<double> atoms_;
  std::vector<double> weights_;
  double sigma_;
  double lo_ = 0.0;
  double hi_ = 0.0;
  std::vector<double> coeffs_;
};

} // namespace ckme
