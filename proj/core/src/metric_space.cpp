#include "ckme/metric_space.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "ckme/errors.hpp"

namespace ckme {

std::string_view to_string(Geometry geometry) {
  switch (geometry) {
  case Geometry::euclidean: return "euclidean";
  case Geometry::sphere2: return "sphere2";
  case Geometry::functional: return "functional";
  }
  return "unknown";
}

std::string_view to_string(InputDistributionKind kind) {
  switch (kind) {
  case InputDistributionKind::uniform_box: return "uniform_box";
  case InputDistributionKind::standard_normal: return "standard_normal";
  case InputDistributionKind::uniform_sphere: return "uniform_sphere";
  case InputDistributionKind::uniform_params: return "uniform_params";
  }
  return "unknown";
}

MetricSpace::MetricSpace(Geometry geometry, int dim, double bound, double psi_scale)
    : geometry_(geometry), dim_(dim), bound_(bound), psi_scale_(psi_scale) {}

MetricSpace MetricSpace::euclidean(int p) {
  if (p < 1) throw ValidationError("euclidean dimension must be a positive integer");
  return {Geometry::euclidean, p, 0.0, 0.0};
}

MetricSpace MetricSpace::sphere2() { return {Geometry::sphere2, 3, 0.0, 0.0}; }

MetricSpace MetricSpace::functional(int m, double bound, double psi_scale) {
  if (m < 1) throw ValidationError("functional translate count m must be a positive integer");
  if (!(bound > 0.0) || !std::isfinite(bound)) {
    throw ValidationError("functional parameter bound M must be positive");
  }
  if (!(psi_scale > 0.0) || !std::isfinite(psi_scale)) {
    throw ValidationError("functional psi scale s must be positive");
  }
  return {Geometry::functional, m, bound, psi_scale};
}

std::size_t MetricSpace::ambient_size() const noexcept {
  switch (geometry_) {
  case Geometry::euclidean: return static_cast<std::size_t>(dim_);
  case Geometry::sphere2: return 3;
  case Geometry::functional: return 2 * static_cast<std::size_t>(dim_);
  }
  return 0;
}

int MetricSpace::intrinsic_dimension() const noexcept {
  switch (geometry_) {
  case Geometry::euclidean: return dim_;
  case Geometry::sphere2: return 2;
  case Geometry::functional: return 2 * dim_;
  }
  return 0;
}

void MetricSpace::validate(const InputPoint& x) const {
  if (x.coords.size() != ambient_size()) {
    throw ValidationError(std::string(to_string(geometry_)) + " point needs " +
                          std::to_string(ambient_size()) + " coordinates, got " +
                          std::to_string(x.coords.size()));
  }
  for (double c : x.coords) {
    if (!std::isfinite(c)) throw ValidationError("input point has a non-finite coordinate");
  }
  if (geometry_ == Geometry::sphere2) {
    const double norm = std::hypot(x.coords[0], x.coords[1], x.coords[2]);
    if (std::abs(norm - 1.0) > kSphereTolerance) {
      throw ValidationError("sphere2 point is off the unit sphere (norm " + std::to_string(norm) +
                            ")");
    }
  } else if (geometry_ == Geometry::functional) {
    for (double c : x.coords) {
      if (std::abs(c) > bound_) {
        throw ValidationError("functional parameter " + std::to_string(c) + " outside [-M, M]");
      }
    }
  }
}

double MetricSpace::distance(const InputPoint& a, const InputPoint& b) const {
  validate(a);
  validate(b);
  switch (geometry_) {
  case Geometry::euclidean: {
    double sum = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      const double diff = a.coords[i] - b.coords[i];
      sum += diff * diff;
    }
    return std::sqrt(sum);
  }
  case Geometry::sphere2: {
    if (a == b) return 0.0;
    const double dot =
        a.coords[0] * b.coords[0] + a.coords[1] * b.coords[1] + a.coords[2] * b.coords[2];
    return std::acos(std::clamp(dot, -1.0, 1.0));
  }
  case Geometry::functional:
    if (a == b) return 0.0;
    // Fixed argument order keeps the floating-point sum symmetric.
    return std::lexicographical_compare(a.coords.begin(), a.coords.end(), b.coords.begin(),
                                        b.coords.end())
               ? functional_distance(a, b)
               : functional_distance(b, a);
  }
  return 0.0;
}

double MetricSpace::functional_distance(const InputPoint& a, const InputPoint& b) const {
  const auto m = static_cast<std::size_t>(dim_);
  // f - g is one translate sum with coefficients [lambda_a; -lambda_b].
  const std::size_t terms = 2 * m;
  const auto coef = [&](std::size_t i) { return i < m ? a.coords[i] : -b.coords[i - m]; };
  const auto offset = [&](std::size_t i) { return i < m ? a.coords[m + i] : b.coords[i]; };
  const double zero_lag = psi_autocorrelation(psi_scale_, 0.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < terms; ++i) {
    const double ci = coef(i);
    sum += ci * ci * zero_lag;
    for (std::size_t j = i + 1; j < terms; ++j) {
      sum += 2.0 * ci * coef(j) * psi_autocorrelation(psi_scale_, offset(i) - offset(j));
    }
  }
  return std::sqrt(std::max(sum, 0.0));
}

double psi_autocorrelation(double psi_scale, double lag) {
  return psi_scale * std::sqrt(std::numbers::pi) *
         std::exp(-lag * lag / (4.0 * psi_scale * psi_scale));
}

Eigen::MatrixXd functional_gram(double psi_scale, std::span<const double> offsets) {
  const auto n = static_cast<Eigen::Index>(offsets.size());
  Eigen::MatrixXd gram(n, n);
  for (Eigen::Index a = 0; a < n; ++a) {
    gram(a, a) = psi_autocorrelation(psi_scale, 0.0);
    for (Eigen::Index b = a + 1; b < n; ++b) {
      const double v = psi_autocorrelation(psi_scale, offsets[a] - offsets[b]);
      gram(a, b) = v;
      gram(b, a) = v;
    }
  }
  return gram;
}

void check_compatible(const MetricSpace& space, const InputDistribution& dist) {
  bool ok = false;
  switch (space.geometry()) {
  case Geometry::euclidean:
    ok = dist.kind == InputDistributionKind::standard_normal ||
         (dist.kind == InputDistributionKind::uniform_box && dist.low < dist.high);
    break;
  case Geometry::sphere2: ok = dist.kind == InputDistributionKind::uniform_sphere; break;
  case Geometry::functional: ok = dist.kind == InputDistributionKind::uniform_params; break;
  }
  if (!ok) {
    throw ValidationError("input distribution " + std::string(to_string(dist.kind)) +
                          " is not supported on " + std::string(to_string(space.geometry())));
  }
}

InputPoint sample_input(const MetricSpace& space, const InputDistribution& dist, RandomStream& rng) {
  check_compatible(space, dist);
  InputPoint x;
  x.coords.resize(space.ambient_size());
  switch (dist.kind) {
  case InputDistributionKind::uniform_box:
    for (double& c : x.coords) c = uniform_real(rng, dist.low, dist.high);
    break;
  case InputDistributionKind::standard_normal:
    for (double& c : x.coords) c = standard_normal(rng);
    break;
  case InputDistributionKind::uniform_sphere: {
    double norm = 0.0;
    do {
      for (double& c : x.coords) c = standard_normal(rng);
      norm = std::hypot(x.coords[0], x.coords[1], x.coords[2]);
    } while (norm < 1e-12);
    for (double& c : x.coords) c /= norm;
    break;
  }
  case InputDistributionKind::uniform_params: {
    const double bound = space.parameter_bound();
    for (double& c : x.coords) c = uniform_real(rng, -bound, bound);
    break;
  }
  }
  return x;
}

} // namespace ckme
