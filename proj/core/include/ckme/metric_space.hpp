#pragma once

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ckme/random.hpp"

namespace ckme {

enum class Geometry { euclidean, sphere2, functional };

std::string_view to_string(Geometry geometry);

/// A point of the input space. Coordinates are interpreted by the owning
/// MetricSpace: raw coordinates (euclidean), a unit 3-vector (sphere2), or the
/// parameter vector [lambda_1..lambda_m, x_1..x_m] of a translate sum
/// (functional).
struct InputPoint {
  std::vector<double> coords;

  bool operator==(const InputPoint&) const = default;
};

/// Input geometry with its distance.
///
/// - euclidean(p): R^p with the Euclidean metric.
/// - sphere2: the unit 2-sphere in R^3 with great-circle distance.
/// - functional(m, M, s): functions f = sum_i lambda_i psi(. - x_i) with
///   parameters in [-M, M] and psi(t) = exp(-t^2 / (2 s^2)), under the L2
///   metric. Distinct parameter vectors may represent the same function.
class MetricSpace {
public:
  static MetricSpace euclidean(int p);
  static MetricSpace sphere2();
  static MetricSpace functional(int m, double bound, double psi_scale);

  Geometry geometry() const noexcept { return geometry_; }
  /// Number of stored coordinates per point.
  std::size_t ambient_size() const noexcept;
  /// Exponent p in h_n = r_n^(1/p): p, 2 and 2m respectively.
  int intrinsic_dimension() const noexcept;

  int euclidean_dimension() const noexcept { return dim_; }
  int translates() const noexcept { return dim_; }
  double parameter_bound() const noexcept { return bound_; }
  double psi_scale() const noexcept { return psi_scale_; }

  /// Throws ValidationError for wrong length, off-sphere or out-of-box points.
  void validate(const InputPoint& x) const;

  double distance(const InputPoint& a, const InputPoint& b) const;

  bool operator==(const MetricSpace&) const = default;

private:
  MetricSpace(Geometry geometry, int dim, double bound, double psi_scale);

  double functional_distance(const InputPoint& a, const InputPoint& b) const;

  Geometry geometry_;
  int dim_;
  double bound_;
  double psi_scale_;
};

/// Tolerance on | |x| - 1 | for sphere points.
inline constexpr double kSphereTolerance = 1e-9;

/// <psi, tau_lag psi> in L2(R) for the Gaussian bump of scale s:
/// s * sqrt(pi) * exp(-lag^2 / (4 s^2)).
double psi_autocorrelation(double psi_scale, double lag);

/// Gram matrix G[a][b] = psi_autocorrelation(s, offsets[a] - offsets[b]).
Eigen::MatrixXd functional_gram(double psi_scale, std::span<const double> offsets);

enum class InputDistributionKind { uniform_box, standard_normal, uniform_sphere, uniform_params };

std::string_view to_string(InputDistributionKind kind);

/// Input law Q_X. uniform_box draws every coordinate from [low, high];
/// uniform_params draws functional parameters uniformly from [-M, M]^(2m).
struct InputDistribution {
  InputDistributionKind kind = InputDistributionKind::uniform_box;
  double low = 0.0;
  double high = 1.0;

  static InputDistribution uniform_box(double low, double high) {
    return {InputDistributionKind::uniform_box, low, high};
  }
  static InputDistribution standard_normal() { return {InputDistributionKind::standard_normal}; }
  static InputDistribution uniform_sphere() { return {InputDistributionKind::uniform_sphere}; }
  static InputDistribution uniform_params() { return {InputDistributionKind::uniform_params}; }

  bool operator==(const InputDistribution&) const = default;
};

/// Throws ValidationError when the law cannot live on the space.
void check_compatible(const MetricSpace& space, const InputDistribution& dist);

InputPoint sample_input(const MetricSpace& space, const InputDistribution& dist, RandomStream& rng);

} // namespace ckme
