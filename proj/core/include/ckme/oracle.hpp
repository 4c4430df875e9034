#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>

#include "ckme/ckme.hpp"
#include "ckme/embedding.hpp"
#include "ckme/metric_space.hpp"
#include "ckme/output_kernel.hpp"
#include "ckme/random.hpp"

namespace ckme {

enum class MeanKind { constant, affine, sine, geodesic_to_pole, lambda_sum };

std::string_view to_string(MeanKind kind);

/// Conditional mean m(x) of a synthetic model.
///
///   constant           value
///   affine             intercept + slope * x[coordinate]
///   sine               sin(2 pi frequency x[coordinate])
///   geodesic_to_pole   arccos(x[2]) on the sphere
///   lambda_sum         sum of the lambda block of a functional point
struct MeanFunction {
  MeanKind kind = MeanKind::constant;
  int coordinate = 0;
  double value = 0.0;
  double slope = 1.0;
  double intercept = 0.0;
  double frequency = 1.0;

  double operator()(const InputPoint& x) const;
  /// Throws ValidationError when the function does not apply to the space.
  void check(const MetricSpace& space) const;

  bool operator==(const MeanFunction&) const = default;
};

enum class NoiseKind { gaussian, uniform };

/// Additive noise: N(0, width^2) or U[-width, width].
struct Noise {
  NoiseKind kind = NoiseKind::gaussian;
  double width = 1.0;

  bool operator==(const Noise&) const = default;
};

/// Joint law: X ~ input_dist on space, Y | X = x ~ m(x) + noise.
struct ConditionalModel {
  MetricSpace space = MetricSpace::euclidean(1);
  InputDistribution input_dist;
  MeanFunction mean;
  Noise noise;

  void check() const;
  double sample_output(const InputPoint& x, RandomStream& rng) const;
  Observation sample(RandomStream& rng) const;
};

enum class OracleKind { closed_form_gaussian, monte_carlo };

std::string_view to_string(OracleKind kind);

/// Ground truth mu_*(x) = E[l(., Y) | X = x] for a synthetic model.
///
/// The closed form needs a Gaussian output kernel and Gaussian noise. The
/// Monte-Carlo variant draws `samples` conditional outputs per x from a
/// stream keyed by (seed, x), so repeated queries at the same x see the same
/// draws.
class OracleHandle {
public:
  static OracleHandle closed_form(ConditionalModel model, OutputKernel kernel);
  static OracleHandle monte_carlo(ConditionalModel model, OutputKernel kernel, std::size_t samples,
                                  std::uint64_t seed);

  OracleKind kind() const noexcept { return kind_; }
  std::size_t samples() const noexcept { return samples_; }
  const ConditionalModel& model() const noexcept { return model_; }
  const OutputKernel& kernel() const noexcept { return kernel_; }

  /// <l(., y), mu_*(x)> = E[l(y, Y) | X = x]
  double cross(const InputPoint& x, double y) const;
  /// <e, mu_*(x)>
  double cross(const InputPoint& x, const Embedding& e) const;
  /// ||mu_*(x)||^2 = E[l(Y, Y') | X = x]; U-statistic for Monte-Carlo.
  double norm_sq(const InputPoint& x) const;

  /// The conditional draws behind the Monte-Carlo variant.
  Embedding conditional_sample(const InputPoint& x) const;

private:
  OracleHandle(OracleKind kind, ConditionalModel model, OutputKernel kernel, std::size_t samples,
               std::uint64_t seed);

  OracleKind kind_;
  ConditionalModel model_;
  OutputKernel kernel_;
  std::size_t samples_;
  std::uint64_t seed_;
};

double oracle_cross(const OracleHandle& h, const InputPoint& x, double y);
double oracle_norm_sq(const OracleHandle& h, const InputPoint& x);

/// Uniform-weight embedding of M conditional draws at x.
Embedding mc_oracle_embedding(const ConditionalModel& model, const InputPoint& x, std::size_t M,
                              RandomStream& rng);

/// Unbiased U-statistic (1 / (M (M-1))) sum_{i != j} l(y_i, y_j) of a
/// uniform sample; falls back to l(y, y) when M == 1.
double u_statistic_norm(const Embedding& sample, const OutputKernel& k);

/// sum_i W_{n,i}(x_q) Y_i, the local-averaging regression estimate. Requires
/// the linear output kernel.
double regression_estimate(const CkmeState& st, std::size_t q, const OutputKernel& k);

} // namespace ckme
