#include "ckme/oracle.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "ckme/errors.hpp"
#include "ckme/gaussian_sum.hpp"

namespace ckme {

namespace {

// Above this many kernel evaluations Gaussian sums go through a profile.
constexpr std::size_t kProfileThreshold = 4'000'000;

std::uint64_t point_key(const InputPoint& x) {
  std::uint64_t h = 0x6a09e667f3bcc908ULL;
  for (double c : x.coords) h = splitmix64(h ^ std::bit_cast<std::uint64_t>(c));
  return h;
}

} // namespace

std::string_view to_string(MeanKind kind) {
  switch (kind) {
  case MeanKind::constant: return "constant";
  case MeanKind::affine: return "affine";
  case MeanKind::sine: return "sine";
  case MeanKind::geodesic_to_pole: return "geodesic_to_pole";
  case MeanKind::lambda_sum: return "lambda_sum";
  }
  return "unknown";
}

std::string_view to_string(OracleKind kind) {
  switch (kind) {
  case OracleKind::closed_form_gaussian: return "closed_form";
  case OracleKind::monte_carlo: return "monte_carlo";
  }
  return "unknown";
}

double MeanFunction::operator()(const InputPoint& x) const {
  switch (kind) {
  case MeanKind::constant: return value;
  case MeanKind::affine: return intercept + slope * x.coords.at(static_cast<std::size_t>(coordinate));
  case MeanKind::sine:
    return std::sin(2.0 * std::numbers::pi * frequency *
                    x.coords.at(static_cast<std::size_t>(coordinate)));
  case MeanKind::geodesic_to_pole: return std::acos(std::clamp(x.coords.at(2), -1.0, 1.0));
  case MeanKind::lambda_sum: {
    double s = 0.0;
    for (std::size_t i = 0; i < x.coords.size() / 2; ++i) s += x.coords[i];
    return s;
  }
  }
  return 0.0;
}

void MeanFunction::check(const MetricSpace& space) const {
  switch (kind) {
  case MeanKind::constant: return;
  case MeanKind::affine:
  case MeanKind::sine:
    if (coordinate < 0 || static_cast<std::size_t>(coordinate) >= space.ambient_size()) {
      throw ValidationError("mean function coordinate " + std::to_string(coordinate) +
                            " out of range for the input space");
    }
    return;
  case MeanKind::geodesic_to_pole:
    if (space.geometry() != Geometry::sphere2) {
      throw ValidationError("geodesic_to_pole mean needs the sphere2 geometry");
    }
    return;
  case MeanKind::lambda_sum:
    if (space.geometry() != Geometry::functional) {
      throw ValidationError("lambda_sum mean needs the functional geometry");
    }
    return;
  }
}

void ConditionalModel::check() const {
  check_compatible(space, input_dist);
  mean.check(space);
  if (!(noise.width > 0.0) || !std::isfinite(noise.width)) {
    throw ValidationError("noise width must be positive");
  }
}

double ConditionalModel::sample_output(const InputPoint& x, RandomStream& rng) const {
  const double centre = mean(x);
  switch (noise.kind) {
  case NoiseKind::gaussian: return centre + noise.width * standard_normal(rng);
  case NoiseKind::uniform: return centre + uniform_real(rng, -noise.width, noise.width);
  }
  return centre;
}

Observation ConditionalModel::sample(RandomStream& rng) const {
  Observation obs;
  obs.x = sample_input(space, input_dist, rng);
  obs.y = sample_output(obs.x, rng);
  return obs;
}

OracleHandle::OracleHandle(OracleKind kind, ConditionalModel model, OutputKernel kernel,
                           std::size_t samples, std::uint64_t seed)
    : kind_(kind), model_(std::move(model)), kernel_(kernel), samples_(samples), seed_(seed) {
  model_.check();
}

OracleHandle OracleHandle::closed_form(ConditionalModel model, OutputKernel kernel) {
  if (kernel.family() != OutputKernelFamily::gaussian) {
    throw OracleIncompatible("closed-form oracle needs the gaussian output kernel");
  }
  if (model.noise.kind != NoiseKind::gaussian) {
    throw OracleIncompatible("closed-form oracle needs gaussian noise");
  }
  return {OracleKind::closed_form_gaussian, std::move(model), kernel, 0, 0};
}

OracleHandle OracleHandle::monte_carlo(ConditionalModel model, OutputKernel kernel,
                                       std::size_t samples, std::uint64_t seed) {
  if (samples == 0) throw ValidationError("monte-carlo oracle needs at least one sample");
  return {OracleKind::monte_carlo, std::move(model), kernel, samples, seed};
}

Embedding OracleHandle::conditional_sample(const InputPoint& x) const {
  const std::size_t m = kind_ == OracleKind::monte_carlo ? samples_ : 1;
  auto rng = make_stream(seed_, StreamRole::oracle, point_key(x));
  return mc_oracle_embedding(model_, x, m, rng);
}

double OracleHandle::cross(const InputPoint& x, double y) const {
  if (kind_ == OracleKind::closed_form_gaussian) {
    const double sigma = kernel_.parameter();
    const double spread = sigma + 2.0 * model_.noise.width * model_.noise.width;
    const double diff = y - model_.mean(x);
    return std::sqrt(sigma / spread) * std::exp(-diff * diff / spread);
  }
  return evaluate(conditional_sample(x), y, kernel_);
}

double OracleHandle::cross(const InputPoint& x, const Embedding& e) const {
  if (kind_ == OracleKind::closed_form_gaussian) {
    const double sigma = kernel_.parameter();
    const double spread = sigma + 2.0 * model_.noise.width * model_.noise.width;
    const double amplitude = std::sqrt(sigma / spread);
    const double centre = model_.mean(x);
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) {
      const double diff = e.atoms()[i] - centre;
      s += e.weights()[i] * std::exp(-diff * diff / spread);
    }
    return amplitude * s;
  }
  const Embedding sample = conditional_sample(x);
  if (kernel_.family() == OutputKernelFamily::gaussian &&
      sample.size() * e.size() > kProfileThreshold) {
    const GaussianSumProfile profile(sample, kernel_.parameter());
    double s = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) s += e.weights()[i] * profile(e.atoms()[i]);
    return s;
  }
  return inner(e, sample, kernel_);
}

double OracleHandle::norm_sq(const InputPoint& x) const {
  if (kind_ == OracleKind::closed_form_gaussian) {
    const double sigma = kernel_.parameter();
    const double s = model_.noise.width;
    return std::sqrt(sigma / (sigma + 4.0 * s * s));
  }
  return u_statistic_norm(conditional_sample(x), kernel_);
}

double oracle_cross(const OracleHandle& h, const InputPoint& x, double y) { return h.cross(x, y); }

double oracle_norm_sq(const OracleHandle& h, const InputPoint& x) { return h.norm_sq(x); }

Embedding mc_oracle_embedding(const ConditionalModel& model, const InputPoint& x, std::size_t M,
                              RandomStream& rng) {
  if (M == 0) throw ValidationError("monte-carlo embedding needs M >= 1");
  std::vector<double> atoms(M);
  for (double& y : atoms) y = model.sample_output(x, rng);
  return Embedding(std::move(atoms), std::vector<double>(M, 1.0 / static_cast<double>(M)));
}

double u_statistic_norm(const Embedding& sample, const OutputKernel& k) {
  const std::size_t m = sample.size();
  if (m == 0) throw ValidationError("u-statistic needs a nonempty sample");
  const auto& y = sample.atoms();
  if (m == 1) return k.eval(y[0], y[0]);
  const double pairs = static_cast<double>(m) * static_cast<double>(m - 1);
  if (k.family() == OutputKernelFamily::gaussian && m * m > kProfileThreshold) {
    const GaussianSumProfile profile(Embedding(y, std::vector<double>(m, 1.0)), k.parameter());
    double full = 0.0;
    for (double yi : y) full += profile(yi);
    // Remove the diagonal l(y_i, y_i) = 1 terms.
    return (full - static_cast<double>(m)) / pairs;
  }
  double off = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i + 1; j < m; ++j) off += k.eval(y[i], y[j]);
  }
  return 2.0 * off / pairs;
}

double regression_estimate(const CkmeState& st, std::size_t q, const OutputKernel& k) {
  if (k.family() != OutputKernelFamily::linear) {
    throw ValidationError("regression_estimate needs the linear output kernel");
  }
  return evaluate(st.evaluate_at(q), 1.0, k);
}

} // namespace ckme
