#include "ckme/serialization.hpp"

#include <algorithm>
#include <string>

#include "ckme/errors.hpp"

namespace ckme::json_io {

namespace {

std::string kind_of(const json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key) || !j.at(key).is_string()) {
    throw ValidationError(where + "." + key + " must be a string");
  }
  return j.at(key).get<std::string>();
}

} // namespace

void require_keys(const json& j, std::initializer_list<const char*> allowed,
                  const std::string& where) {
  if (!j.is_object()) throw ValidationError(where + " must be an object");
  for (const auto& [key, value] : j.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* a) { return key == a; });
    if (!known) throw ValidationError("unknown field " + where + "." + key);
  }
}

double read_number(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw ValidationError(where + "." + key + " must be a number");
  }
  return j.at(key).get<double>();
}

double read_positive(const json& j, const char* key, const std::string& where) {
  const double v = read_number(j, key, where);
  if (!(v > 0.0)) throw ValidationError(where + "." + key + " must be positive");
  return v;
}

int read_positive_int(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_number_integer() || j.at(key).get<long long>() < 1) {
    throw ValidationError(where + "." + key + " must be a positive integer");
  }
  return j.at(key).get<int>();
}

json write(const MetricSpace& space) {
  switch (space.geometry()) {
  case Geometry::euclidean: return {{"geometry", "euclidean"}, {"p", space.euclidean_dimension()}};
  case Geometry::sphere2: return {{"geometry", "sphere2"}};
  case Geometry::functional:
    return {{"geometry", "functional"},
            {"m", space.translates()},
            {"M", space.parameter_bound()},
            {"s", space.psi_scale()}};
  }
  return {};
}

MetricSpace read_space(const json& j, const std::string& where) {
  const std::string g = kind_of(j, "geometry", where);
  if (g == "euclidean") {
    require_keys(j, {"geometry", "p"}, where);
    return MetricSpace::euclidean(read_positive_int(j, "p", where));
  }
  if (g == "sphere2") {
    require_keys(j, {"geometry"}, where);
    return MetricSpace::sphere2();
  }
  if (g == "functional") {
    require_keys(j, {"geometry", "m", "M", "s"}, where);
    return MetricSpace::functional(read_positive_int(j, "m", where), read_positive(j, "M", where),
                                   read_positive(j, "s", where));
  }
  throw ValidationError(where + ".geometry: unknown geometry '" + g + "'");
}

json write(const InputDistribution& dist) {
  json j{{"kind", to_string(dist.kind)}};
  if (dist.kind == InputDistributionKind::uniform_box) {
    j["low"] = dist.low;
    j["high"] = dist.high;
  }
  return j;
}

InputDistribution read_input_distribution(const json& j, const std::string& where) {
  const std::string k = kind_of(j, "kind", where);
  if (k == "uniform_box") {
    require_keys(j, {"kind", "low", "high"}, where);
    const double low = j.contains("low") ? read_number(j, "low", where) : 0.0;
    const double high = j.contains("high") ? read_number(j, "high", where) : 1.0;
    if (!(low < high)) throw ValidationError(where + ": low must be below high");
    return InputDistribution::uniform_box(low, high);
  }
  require_keys(j, {"kind"}, where);
  if (k == "standard_normal") return InputDistribution::standard_normal();
  if (k == "uniform_sphere") return InputDistribution::uniform_sphere();
  if (k == "uniform_params") return InputDistribution::uniform_params();
  throw ValidationError(where + ".kind: unknown input distribution '" + k + "'");
}

json write(const OutputKernel& kernel) {
  json j{{"family", to_string(kernel.family())}};
  switch (kernel.family()) {
  case OutputKernelFamily::gaussian:
  case OutputKernelFamily::laplace: j["sigma"] = kernel.parameter(); break;
  case OutputKernelFamily::box: j["B"] = kernel.parameter(); break;
  case OutputKernelFamily::linear: j["domain_bound"] = kernel.parameter(); break;
  }
  return j;
}

OutputKernel read_output_kernel(const json& j, const std::string& where) {
  const std::string f = kind_of(j, "family", where);
  if (f == "gaussian" || f == "laplace") {
    require_keys(j, {"family", "sigma"}, where);
    const double sigma = read_positive(j, "sigma", where);
    return f == "gaussian" ? OutputKernel::gaussian(sigma) : OutputKernel::laplace(sigma);
  }
  if (f == "box") {
    require_keys(j, {"family", "B"}, where);
    return OutputKernel::box(read_positive(j, "B", where));
  }
  if (f == "linear") {
    require_keys(j, {"family", "domain_bound"}, where);
    return OutputKernel::linear(read_positive(j, "domain_bound", where));
  }
  throw ValidationError(where + ".family: unknown output kernel '" + f + "'");
}

json write(const MotherSmoother& mother) {
  switch (mother.family()) {
  case SmootherFamily::box: return {{"family", "box"}, {"B", mother.parameter()}};
  case SmootherFamily::gaussian:
  case SmootherFamily::laplace:
    return {{"family", to_string(mother.family())},
            {"sigma", mother.parameter()},
            {"R", mother.lower_radius()}};
  case SmootherFamily::epanechnikov: return {{"family", "epanechnikov"}};
  }
  return {};
}

MotherSmoother read_mother(const json& j, const std::string& where) {
  const std::string f = kind_of(j, "family", where);
  if (f == "box") {
    require_keys(j, {"family", "B"}, where);
    return MotherSmoother::box(read_positive(j, "B", where));
  }
  if (f == "gaussian" || f == "laplace") {
    require_keys(j, {"family", "sigma", "R"}, where);
    const double sigma = read_positive(j, "sigma", where);
    const double radius = j.contains("R") ? read_positive(j, "R", where) : 1.0;
    return f == "gaussian" ? MotherSmoother::gaussian(sigma, radius)
                           : MotherSmoother::laplace(sigma, radius);
  }
  if (f == "epanechnikov") {
    require_keys(j, {"family"}, where);
    return MotherSmoother::epanechnikov();
  }
  throw ValidationError(where + ".family: unknown smoother '" + f + "'");
}

json write(const RateSchedule& schedule) {
  return {{"epsilon", schedule.epsilon()}, {"a_scale", schedule.a_scale()}};
}

RateSchedule read_schedule(const json& j, int dimension, const std::string& where) {
  require_keys(j, {"epsilon", "a_scale"}, where);
  const double eps = j.contains("epsilon") ? read_number(j, "epsilon", where) : 0.5;
  const double scale = j.contains("a_scale") ? read_number(j, "a_scale", where) : 1.0;
  return RateSchedule(eps, dimension, scale);
}

json write(const MeanFunction& mean) {
  json j{{"kind", to_string(mean.kind)}};
  switch (mean.kind) {
  case MeanKind::constant: j["value"] = mean.value; break;
  case MeanKind::affine:
    j["coordinate"] = mean.coordinate;
    j["slope"] = mean.slope;
    j["intercept"] = mean.intercept;
    break;
  case MeanKind::sine:
    j["coordinate"] = mean.coordinate;
    j["frequency"] = mean.frequency;
    break;
  case MeanKind::geodesic_to_pole:
  case MeanKind::lambda_sum: break;
  }
  return j;
}

MeanFunction read_mean(const json& j, const std::string& where) {
  const std::string k = kind_of(j, "kind", where);
  MeanFunction m;
  const auto coordinate = [&] {
    if (!j.contains("coordinate")) return 0;
    if (!j.at("coordinate").is_number_integer() || j.at("coordinate").get<int>() < 0) {
      throw ValidationError(where + ".coordinate must be a nonnegative integer");
    }
    return j.at("coordinate").get<int>();
  };
  if (k == "constant") {
    require_keys(j, {"kind", "value"}, where);
    m.kind = MeanKind::constant;
    m.value = j.contains("value") ? read_number(j, "value", where) : 0.0;
  } else if (k == "affine") {
    require_keys(j, {"kind", "coordinate", "slope", "intercept"}, where);
    m.kind = MeanKind::affine;
    m.coordinate = coordinate();
    m.slope = j.contains("slope") ? read_number(j, "slope", where) : 1.0;
    m.intercept = j.contains("intercept") ? read_number(j, "intercept", where) : 0.0;
  } else if (k == "sine") {
    require_keys(j, {"kind", "coordinate", "frequency"}, where);
    m.kind = MeanKind::sine;
    m.coordinate = coordinate();
    m.frequency = j.contains("frequency") ? read_number(j, "frequency", where) : 1.0;
  } else if (k == "geodesic_to_pole") {
    require_keys(j, {"kind"}, where);
    m.kind = MeanKind::geodesic_to_pole;
  } else if (k == "lambda_sum") {
    require_keys(j, {"kind"}, where);
    m.kind = MeanKind::lambda_sum;
  } else {
    throw ValidationError(where + ".kind: unknown mean function '" + k + "'");
  }
  return m;
}

json write(const Noise& noise) {
  if (noise.kind == NoiseKind::gaussian) return {{"kind", "gaussian"}, {"s", noise.width}};
  return {{"kind", "uniform"}, {"half_width", noise.width}};
}

Noise read_noise(const json& j, const std::string& where) {
  const std::string k = kind_of(j, "kind", where);
  if (k == "gaussian") {
    require_keys(j, {"kind", "s"}, where);
    return {NoiseKind::gaussian, read_positive(j, "s", where)};
  }
  if (k == "uniform") {
    require_keys(j, {"kind", "half_width"}, where);
    return {NoiseKind::uniform, read_positive(j, "half_width", where)};
  }
  throw ValidationError(where + ".kind: unknown noise '" + k + "'");
}

json write(const InputPoint& x) { return x.coords; }

InputPoint read_point(const json& j, const std::string& where) {
  if (!j.is_array()) throw ValidationError(where + " point must be an array");
  InputPoint x;
  for (const auto& c : j) {
    if (!c.is_number()) throw ValidationError(where + " point coordinates must be numbers");
    x.coords.push_back(c.get<double>());
  }
  return x;
}

} // namespace ckme::json_io
