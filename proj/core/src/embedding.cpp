#include "ckme/embedding.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ckme/errors.hpp"

namespace ckme {

Embedding::Embedding(std::vector<double> atoms, std::vector<double> weights)
    : atoms_(std::move(atoms)), weights_(std::move(weights)) {
  if (atoms_.size() != weights_.size()) {
    throw ValidationError("embedding atoms and weights differ in length");
  }
  for (std::size_t i = 0; i < atoms_.size(); ++i) {
    if (!std::isfinite(atoms_[i]) || !std::isfinite(weights_[i])) {
      throw ValidationError("embedding holds a non-finite atom or weight");
    }
  }
}

double Embedding::weight_sum() const noexcept {
  double s = 0.0;
  for (double w : weights_) s += w;
  return s;
}

namespace {

double linear_moment(const Embedding& e, const OutputKernel& k) {
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) {
    k.check_domain(e.atoms()[i]);
    s += e.weights()[i] * e.atoms()[i];
  }
  return s;
}

} // namespace

double inner(const Embedding& a, const Embedding& b, const OutputKernel& k) {
  if (k.family() == OutputKernelFamily::linear) {
    // <sum w l(., y), sum v l(., z)> = (sum w y)(sum v z) for l(y, z) = y z.
    return linear_moment(a, k) * linear_moment(b, k);
  }
  double total = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double yi = a.atoms()[i];
    double row = 0.0;
    for (std::size_t j = 0; j < b.size(); ++j) row += b.weights()[j] * k.eval(yi, b.atoms()[j]);
    total += a.weights()[i] * row;
  }
  return total;
}

double squared_norm(const Embedding& a, const OutputKernel& k) {
  if (k.family() == OutputKernelFamily::linear) {
    const double m = linear_moment(a, k);
    return m * m;
  }
  double diag = 0.0;
  double off = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double yi = a.atoms()[i];
    const double wi = a.weights()[i];
    diag += wi * wi * k.eval(yi, yi);
    double row = 0.0;
    for (std::size_t j = i + 1; j < a.size(); ++j) row += a.weights()[j] * k.eval(yi, a.atoms()[j]);
    off += wi * row;
  }
  return std::max(diag + 2.0 * off, 0.0);
}

double squared_distance(const Embedding& a, const Embedding& b, const OutputKernel& k) {
  const double value = inner(a, a, k) - 2.0 * inner(a, b, k) + inner(b, b, k);
  return std::max(value, 0.0);
}

double evaluate(const Embedding& e, double y, const OutputKernel& k) {
  k.check_domain(y);
  double s = 0.0;
  for (std::size_t i = 0; i < e.size(); ++i) s += e.weights()[i] * k.eval(e.atoms()[i], y);
  return s;
}

Embedding merge_scaled(const Embedding& a, double c1, const Embedding& b, double c2) {
  std::vector<double> atoms;
  std::vector<double> weights;
  atoms.reserve(a.size() + b.size());
  weights.reserve(a.size() + b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    atoms.push_back(a.atoms()[i]);
    weights.push_back(c1 * a.weights()[i]);
  }
  for (std::size_t i = 0; i < b.size(); ++i) {
    atoms.push_back(b.atoms()[i]);
    weights.push_back(c2 * b.weights()[i]);
  }
  return Embedding(std::move(atoms), std::move(weights));
}

void to_json(nlohmann::json& j, const Embedding& e) {
  j = nlohmann::json{{"atoms", e.atoms()}, {"weights", e.weights()}};
}

void from_json(const nlohmann::json& j, Embedding& e) {
  e = Embedding(j.at("atoms").get<std::vector<double>>(), j.at("weights").get<std::vector<double>>());
}

} // namespace ckme
