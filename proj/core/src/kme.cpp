#include "ckme/kme.hpp"

#include <cmath>
#include <string>

#include "ckme/errors.hpp"

namespace ckme {

void KmeState::update(double y, double a) {
  if (count_ == 0) {
    if (!std::isfinite(y)) throw ValidationError("kme output is not finite");
    atoms_.assign(1, y);
    weights_.assign(1, 1.0);
    count_ = 1;
    return;
  }
  if (!(a > 0.0 && a <= 1.0)) {
    throw ValidationError("kme step size must lie in (0, 1], got " + std::to_string(a));
  }
  if (!std::isfinite(y)) throw ValidationError("kme output is not finite");
  for (double& w : weights_) w *= (1.0 - a);
  atoms_.push_back(y);
  weights_.push_back(a);
  ++count_;
}

KmeState kme_update(KmeState st, double y, double a) {
  st.update(y, a);
  return st;
}

Embedding batch_kme(std::span<const double> ys) {
  if (ys.empty()) throw ValidationError("batch_kme needs at least one output");
  const double w = 1.0 / static_cast<double>(ys.size());
  return Embedding(std::vector<double>(ys.begin(), ys.end()), std::vector<double>(ys.size(), w));
}

double kme_deviation_bound(double kernel_bound, std::uint64_t n, double delta) {
  if (!(kernel_bound > 0.0) || n == 0 || !(delta > 0.0 && delta <= 1.0)) {
    throw ValidationError("deviation bound needs C > 0, n >= 1 and delta in (0, 1]");
  }
  const auto nd = static_cast<double>(n);
  return std::sqrt(kernel_bound / nd) + std::sqrt(2.0 * kernel_bound * std::log(1.0 / delta) / nd);
}

} // namespace ckme
