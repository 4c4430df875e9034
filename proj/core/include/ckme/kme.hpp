#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "ckme/embedding.hpp"

namespace ckme {

/// Running estimate of an (unconditional) kernel mean embedding.
class KmeState {
public:
  Embedding estimate() const { return Embedding(atoms_, weights_); }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::uint64_t count() const noexcept { return count_; }

  /// mu_n = mu_{n-1} - a (mu_{n-1} - l(., y)). The first call ignores `a`
  /// and sets mu_1 = l(., y). Throws ValidationError if a is outside (0, 1]
  /// once the state is nonempty.
  void update(double y, double a);

private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
  std::uint64_t count_ = 0;
};

KmeState kme_update(KmeState st, double y, double a);

/// Empirical mean embedding with uniform weights 1/n. Throws on empty input.
Embedding batch_kme(std::span<const double> ys);

/// High-probability deviation bound for the empirical mean embedding:
/// sqrt(C/n) + sqrt(2 C log(1/delta) / n), delta in (0, 1].
double kme_deviation_bound(double kernel_bound, std::uint64_t n, double delta);

} // namespace ckme
