#pragma once

#include <cstddef>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/output_kernel.hpp"

namespace ckme {

/// Finite RKHS element sum_i w_i l(., y_i). The empty embedding is zero.
/// Weights may be negative so differences of embeddings stay representable.
class Embedding {
public:
  Embedding() = default;
  /// Throws ValidationError on length mismatch or non-finite values.
  Embedding(std::vector<double> atoms, std::vector<double> weights);

  static Embedding unit(double y) { return Embedding({y}, {1.0}); }

  const std::vector<double>& atoms() const noexcept { return atoms_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  std::size_t size() const noexcept { return atoms_.size(); }
  bool empty() const noexcept { return atoms_.empty(); }

  double weight_sum() const noexcept;

private:
  std::vector<double> atoms_;
  std::vector<double> weights_;
};

/// sum_i sum_j w_i v_j l(y_i, z_j)
double inner(const Embedding& a, const Embedding& b, const OutputKernel& k);

/// ||a||^2 via the symmetric half of the double sum.
double squared_norm(const Embedding& a, const OutputKernel& k);

/// ||a - b||^2 (the squared MMD between the represented measures), clamped at 0.
double squared_distance(const Embedding& a, const Embedding& b, const OutputKernel& k);

/// The represented function at y.
double evaluate(const Embedding& e, double y, const OutputKernel& k);

/// c1*a + c2*b; atom lists are concatenated without deduplication.
Embedding merge_scaled(const Embedding& a, double c1, const Embedding& b, double c2);

void to_json(nlohmann::json& j, const Embedding& e);
void from_json(const nlohmann::json& j, Embedding& e);

} // namespace ckme
