#pragma once

#include <string_view>

namespace ckme {

enum class OutputKernelFamily { gaussian, laplace, box, linear };

std::string_view to_string(OutputKernelFamily family);

/// Positive definite kernel on the real line used for output embeddings.
///
/// Gaussian and Laplace use the profiles exp(-x^2/sigma) and exp(-|x|/sigma)
/// (no squared bandwidth). Box is the indicator 1(|x| < B); it is not positive
/// definite in general. Linear is y1*y2 on [-bound, bound].
class OutputKernel {
public:
  static OutputKernel gaussian(double sigma);
  static OutputKernel laplace(double sigma);
  static OutputKernel box(double half_width);
  static OutputKernel linear(double domain_bound);

  OutputKernelFamily family() const noexcept { return family_; }
  /// sigma, B or domain bound depending on the family.
  double parameter() const noexcept { return parameter_; }

  /// Throws DomainError for the linear family when |y| exceeds the bound.
  double eval(double y1, double y2) const;
  double operator()(double y1, double y2) const { return eval(y1, y2); }

  /// Least C with eval(y, y) <= C on the domain.
  double sup_bound() const noexcept;

  void check_domain(double y) const;

  bool operator==(const OutputKernel&) const = default;

private:
  OutputKernel(OutputKernelFamily family, double parameter);

  OutputKernelFamily family_;
  double parameter_;
};

} // namespace ckme
