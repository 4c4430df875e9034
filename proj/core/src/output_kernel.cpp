#include "ckme/output_kernel.hpp"

#include <cmath>
#include <string>

#include "ckme/errors.hpp"

namespace ckme {

std::string_view to_string(OutputKernelFamily family) {
  switch (family) {
  case OutputKernelFamily::gaussian: return "gaussian";
  case OutputKernelFamily::laplace: return "laplace";
  case OutputKernelFamily::box: return "box";
  case OutputKernelFamily::linear: return "linear";
  }
  return "unknown";
}

OutputKernel::OutputKernel(OutputKernelFamily family, double parameter)
    : family_(family), parameter_(parameter) {
  if (!(parameter > 0.0) || !std::isfinite(parameter)) {
    throw ValidationError(std::string(to_string(family)) +
                          " output kernel parameter must be positive and finite");
  }
}

OutputKernel OutputKernel::gaussian(double sigma) {
  return {OutputKernelFamily::gaussian, sigma};
}
OutputKernel OutputKernel::laplace(double sigma) { return {OutputKernelFamily::laplace, sigma}; }
OutputKernel OutputKernel::box(double half_width) {
  return {OutputKernelFamily::box, half_width};
}
OutputKernel OutputKernel::linear(double domain_bound) {
  return {OutputKernelFamily::linear, domain_bound};
}

void OutputKernel::check_domain(double y) const {
  if (!std::isfinite(y)) throw DomainError("output value is not finite");
  if (family_ == OutputKernelFamily::linear && std::abs(y) > parameter_) {
    throw DomainError("output value " + std::to_string(y) + " outside linear kernel domain [-" +
                      std::to_string(parameter_) + ", " + std::to_string(parameter_) + "]");
  }
}

double OutputKernel::eval(double y1, double y2) const {
  switch (family_) {
  case OutputKernelFamily::gaussian: {
    const double diff = y1 - y2;
    return std::exp(-diff * diff / parameter_);
  }
  case OutputKernelFamily::laplace: return std::exp(-std::abs(y1 - y2) / parameter_);
  case OutputKernelFamily::box: return std::abs(y1 - y2) < parameter_ ? 1.0 : 0.0;
  case OutputKernelFamily::linear:
    check_domain(y1);
    check_domain(y2);
    return y1 * y2;
  }
  return 0.0;
}

double OutputKernel::sup_bound() const noexcept {
  return family_ == OutputKernelFamily::linear ? parameter_ * parameter_ : 1.0;
}

} // namespace ckme
