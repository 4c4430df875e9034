#include "ckme/schedules.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <nlohmann/json.hpp>

#include "ckme/errors.hpp"

namespace ckme {

RateSchedule::RateSchedule(double epsilon, int p, double a_scale)
    : epsilon_(epsilon), p_(p), a_scale_(a_scale) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw ScheduleRejected("epsilon_range", "epsilon must lie in (0, 1), got " +
                                                std::to_string(epsilon));
  }
  if (p < 1) throw ScheduleRejected("dimension", "intrinsic dimension must be positive");
  if (!(a_scale > 0.0) || !std::isfinite(a_scale)) {
    throw ScheduleRejected("a_scale_range", "a_scale must be positive and finite");
  }
}

RateSchedule::Rates RateSchedule::at(std::uint64_t n) const {
  const auto nd = static_cast<double>(n);
  const double r = std::pow(nd, -(1.0 - epsilon_) / 2.0);
  const double h = p_ == 1 ? r : std::pow(r, 1.0 / static_cast<double>(p_));
  return {a_scale_ / nd, r, h};
}

std::string_view to_string(SmootherFamily family) {
  switch (family) {
  case SmootherFamily::box: return "box";
  case SmootherFamily::gaussian: return "gaussian";
  case SmootherFamily::laplace: return "laplace";
  case SmootherFamily::epanechnikov: return "epanechnikov";
  }
  return "unknown";
}

MotherSmoother::MotherSmoother(SmootherFamily family, double parameter, double b, double radius)
    : family_(family), parameter_(parameter), b_(b), radius_(radius) {
  verify_lower_box();
}

MotherSmoother MotherSmoother::box(double half_width) {
  if (!(half_width > 0.0)) throw ValidationError("box smoother half-width must be positive");
  return {SmootherFamily::box, half_width, 1.0, half_width};
}

MotherSmoother MotherSmoother::gaussian(double sigma, double radius) {
  if (!(sigma > 0.0) || !(radius > 0.0)) {
    throw ValidationError("gaussian smoother needs positive sigma and radius");
  }
  return {SmootherFamily::gaussian, sigma, std::exp(-radius * radius / sigma), radius};
}

MotherSmoother MotherSmoother::laplace(double sigma, double radius) {
  if (!(sigma > 0.0) || !(radius > 0.0)) {
    throw ValidationError("laplace smoother needs positive sigma and radius");
  }
  return {SmootherFamily::laplace, sigma, std::exp(-radius / sigma), radius};
}

MotherSmoother MotherSmoother::epanechnikov() {
  return {SmootherFamily::epanechnikov, 0.0, 3.0 / 8.0, 0.5};
}

double MotherSmoother::sup() const noexcept {
  return family_ == SmootherFamily::epanechnikov ? 0.75 : 1.0;
}

double MotherSmoother::operator()(double t) const {
  const double a = std::abs(t);
  switch (family_) {
  case SmootherFamily::box: return a < parameter_ ? 1.0 : 0.0;
  case SmootherFamily::gaussian: return std::exp(-t * t / parameter_);
  case SmootherFamily::laplace: return std::exp(-a / parameter_);
  case SmootherFamily::epanechnikov: return a < 1.0 ? 0.75 * (1.0 - t * t) : 0.0;
  }
  return 0.0;
}

double MotherSmoother::majorant(double s) const { return (*this)(std::max(s, 0.0)); }

void MotherSmoother::verify_lower_box() const {
  constexpr int kGrid = 10000;
  for (int i = 0; i <= kGrid; ++i) {
    const double t = -2.0 * radius_ + 4.0 * radius_ * i / kGrid;
    const double floor = std::abs(t) < radius_ ? b_ : 0.0;
    if ((*this)(t) < floor) {
      throw ScheduleRejected("lower_box", "K(" + std::to_string(t) + ") falls below b on |t| < R");
    }
  }
}

double smoother_eval(const MotherSmoother& m, const RateSchedule& s, std::uint64_t n, double d) {
  const auto rates = s.at(n);
  return m(d / rates.h) / rates.r;
}

double update_gain(const MotherSmoother& m, const RateSchedule& s, std::uint64_t n, double d) {
  return update_gain(m, s.at(n), d);
}

ValidationReport validate_schedule(const MotherSmoother& m, const RateSchedule& s,
                                   std::uint64_t horizon) {
  if (horizon < 2) throw ValidationError("validation horizon must be at least 2");
  ValidationReport report;
  report.horizon = horizon;
  double max_ratio = 0.0;
  for (std::uint64_t n = 1; n <= horizon; ++n) {
    const auto rates = s.at(n);
    report.sum_a += rates.a;
    report.sum_a2_over_r2 += (rates.a * rates.a) / (rates.r * rates.r);
    if (n >= 2) max_ratio = std::max(max_ratio, rates.a / rates.r);
  }
  // a_n^2 / r_n^2 = a_scale^2 n^-(1+eps); the tail beyond N is at most
  // a_scale^2 N^-eps / eps.
  const double eps = s.epsilon();
  report.tail_bound =
      s.a_scale() * s.a_scale() * std::pow(static_cast<double>(horizon), -eps) / eps;
  report.sup_ratio = m.sup() * max_ratio;

  if (!std::isfinite(report.tail_bound)) {
    throw ScheduleRejected("stepsize_series", "sum of a_n^2 / r_n^2 does not converge");
  }
  if (!(report.sup_ratio < 1.0)) {
    std::ostringstream os;
    os.precision(12);
    os << "sup K * sup_{n>=2} a_n / r_n = " << report.sup_ratio << " is not below 1";
    throw ScheduleRejected("update_weight_bound", os.str());
  }
  report.accepted = true;
  return report;
}

void to_json(nlohmann::json& j, const ValidationReport& r) {
  j = nlohmann::json{{"horizon", r.horizon},
                     {"sum_a", r.sum_a},
                     {"sum_a2_over_r2", r.sum_a2_over_r2},
                     {"tail_bound", r.tail_bound},
                     {"sup_ratio", r.sup_ratio},
                     {"accepted", r.accepted}};
}

} // namespace ckme
