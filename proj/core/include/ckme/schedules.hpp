#pragma once

#include <cstdint>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

namespace ckme {

/// Learning-rate triple a_n = a_scale / n, r_n = n^(-(1-eps)/2), h_n = r_n^(1/p).
///
/// a_scale is not capped at 1: `validate_schedule` is what rejects a scale
/// whose update weights could reach 1.
class RateSchedule {
public:
  struct Rates {
    double a;
    double r;
    double h;
  };

  /// Throws ScheduleRejected("epsilon_range" / "dimension" / "a_scale_range").
  RateSchedule(double epsilon, int p, double a_scale = 1.0);

  double epsilon() const noexcept { return epsilon_; }
  int dimension() const noexcept { return p_; }
  double a_scale() const noexcept { return a_scale_; }

  Rates at(std::uint64_t n) const;
  double step(std::uint64_t n) const { return a_scale_ / static_cast<double>(n); }

  bool operator==(const RateSchedule&) const = default;

private:
  double epsilon_;
  int p_;
  double a_scale_;
};

enum class SmootherFamily { box, gaussian, laplace, epanechnikov };

std::string_view to_string(SmootherFamily family);

/// Mother smoother K: R -> [0, 1] together with its lower-box constants (b, R)
/// such that K(t) >= b * 1(|t| < R). The majorant H is K restricted to
/// [0, inf), which is nonincreasing for every built-in family.
///
///   box(B)          1(|t| < B)                  (b, R) = (1, B)
///   gaussian(s)     exp(-t^2 / s)               (b, R) = (exp(-R^2 / s), R)
///   laplace(s)      exp(-|t| / s)               (b, R) = (exp(-R / s), R)
///   epanechnikov    3/4 (1 - t^2) 1(|t| < 1)    (b, R) = (3/8, 1/2)
class MotherSmoother {
public:
  static MotherSmoother box(double half_width);
  static MotherSmoother gaussian(double sigma, double radius = 1.0);
  static MotherSmoother laplace(double sigma, double radius = 1.0);
  static MotherSmoother epanechnikov();

  SmootherFamily family() const noexcept { return family_; }
  /// B or sigma; 0 for epanechnikov.
  double parameter() const noexcept { return parameter_; }
  double lower_level() const noexcept { return b_; }
  double lower_radius() const noexcept { return radius_; }
  double sup() const noexcept;

  double operator()(double t) const;
  double majorant(double s) const;

  bool operator==(const MotherSmoother&) const = default;

private:
  MotherSmoother(SmootherFamily family, double parameter, double b, double radius);
  void verify_lower_box() const;

  SmootherFamily family_;
  double parameter_;
  double b_;
  double radius_;
};

/// k_n at distance d: K(d / h_n) / r_n.
double smoother_eval(const MotherSmoother& m, const RateSchedule& s, std::uint64_t n, double d);

/// Additive weight a_n k_n(x, z) applied by the n-th update.
double update_gain(const MotherSmoother& m, const RateSchedule& s, std::uint64_t n, double d);

/// Same value with the rates of step n precomputed.
inline double update_gain(const MotherSmoother& m, const RateSchedule::Rates& rates, double d) {
  return rates.a * (m(d / rates.h) / rates.r);
}

struct ValidationReport {
  std::uint64_t horizon = 0;
  double sum_a = 0.0;
  double sum_a2_over_r2 = 0.0;
  /// Upper bound on the remaining tail sum_{n > horizon} a_n^2 / r_n^2.
  double tail_bound = 0.0;
  /// sup K * max_{2 <= n <= horizon} a_n / r_n.
  double sup_ratio = 0.0;
  bool accepted = false;
};

/// Checks the stepsize series and the strict update-weight bound over
/// n >= 2 (the first observation initializes the state, so a_1 is never
/// applied). Throws ScheduleRejected naming the failing condition.
ValidationReport validate_schedule(const MotherSmoother& m, const RateSchedule& s,
                                   std::uint64_t horizon);

void to_json(nlohmann::json& j, const ValidationReport& r);

} // namespace ckme
