#pragma once

// Independent reference computations shared by the unit suites. Nothing here
// calls into the library under test.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/multiprecision/cpp_bin_float.hpp>

namespace ckme_test {

using hp = boost::multiprecision::cpp_bin_float_50;

inline double hp_exp(double x) { return static_cast<double>(boost::multiprecision::exp(hp(x))); }

/// ||f - g||_2 for translate sums f = sum lambda_i psi(. - x_i) with the
/// Gaussian bump psi(t) = exp(-t^2 / (2 s^2)), by adaptive quadrature.
/// Parameters are laid out as [lambda_1..lambda_m, x_1..x_m].
inline double translate_sum_distance_quadrature(const std::vector<double>& a,
                                                const std::vector<double>& b, double s) {
  const std::size_t m = a.size() / 2;
  auto f = [&](double t) {
    double v = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      v += a[i] * std::exp(-(t - a[m + i]) * (t - a[m + i]) / (2 * s * s));
      v -= b[i] * std::exp(-(t - b[m + i]) * (t - b[m + i]) / (2 * s * s));
    }
    return v * v;
  };
  double lo = 0.0, hi = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    lo = std::min({lo, a[m + i], b[m + i]});
    hi = std::max({hi, a[m + i], b[m + i]});
  }
  lo -= 14 * s;
  hi += 14 * s;
  // Split at a unit spacing so every panel sees a smooth, resolved integrand.
  double total = 0.0;
  const int panels = static_cast<int>(std::ceil((hi - lo) / s));
  const double w = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo + k * w, lo + (k + 1) * w, 10, 1e-14);
  }
  return std::sqrt(total);
}

/// <psi, psi(. - u)> by quadrature.
inline double bump_overlap_quadrature(double s, double u) {
  auto f = [&](double t) { return std::exp(-t * t / (2 * s * s)) * std::exp(-(t - u) * (t - u) / (2 * s * s)); };
  const double lo = std::min(0.0, u) - 14 * s;
  const double hi = std::max(0.0, u) + 14 * s;
  double total = 0.0;
  const int panels = 32;
  const double w = (hi - lo) / panels;
  for (int k = 0; k < panels; ++k) {
    total += boost::math::quadrature::gauss_kronrod<double, 61>::integrate(
        f, lo + k * w, lo + (k + 1) * w, 10, 1e-14);
  }
  return total;
}

/// Brute-force double sum with long double accumulation.
template <class Kernel>
double brute_inner(const std::vector<double>& ya, const std::vector<double>& wa,
                   const std::vector<double>& yb, const std::vector<double>& wb, Kernel k) {
  long double acc = 0.0L;
  for (std::size_t i = 0; i < ya.size(); ++i) {
    for (std::size_t j = 0; j < yb.size(); ++j) {
      acc += static_cast<long double>(wa[i]) * wb[j] * k(ya[i], yb[j]);
    }
  }
  return static_cast<double>(acc);
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  std::vector<double> v(n);
  for (auto& x : v) x = u(rng);
  return v;
}

} // namespace ckme_test
