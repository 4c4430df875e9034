#include "ckme/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ckme/errors.hpp"

namespace ckme {

double small_ball_estimate(std::span<const InputPoint> sample, const InputPoint& x, double radius,
                           const MetricSpace& space) {
  if (sample.empty()) throw ValidationError("small-ball estimate needs a nonempty sample");
  std::size_t inside = 0;
  for (const auto& p : sample) {
    if (space.distance(x, p) < radius) ++inside;
  }
  return static_cast<double>(inside) / static_cast<double>(sample.size());
}

std::vector<SmallBallPoint> small_ball_ratio_curve(std::span<const InputPoint> sample,
                                                   const InputPoint& x,
                                                   const RateSchedule& schedule,
                                                   const MotherSmoother& mother,
                                                   const MetricSpace& space,
                                                   std::span<const std::uint64_t> ns,
                                                   double floor) {
  if (sample.empty()) throw ValidationError("small-ball curve needs a nonempty sample");
  if (!std::is_sorted(ns.begin(), ns.end()) ||
      std::adjacent_find(ns.begin(), ns.end()) != ns.end()) {
    throw ValidationError("small-ball curve needs strictly increasing n values");
  }
  // Distances are computed once; each n only moves the radius.
  std::vector<double> dist(sample.size());
  for (std::size_t i = 0; i < sample.size(); ++i) dist[i] = space.distance(x, sample[i]);
  std::sort(dist.begin(), dist.end());

  std::vector<SmallBallPoint> curve;
  curve.reserve(ns.size());
  for (std::uint64_t n : ns) {
    if (n == 0) throw ValidationError("n must be positive");
    const auto rates = schedule.at(n);
    const double radius = mother.lower_radius() * rates.h;
    const auto inside = std::lower_bound(dist.begin(), dist.end(), radius) - dist.begin();
    const double mass = static_cast<double>(inside) / static_cast<double>(dist.size());
    SmallBallPoint p{n, radius, mass / rates.r, false};
    p.flagged = p.ratio < floor;
    curve.push_back(p);
  }
  return curve;
}

WeightReport weight_diagnostics(std::span<const double> weights) {
  WeightReport r;
  double sq = 0.0;
  for (double w : weights) {
    r.sum += w;
    r.max = std::max(r.max, w);
    sq += w * w;
  }
  r.effective_size = sq > 0.0 ? 1.0 / sq : 0.0;
  return r;
}

StepsizeSeries stepsize_series(const RateSchedule& schedule, std::uint64_t N) {
  if (N == 0) throw ValidationError("stepsize series needs N >= 1");
  StepsizeSeries s;
  s.terms = N;
  for (std::uint64_t n = 1; n <= N; ++n) {
    const auto rates = schedule.at(n);
    s.sum_a += rates.a;
    s.sum_a2_over_r2 += (rates.a * rates.a) / (rates.r * rates.r);
  }
  s.tail_exponent = 1.0 + schedule.epsilon();
  return s;
}

void to_json(nlohmann::json& j, const SmallBallPoint& p) {
  j = nlohmann::json{{"n", p.n}, {"radius", p.radius}, {"ratio", p.ratio}, {"flagged", p.flagged}};
}

void to_json(nlohmann::json& j, const WeightReport& r) {
  j = nlohmann::json{{"sum", r.sum}, {"max", r.max}, {"effective_size", r.effective_size}};
}

void to_json(nlohmann::json& j, const StepsizeSeries& s) {
  j = nlohmann::json{{"terms", s.terms},
                     {"sum_a", s.sum_a},
                     {"sum_a2_over_r2", s.sum_a2_over_r2},
                     {"sum_a_tail", "divergent_harmonic"},
                     {"sum_a2_over_r2_tail", "convergent_power"},
                     {"tail_exponent", s.tail_exponent}};
}

} // namespace ckme
