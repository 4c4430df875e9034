#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/metric_space.hpp"
#include "ckme/schedules.hpp"

namespace ckme {

/// Fraction of `sample` strictly within `radius` of x.
double small_ball_estimate(std::span<const InputPoint> sample, const InputPoint& x, double radius,
                           const MetricSpace& space);

struct SmallBallPoint {
  std::uint64_t n = 0;
  double radius = 0.0;
  double ratio = 0.0;
  bool flagged = false;
};

/// Q_hat(B(x, R h_n)) / r_n along `ns`, with R the smoother's lower-box
/// radius. Ratios below `floor` are flagged as possible small-ball failures.
std::vector<SmallBallPoint> small_ball_ratio_curve(std::span<const InputPoint> sample,
                                                   const InputPoint& x,
                                                   const RateSchedule& schedule,
                                                   const MotherSmoother& mother,
                                                   const MetricSpace& space,
                                                   std::span<const std::uint64_t> ns,
                                                   double floor = 0.01);

struct WeightReport {
  double sum = 0.0;
  double max = 0.0;
  /// 1 / sum w^2
  double effective_size = 0.0;
};

WeightReport weight_diagnostics(std::span<const double> weights);

enum class SeriesBehaviour { divergent_harmonic, convergent_power };

struct StepsizeSeries {
  std::uint64_t terms = 0;
  double sum_a = 0.0;
  double sum_a2_over_r2 = 0.0;
  SeriesBehaviour sum_a_tail = SeriesBehaviour::divergent_harmonic;
  SeriesBehaviour sum_a2_over_r2_tail = SeriesBehaviour::convergent_power;
  /// Exponent q of the a_n^2 / r_n^2 ~ n^(-q) tail.
  double tail_exponent = 0.0;
};

StepsizeSeries stepsize_series(const RateSchedule& schedule, std::uint64_t N);

void to_json(nlohmann::json& j, const SmallBallPoint& p);
void to_json(nlohmann::json& j, const WeightReport& r);
void to_json(nlohmann::json& j, const StepsizeSeries& s);

} // namespace ckme
