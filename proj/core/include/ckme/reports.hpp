#pragma once

#include <cstdint>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/config.hpp"

namespace ckme {

/// Closed-form oracle against Monte-Carlo: per-pair cross terms and norms
/// within 4 standard errors, plus the law of total expectation against joint
/// draws. Member "passed" summarizes; "applicable" is false when the config
/// does not use the closed form.
nlohmann::json oracle_gate_report(const ExperimentConfig& cfg, std::size_t pairs,
                                  std::size_t samples, std::uint64_t seed = 0);

/// Schedule validation, stepsize series, small-ball ratio curves and weight
/// behaviour of the first seed.
nlohmann::json diagnose_report(const ExperimentConfig& cfg, std::size_t reference_sample = 100000,
                               std::size_t curve_points = 5);

struct KmeDemoRow {
  std::uint64_t n = 0;
  double distance = 0.0;
  double bound = 0.0;
};

/// Recursive KME of N(0, 1) outputs under the gaussian kernel, measured
/// against a reference embedding of 100 * n_max draws, at n = 10, 100, ...
/// and n_max.
std::vector<KmeDemoRow> kme_demo(std::uint64_t n_max, double delta, std::uint64_t seed,
                                 double sigma = 1.0);

} // namespace ckme
