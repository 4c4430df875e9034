#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string_view>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/metric_space.hpp"
#include "ckme/oracle.hpp"
#include "ckme/output_kernel.hpp"
#include "ckme/schedules.hpp"

namespace ckme {

inline constexpr std::string_view kConfigSchema = "ckme-experiment/1";

/// One consistency experiment. Parsed from a single JSON document whose
/// "schema" member must equal kConfigSchema; unknown members are rejected.
struct ExperimentConfig {
  MetricSpace space = MetricSpace::euclidean(1);
  InputDistribution input_dist;
  MeanFunction mean;
  Noise noise;
  OutputKernel output_kernel = OutputKernel::gaussian(1.0);
  MotherSmoother mother = MotherSmoother::box(1.0);
  RateSchedule schedule{0.5, 1, 1.0};

  std::size_t grid_size = 64;
  std::vector<std::uint64_t> checkpoints;
  std::size_t mc_x_draws = 200;

  OracleKind oracle_kind = OracleKind::closed_form_gaussian;
  std::size_t oracle_samples = 2000;
  std::size_t gate_pairs = 50;
  std::size_t gate_samples = 100000;

  std::vector<std::uint64_t> seeds;
  std::filesystem::path output_dir = "ckme-output";
  double truncation = 0.0;
  /// When false the wall_ms column is written as 0 so reruns are byte-identical.
  bool record_timing = false;

  ConditionalModel model() const;
  /// Oracle for one seed; Monte-Carlo draws come from that seed's oracle stream.
  OracleHandle oracle(std::uint64_t seed) const;
  std::uint64_t horizon() const { return checkpoints.empty() ? 1 : checkpoints.back(); }
};

/// Throws ValidationError naming the offending member.
ExperimentConfig parse_config(const nlohmann::json& j);

/// Throws IoError when the file cannot be read, ValidationError when it does
/// not parse or validate.
ExperimentConfig load_config(const std::filesystem::path& path);

nlohmann::json config_to_json(const ExperimentConfig& cfg);

} // namespace ckme
