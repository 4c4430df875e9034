#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/config.hpp"

namespace ckme {

struct CurveRow {
  std::uint64_t seed = 0;
  std::uint64_t n = 0;
  double l2_error = 0.0;
  double max_weight_median = 0.0;
  double effective_size_median = 0.0;
  double wall_ms = 0.0;
};

/// Rows ordered by seed (in config order) then checkpoint.
struct ErrorCurve {
  std::vector<CurveRow> rows;
};

struct RunOptions {
  /// Worker threads; 0 defers to CKME_THREADS, then to the hardware.
  unsigned threads = 0;
  /// Run the closed-form oracle gate before streaming.
  bool check_oracle = true;
  /// Write one snapshot per seed after its last checkpoint.
  std::optional<std::filesystem::path> save_state_dir;
  /// Continue each seed from its snapshot; only later checkpoints are emitted.
  std::optional<std::filesystem::path> resume_dir;
};

/// CKME_THREADS if set to a positive integer, else hardware concurrency.
unsigned resolve_thread_count(unsigned requested = 0);

/// Streams every seed through the recursive estimator and records the
/// held-out L2 error at each checkpoint. Deterministic given the config,
/// independent of the thread count.
ErrorCurve run_experiment(const ExperimentConfig& cfg, const RunOptions& options = {});

/// One seed of run_experiment.
std::vector<CurveRow> run_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                               const RunOptions& options = {});

inline constexpr const char* kCsvHeader =
    "seed,n,l2_error,max_weight_median,effective_size_median,wall_ms";

std::string format_csv(const ErrorCurve& curve);
/// Inverse of format_csv; throws ValidationError on malformed input.
ErrorCurve parse_csv(const std::string& text);
void emit_csv(const ErrorCurve& curve, const std::filesystem::path& path);

/// Per-checkpoint medians and quartiles over seeds.
nlohmann::json summarize(const ErrorCurve& curve);
void emit_json_summary(const ErrorCurve& curve, const std::filesystem::path& path);

/// Median of a copy of `values` (mean of the middle pair for even sizes).
double median(std::vector<double> values);
/// Linear-interpolated quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

std::string snapshot_filename(std::uint64_t seed);

} // namespace ckme
