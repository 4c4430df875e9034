#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "ckme/embedding.hpp"
#include "ckme/metric_space.hpp"
#include "ckme/output_kernel.hpp"
#include "ckme/schedules.hpp"

namespace ckme {

class OracleHandle;

/// Evaluation sites of the streaming estimator, fixed before streaming.
struct QueryGrid {
  std::vector<InputPoint> points;
};

struct Observation {
  InputPoint x;
  double y = 0.0;
};

struct CkmeOptions {
  /// Coefficients below this value are dropped and the rest renormalized.
  /// 0 disables truncation; any positive value leaves the exact estimator.
  double truncation = 0.0;
};

/// Streaming recursive estimator of the conditional mean embedding at a fixed
/// set of query points:
///
///   mu_1(x)     = l(., Y_1)
///   mu_{n+1}(x) = (1 - g) mu_n(x) + g l(., Y_{n+1}),  g = a_{n+1} k_{n+1}(x, X_{n+1})
///
/// Output atoms are shared across queries; each query owns a coefficient
/// vector over them. An observation with g == 0 at every query leaves the
/// state untouched apart from the count and appends no atom.
///
/// Coefficients are held as stored[i] * scale so an update costs O(1) per
/// query instead of rescaling the whole history.
class CkmeState {
public:
  /// Throws ValidationError on an empty grid or invalid points.
  static CkmeState init(QueryGrid grid, const Observation& first, MetricSpace space,
                        MotherSmoother mother, RateSchedule schedule, CkmeOptions options = {});

  /// Absorbs observation n+1 using k_{n+1} and a_{n+1}.
  void update(const Observation& obs);

  /// Applies one update with caller-supplied gains (one per query). Throws
  /// InvariantViolation when a gain lies outside [0, 1].
  void update_with_gains(std::span<const double> gains, double y);

  std::uint64_t count() const noexcept { return count_; }
  std::size_t query_count() const noexcept { return queries_.size(); }
  std::size_t atom_count() const noexcept { return atoms_.size(); }

  const QueryGrid& grid() const noexcept { return grid_; }
  const std::vector<double>& atoms() const noexcept { return atoms_; }
  /// 1-based observation index of each stored atom.
  const std::vector<std::uint64_t>& observation_indices() const noexcept { return obs_index_; }

  const MetricSpace& space() const noexcept { return space_; }
  const MotherSmoother& mother() const noexcept { return mother_; }
  const RateSchedule& schedule() const noexcept { return schedule_; }
  const CkmeOptions& options() const noexcept { return options_; }

  /// W_{n,i}(x_q) over the stored atoms. Throws std::out_of_range.
  std::vector<double> coefficients(std::size_t q) const;

  /// mu_n(x_q) as an embedding. Throws std::out_of_range.
  Embedding evaluate_at(std::size_t q) const;

  /// Checkpoint including the lazy scale factors, so a restored state
  /// continues bit-for-bit.
  nlohmann::json snapshot() const;
  static CkmeState restore(const nlohmann::json& j);

private:
  struct QueryCoefficients {
    std::vector<double> stored;
    double scale = 1.0;
  };

  CkmeState(QueryGrid grid, MetricSpace space, MotherSmoother mother, RateSchedule schedule,
            CkmeOptions options);

  void apply(std::span<const double> gains, double y, std::uint64_t index);
  void truncate(QueryCoefficients& c) const;

  QueryGrid grid_;
  MetricSpace space_;
  MotherSmoother mother_;
  RateSchedule schedule_;
  CkmeOptions options_;

  std::vector<double> atoms_;
  std::vector<std::uint64_t> obs_index_;
  std::vector<QueryCoefficients> queries_;
  std::uint64_t count_ = 0;
  std::vector<double> gain_buffer_;
};

/// Local-averaging weights W_{n,i}(x) for a retained sample, by the product
/// form W_{n,i} = prod_{l>i} (1 - g_l) * g_i with g_1 = 1, computed in one
/// backward pass. The result has one entry per sample element.
std::vector<double> batch_weights(std::span<const Observation> sample, const InputPoint& x,
                                  const RateSchedule& schedule, const MotherSmoother& mother,
                                  const MetricSpace& space);

/// ||mu(x) - mu_*(x)||^2 given the estimate's squared norm (lets callers use
/// cached Gram matrices). Clamped at 0.
double pointwise_squared_error(const Embedding& estimate, double estimate_norm_sq,
                               const OracleHandle& oracle, const InputPoint& x);

/// Monte-Carlo L2(Q_X) error (1/M) sum_m ||mu(x_m) - mu_*(x_m)||^2 over
/// held-out draws. Throws OracleIncompatible when `k` is not the oracle's kernel.
double l2_error_mc(const std::function<Embedding(const InputPoint&)>& evaluator,
                   const OracleHandle& oracle, std::span<const InputPoint> x_draws,
                   const OutputKernel& k);

} // namespace ckme
