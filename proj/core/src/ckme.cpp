#include "ckme/ckme.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include "ckme/errors.hpp"
#include "ckme/oracle.hpp"
#include "ckme/serialization.hpp"

namespace ckme {

namespace {

// Lazy scales below this are folded back into the stored coefficients.
constexpr double kRescaleThreshold = 1e-200;

} // namespace

CkmeState::CkmeState(QueryGrid grid, MetricSpace space, MotherSmoother mother,
                     RateSchedule schedule, CkmeOptions options)
    : grid_(std::move(grid)), space_(space), mother_(mother), schedule_(schedule),
      options_(options) {
  if (grid_.points.empty()) throw ValidationError("query grid must not be empty");
  for (const auto& x : grid_.points) space_.validate(x);
  if (!(options_.truncation >= 0.0 && options_.truncation < 1.0)) {
    throw ValidationError("truncation threshold must lie in [0, 1)");
  }
  if (schedule_.dimension() != space_.intrinsic_dimension()) {
    throw ValidationError("schedule dimension " + std::to_string(schedule_.dimension()) +
                          " does not match the space's intrinsic dimension " +
                          std::to_string(space_.intrinsic_dimension()));
  }
  queries_.resize(grid_.points.size());
  gain_buffer_.resize(grid_.points.size());
}

CkmeState CkmeState::init(QueryGrid grid, const Observation& first, MetricSpace space,
                          MotherSmoother mother, RateSchedule schedule, CkmeOptions options) {
  CkmeState st(std::move(grid), space, mother, schedule, options);
  st.space_.validate(first.x);
  st.atoms_.push_back(first.y);
  st.obs_index_.push_back(1);
  for (auto& q : st.queries_) {
    q.stored.assign(1, 1.0);
    q.scale = 1.0;
  }
  st.count_ = 1;
  return st;
}

void CkmeState::update(const Observation& obs) {
  space_.validate(obs.x);
  const std::uint64_t index = count_ + 1;
  const auto rates = schedule_.at(index);
  for (std::size_t q = 0; q < grid_.points.size(); ++q) {
    gain_buffer_[q] = update_gain(mother_, rates, space_.distance(grid_.points[q], obs.x));
  }
  apply(gain_buffer_, obs.y, index);
}

void CkmeState::update_with_gains(std::span<const double> gains, double y) {
  if (gains.size() != queries_.size()) {
    throw ValidationError("expected one gain per query point");
  }
  apply(gains, y, count_ + 1);
}

void CkmeState::apply(std::span<const double> gains, double y, std::uint64_t index) {
  if (count_ == 0) throw InvariantViolation("update on an uninitialized state");
  bool any = false;
  for (double g : gains) {
    if (!(g >= 0.0 && g <= 1.0)) {
      throw InvariantViolation("update weight a_n k_n = " + std::to_string(g) +
                               " outside [0, 1] at n = " + std::to_string(index));
    }
    any = any || g > 0.0;
  }
  count_ = index;
  if (!any) return;

  atoms_.push_back(y);
  obs_index_.push_back(index);
  for (std::size_t q = 0; q < queries_.size(); ++q) {
    auto& c = queries_[q];
    const double g = gains[q];
    if (g == 0.0) {
      c.stored.push_back(0.0);
      continue;
    }
    if (g == 1.0) {
      std::fill(c.stored.begin(), c.stored.end(), 0.0);
      c.stored.push_back(1.0);
      c.scale = 1.0;
      continue;
    }
    c.scale *= (1.0 - g);
    c.stored.push_back(g / c.scale);
    if (c.scale < kRescaleThreshold) {
      for (double& v : c.stored) v *= c.scale;
      c.scale = 1.0;
    }
    if (options_.truncation > 0.0) truncate(c);
  }
}

void CkmeState::truncate(QueryCoefficients& c) const {
  double kept = 0.0;
  for (double& v : c.stored) {
    if (v * c.scale < options_.truncation) {
      v = 0.0;
    } else {
      kept += v;
    }
  }
  if (kept > 0.0) {
    for (double& v : c.stored) v /= kept;
    c.scale = 1.0;
  }
}

std::vector<double> CkmeState::coefficients(std::size_t q) const {
  const auto& c = queries_.at(q);
  std::vector<double> out(c.stored.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = c.stored[i] * c.scale;
  return out;
}

Embedding CkmeState::evaluate_at(std::size_t q) const { return Embedding(atoms_, coefficients(q)); }

nlohmann::json CkmeState::snapshot() const {
  nlohmann::json queries = nlohmann::json::array();
  for (const auto& c : queries_) queries.push_back({{"stored", c.stored}, {"scale", c.scale}});
  nlohmann::json grid = nlohmann::json::array();
  for (const auto& x : grid_.points) grid.push_back(json_io::write(x));
  return {{"n", count_},
          {"atoms", atoms_},
          {"observation_indices", obs_index_},
          {"queries", std::move(queries)},
          {"grid", std::move(grid)},
          {"space", json_io::write(space_)},
          {"mother", json_io::write(mother_)},
          {"schedule", json_io::write(schedule_)},
          {"truncation", options_.truncation}};
}

CkmeState CkmeState::restore(const nlohmann::json& j) {
  using namespace json_io;
  require_keys(j,
               {"n", "atoms", "observation_indices", "queries", "grid", "space", "mother",
                "schedule", "truncation"},
               "snapshot");
  try {
    const MetricSpace space = read_space(j.at("space"), "snapshot.space");
    QueryGrid grid;
    for (const auto& p : j.at("grid")) grid.points.push_back(read_point(p, "snapshot.grid"));
    CkmeState st(std::move(grid), space, read_mother(j.at("mother"), "snapshot.mother"),
                 read_schedule(j.at("schedule"), space.intrinsic_dimension(), "snapshot.schedule"),
                 CkmeOptions{j.at("truncation").get<double>()});
    st.count_ = j.at("n").get<std::uint64_t>();
    st.atoms_ = j.at("atoms").get<std::vector<double>>();
    st.obs_index_ = j.at("observation_indices").get<std::vector<std::uint64_t>>();
    const auto& qs = j.at("queries");
    if (qs.size() != st.queries_.size() || st.obs_index_.size() != st.atoms_.size() ||
        st.count_ == 0 || st.atoms_.empty()) {
      throw ValidationError("snapshot sizes are inconsistent");
    }
    for (std::size_t q = 0; q < qs.size(); ++q) {
      st.queries_[q].stored = qs[q].at("stored").get<std::vector<double>>();
      st.queries_[q].scale = qs[q].at("scale").get<double>();
      if (st.queries_[q].stored.size() != st.atoms_.size()) {
        throw ValidationError("snapshot coefficient vector length differs from atom count");
      }
    }
    return st;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError(std::string("malformed snapshot: ") + e.what());
  }
}

std::vector<double> batch_weights(std::span<const Observation> sample, const InputPoint& x,
                                  const RateSchedule& schedule, const MotherSmoother& mother,
                                  const MetricSpace& space) {
  if (sample.empty()) throw ValidationError("batch_weights needs a nonempty sample");
  space.validate(x);
  const std::size_t n = sample.size();
  std::vector<double> gains(n);
  gains[0] = 1.0;
  for (std::size_t i = 1; i < n; ++i) {
    const auto rates = schedule.at(i + 1);
    gains[i] = update_gain(mother, rates, space.distance(x, sample[i].x));
  }
  std::vector<double> weights(n);
  double suffix = 1.0;
  for (std::size_t i = n; i-- > 0;) {
    weights[i] = suffix * gains[i];
    suffix *= (1.0 - gains[i]);
  }
  return weights;
}

double pointwise_squared_error(const Embedding& estimate, double estimate_norm_sq,
                               const OracleHandle& oracle, const InputPoint& x) {
  const double value =
      estimate_norm_sq - 2.0 * oracle.cross(x, estimate) + oracle.norm_sq(x);
  return std::max(value, 0.0);
}

double l2_error_mc(const std::function<Embedding(const InputPoint&)>& evaluator,
                   const OracleHandle& oracle, std::span<const InputPoint> x_draws,
                   const OutputKernel& k) {
  if (!(k == oracle.kernel())) {
    throw OracleIncompatible("oracle was built for a different output kernel");
  }
  if (x_draws.empty()) throw ValidationError("l2_error_mc needs at least one input draw");
  double total = 0.0;
  for (const auto& x : x_draws) {
    const Embedding e = evaluator(x);
    total += pointwise_squared_error(e, squared_norm(e, k), oracle, x);
  }
  return total / static_cast<double>(x_draws.size());
}

} // namespace ckme
