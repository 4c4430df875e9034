#include "ckme/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "ckme/ckme.hpp"
#include "ckme/diagnostics.hpp"
#include "ckme/errors.hpp"
#include "ckme/gaussian_sum.hpp"
#include "ckme/reports.hpp"

namespace ckme {

namespace {

using nlohmann::json;

// Below this many nonzero coefficients the direct double sum is cheaper than
// building a Chebyshev profile.
constexpr std::size_t kProfileMinAtoms = 512;

Embedding nonzero_part(const std::vector<double>& atoms, const std::vector<double>& coeffs) {
  std::vector<double> a;
  std::vector<double> w;
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    if (coeffs[i] != 0.0) {
      a.push_back(atoms[i]);
      w.push_back(coeffs[i]);
    }
  }
  return Embedding(std::move(a), std::move(w));
}

double fast_squared_norm(const Embedding& e, const OutputKernel& k) {
  if (k.family() == OutputKernelFamily::gaussian && e.size() > kProfileMinAtoms) {
    return GaussianSumProfile(e, k.parameter()).squared_norm();
  }
  return squared_norm(e, k);
}

CurveRow evaluate_checkpoint(const ExperimentConfig& cfg, const CkmeState& st,
                             const OracleHandle& oracle, std::uint64_t seed) {
  CurveRow row;
  row.seed = seed;
  row.n = st.count();

  std::vector<double> max_weights;
  std::vector<double> sizes;
  max_weights.reserve(cfg.grid_size);
  sizes.reserve(cfg.grid_size);
  for (std::size_t q = 0; q < cfg.grid_size; ++q) {
    const auto w = st.coefficients(q);
    const auto report = weight_diagnostics(w);
    max_weights.push_back(report.max);
    sizes.push_back(report.effective_size);
  }
  row.max_weight_median = median(std::move(max_weights));
  row.effective_size_median = median(std::move(sizes));

  double total = 0.0;
  for (std::size_t q = cfg.grid_size; q < st.query_count(); ++q) {
    const Embedding e = nonzero_part(st.atoms(), st.coefficients(q));
    total += pointwise_squared_error(e, fast_squared_norm(e, cfg.output_kernel), oracle,
                                     st.grid().points[q]);
  }
  row.l2_error = total / static_cast<double>(cfg.mc_x_draws);
  return row;
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

template <typename T> T parse_field(std::string_view field, std::size_t line) {
  T value{};
  const auto res = std::from_chars(field.data(), field.data() + field.size(), value);
  if (res.ec != std::errc{} || res.ptr != field.data() + field.size()) {
    throw ValidationError("malformed CSV field '" + std::string(field) + "' on line " +
                          std::to_string(line));
  }
  return value;
}

json stats_of(std::vector<double> values) {
  const double q1 = quantile(values, 0.25);
  const double q3 = quantile(values, 0.75);
  return {{"median", median(std::move(values))}, {"q1", q1}, {"q3", q3}, {"iqr", q3 - q1}};
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
  if (!out) throw IoError("failed writing " + path.string());
}

} // namespace

unsigned resolve_thread_count(unsigned requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("CKME_THREADS")) {
    unsigned value = 0;
    const std::string_view s(env);
    const auto res = std::from_chars(s.data(), s.data() + s.size(), value);
    if (res.ec == std::errc{} && res.ptr == s.data() + s.size() && value > 0) return value;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

std::string snapshot_filename(std::uint64_t seed) {
  return "state_seed_" + std::to_string(seed) + ".json";
}

std::vector<CurveRow> run_seed(const ExperimentConfig& cfg, std::uint64_t seed,
                               const RunOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const ConditionalModel model = cfg.model();
  const OracleHandle oracle = cfg.oracle(seed);

  auto grid_rng = make_stream(seed, StreamRole::grid);
  auto held_rng = make_stream(seed, StreamRole::held_out);
  auto train_rng = make_stream(seed, StreamRole::training);

  // Weight diagnostics use the first grid_size queries; the held-out draws
  // behind the error estimate follow them.
  QueryGrid grid;
  grid.points.reserve(cfg.grid_size + cfg.mc_x_draws);
  for (std::size_t i = 0; i < cfg.grid_size; ++i) {
    grid.points.push_back(sample_input(cfg.space, cfg.input_dist, grid_rng));
  }
  for (std::size_t i = 0; i < cfg.mc_x_draws; ++i) {
    grid.points.push_back(sample_input(cfg.space, cfg.input_dist, held_rng));
  }

  const CkmeOptions ckme_options{cfg.truncation};
  std::optional<CkmeState> state;
  if (options.resume_dir) {
    const auto path = *options.resume_dir / snapshot_filename(seed);
    std::ifstream in(path);
    if (!in) throw IoError("cannot read snapshot " + path.string());
    json j;
    try {
      in >> j;
    } catch (const json::exception& e) {
      throw ValidationError("snapshot " + path.string() + " is not valid JSON: " + e.what());
    }
    if (!j.contains("seed") || j.at("seed") != seed || !j.contains("state")) {
      throw ValidationError("snapshot " + path.string() + " does not belong to seed " +
                            std::to_string(seed));
    }
    state.emplace(CkmeState::restore(j.at("state")));
    if (state->grid().points != grid.points || !(state->space() == cfg.space) ||
        !(state->mother() == cfg.mother) || !(state->schedule() == cfg.schedule) ||
        state->options().truncation != cfg.truncation) {
      throw ValidationError("snapshot " + path.string() + " was produced by a different config");
    }
    for (std::uint64_t i = 0; i < state->count(); ++i) (void)model.sample(train_rng);
  } else {
    state.emplace(CkmeState::init(std::move(grid), model.sample(train_rng), cfg.space, cfg.mother,
                                  cfg.schedule, ckme_options));
  }

  std::vector<CurveRow> rows;
  auto record = [&] {
    CurveRow row = evaluate_checkpoint(cfg, *state, oracle, seed);
    if (cfg.record_timing) {
      row.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started)
              .count();
    }
    rows.push_back(row);
  };

  auto next = std::upper_bound(cfg.checkpoints.begin(), cfg.checkpoints.end(),
                               options.resume_dir ? state->count() : 0);
  if (next != cfg.checkpoints.end() && *next == state->count()) {
    record();
    ++next;
  }
  while (next != cfg.checkpoints.end()) {
    state->update(model.sample(train_rng));
    if (state->count() == *next) {
      record();
      ++next;
    }
  }

  if (options.save_state_dir) {
    write_text(*options.save_state_dir / snapshot_filename(seed),
               json{{"seed", seed}, {"state", state->snapshot()}}.dump());
  }
  return rows;
}

ErrorCurve run_experiment(const ExperimentConfig& cfg, const RunOptions& options) {
  if (cfg.seeds.empty()) throw ValidationError("experiment needs at least one seed");
  if (cfg.checkpoints.empty()) throw ValidationError("experiment needs at least one checkpoint");
  validate_schedule(cfg.mother, cfg.schedule, std::max<std::uint64_t>(cfg.horizon(), 2));
  if (options.check_oracle && cfg.oracle_kind == OracleKind::closed_form_gaussian) {
    const json gate = oracle_gate_report(cfg, cfg.gate_pairs, cfg.gate_samples);
    if (!gate.at("passed").get<bool>()) {
      throw OracleIncompatible("closed-form oracle failed its Monte-Carlo agreement gate");
    }
  }

  const std::size_t count = cfg.seeds.size();
  std::vector<std::vector<CurveRow>> results(count);
  std::vector<std::exception_ptr> errors(count);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        results[i] = run_seed(cfg, cfg.seeds[i], options);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };

  const auto threads = static_cast<std::size_t>(resolve_thread_count(options.threads));
  const std::size_t spawn = std::min(threads, count);
  if (spawn <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(spawn);
    for (std::size_t t = 0; t < spawn; ++t) pool.emplace_back(worker);
  }

  ErrorCurve curve;
  for (std::size_t i = 0; i < count; ++i) {
    if (errors[i]) std::rethrow_exception(errors[i]);
    curve.rows.insert(curve.rows.end(), results[i].begin(), results[i].end());
  }
  return curve;
}

std::string format_csv(const ErrorCurve& curve) {
  std::string out = kCsvHeader;
  out += '\n';
  for (const auto& r : curve.rows) {
    out += std::to_string(r.seed);
    out += ',';
    out += std::to_string(r.n);
    out += ',';
    out += format_double(r.l2_error);
    out += ',';
    out += format_double(r.max_weight_median);
    out += ',';
    out += format_double(r.effective_size_median);
    out += ',';
    out += format_double(r.wall_ms);
    out += '\n';
  }
  return out;
}

ErrorCurve parse_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) {
    throw ValidationError("CSV header does not match " + std::string(kCsvHeader));
  }
  ErrorCurve curve;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest(line);
    while (true) {
      const auto comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != 6) {
      throw ValidationError("CSV line " + std::to_string(lineno) + " needs 6 fields");
    }
    CurveRow r;
    r.seed = parse_field<std::uint64_t>(fields[0], lineno);
    r.n = parse_field<std::uint64_t>(fields[1], lineno);
    r.l2_error = parse_field<double>(fields[2], lineno);
    r.max_weight_median = parse_field<double>(fields[3], lineno);
    r.effective_size_median = parse_field<double>(fields[4], lineno);
    r.wall_ms = parse_field<double>(fields[5], lineno);
    curve.rows.push_back(r);
  }
  return curve;
}

void emit_csv(const ErrorCurve& curve, const std::filesystem::path& path) {
  write_text(path, format_csv(curve));
}

double median(std::vector<double> values) {
  if (values.empty()) return 0.0;
  const std::size_t mid = values.size() / 2;
  std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
  const double upper = values[mid];
  if (values.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) return 0.0;
  std::sort(values.begin(), values.end());
  const double pos = q * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

json summarize(const ErrorCurve& curve) {
  std::map<std::uint64_t, std::vector<const CurveRow*>> by_n;
  for (const auto& r : curve.rows) by_n[r.n].push_back(&r);
  json checkpoints = json::array();
  for (const auto& [n, rows] : by_n) {
    std::vector<double> err;
    std::vector<double> maxw;
    std::vector<double> ess;
    for (const auto* r : rows) {
      err.push_back(r->l2_error);
      maxw.push_back(r->max_weight_median);
      ess.push_back(r->effective_size_median);
    }
    checkpoints.push_back({{"n", n},
                           {"seeds", rows.size()},
                           {"l2_error", stats_of(std::move(err))},
                           {"max_weight_median", stats_of(std::move(maxw))},
                           {"effective_size_median", stats_of(std::move(ess))}});
  }
  return {{"checkpoints", std::move(checkpoints)}};
}

void emit_json_summary(const ErrorCurve& curve, const std::filesystem::path& path) {
  write_text(path, summarize(curve).dump(2) + "\n");
}

} // namespace ckme
