// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <numeric>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "ckme/ckme.hpp"
#include "ckme/config.hpp"
#include "ckme/errors.hpp"
#include "ckme/experiment.hpp"
#include "ckme/gaussian_sum.hpp"
#include "ckme/kme.hpp"
#include "ckme/oracle.hpp"
#include "ckme/reports.hpp"
#include "ckme/schedules.hpp"
#include "cli.hpp"

using namespace ckme;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool passed;
  std::string detail;
};

fs::path config_path(const char* name) { return fs::path(CKME_CONFIG_DIR) / name; }

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(double v, int digits = 6) {
  std::ostringstream s;
  s.precision(digits);
  s << v;
  return s.str();
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

/// Medians over seeds of the l2 error, keyed by checkpoint.
std::map<std::uint64_t, double> median_errors(const ErrorCurve& curve) {
  std::map<std::uint64_t, std::vector<double>> by_n;
  for (const auto& r : curve.rows) by_n[r.n].push_back(r.l2_error);
  std::map<std::uint64_t, double> out;
  for (auto& [n, v] : by_n) out[n] = median(v);
  return out;
}

std::string describe(const std::map<std::uint64_t, double>& m) {
  std::string s;
  for (const auto& [n, v] : m) s += (s.empty() ? "" : ", ") + std::to_string(n) + ":" + fmt(v, 4);
  return s;
}

/// RKHS norm of a - b after merging coincident atoms, so identical measures
/// listed in different orders cancel exactly instead of through round-off.
double canonical_distance(const Embedding& a, const Embedding& b, const OutputKernel& k) {
  std::map<double, long double> w;
  for (std::size_t i = 0; i < a.size(); ++i) w[a.atoms()[i]] += a.weights()[i];
  for (std::size_t i = 0; i < b.size(); ++i) w[b.atoms()[i]] -= b.weights()[i];
  std::vector<double> atoms, weights;
  for (const auto& [y, v] : w) {
    atoms.push_back(y);
    weights.push_back(static_cast<double>(v));
  }
  return std::sqrt(std::max(0.0, squared_norm(Embedding(atoms, weights), k)));
}

// 1. Deviation bound for the recursive KME against a large reference sample.
Outcome kme_deviation_gate() {
  const auto t0 = Clock::now();
  const std::size_t n = 1000, seeds = 500, reference = 100000;
  const double delta = 0.05;
  const auto k = OutputKernel::gaussian(1.0);
  const double bound = kme_deviation_bound(k.sup_bound(), n, delta);

  auto ref_rng = make_stream(0x5eed, StreamRole::oracle);
  std::vector<double> ref_atoms(reference);
  for (auto& y : ref_atoms) y = standard_normal(ref_rng);
  const Embedding ref(ref_atoms, std::vector<double>(reference, 1.0 / reference));
  const GaussianSumProfile ref_profile(ref, 1.0);
  const double ref_norm = ref_profile.squared_norm();

  std::size_t above = 0;
  double worst = 0.0;
  for (std::size_t s = 0; s < seeds; ++s) {
    auto rng = make_stream(s, StreamRole::training);
    KmeState st;
    for (std::size_t i = 1; i <= n; ++i) st.update(standard_normal(rng), 1.0 / static_cast<double>(i));
    const auto e = st.estimate();
    double cross = 0.0;
    for (std::size_t i = 0; i < e.size(); ++i) cross += e.weights()[i] * ref_profile(e.atoms()[i]);
    const double d = std::sqrt(std::max(0.0, squared_norm(e, k) - 2 * cross + ref_norm));
    worst = std::max(worst, d);
    above += d > bound;
  }
  const double frac = static_cast<double>(above) / seeds;
  const double secs = seconds_since(t0);
  return {frac <= 0.05 && secs < 300.0,
          std::to_string(above) + "/" + std::to_string(seeds) + " runs above bound " + fmt(bound) +
              " (fraction " + fmt(frac) + ", worst distance " + fmt(worst) + "), " + fmt(secs, 3) + " s"};
}

// 2. Harmonic recursion reproduces the batch KME; batch order is irrelevant.
Outcome recursive_equals_batch() {
  const std::size_t n = 1000;
  const auto k = OutputKernel::gaussian(1.0);
  auto rng = make_stream(2, StreamRole::training);
  std::vector<double> ys(n);
  for (auto& y : ys) y = standard_normal(rng);

  KmeState st;
  for (std::size_t i = 0; i < n; ++i) st.update(ys[i], 1.0 / static_cast<double>(i + 1));
  const auto rec = st.estimate();
  const auto batch = batch_kme(ys);
  double worst = 0.0;
  for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(rec.weights()[i] - batch.weights()[i]));

  auto perm = ys;
  std::mt19937_64 shuffle_rng(7);
  std::shuffle(perm.begin(), perm.end(), shuffle_rng);
  const double d_orig = canonical_distance(batch, rec, k);
  const double d_perm = canonical_distance(batch_kme(perm), rec, k);
  const double change = std::abs(d_perm - d_orig);
  return {worst <= 1e-12 && change <= 1e-12,
          "max weight deviation " + fmt(worst) + ", distance change under permutation " + fmt(change)};
}

// 3. Streaming coefficients against the product formula on random configurations.
Outcome streaming_batch_equivalence() {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0, worst_sum = 0.0;
  std::size_t configs = 0;
  for (int c = 0; c < 100; ++c) {
    ConditionalModel model;
    switch (c % 3) {
    case 0: {
      const int p = 1 + static_cast<int>(u(rng) * 3);
      model = {MetricSpace::euclidean(p), InputDistribution::uniform_box(-1, 1), {MeanKind::affine}, {}};
      break;
    }
    case 1:
      model = {MetricSpace::sphere2(), InputDistribution::uniform_sphere(), {MeanKind::geodesic_to_pole}, {}};
      break;
    default: {
      const int m = 1 + static_cast<int>(u(rng) * 2);
      model = {MetricSpace::functional(m, 0.5 + u(rng), 0.5 + u(rng)), InputDistribution::uniform_params(),
               {MeanKind::lambda_sum}, {}};
      break;
    }
    }
    MotherSmoother mother = MotherSmoother::epanechnikov();
    switch ((c / 3) % 4) {
    case 0: mother = MotherSmoother::box(0.3 + 1.5 * u(rng)); break;
    case 1: mother = MotherSmoother::gaussian(0.2 + 2 * u(rng)); break;
    case 2: mother = MotherSmoother::laplace(0.2 + 2 * u(rng)); break;
    default: break;
    }
    const RateSchedule sched(0.05 + 0.9 * u(rng), model.space.intrinsic_dimension(), 0.2 + 0.8 * u(rng));
    const auto n = static_cast<std::size_t>(2 + u(rng) * 1998);

    auto data_rng = make_stream(c, StreamRole::training);
    std::vector<Observation> obs;
    for (std::size_t i = 0; i < n; ++i) obs.push_back(model.sample(data_rng));
    auto grid_rng = make_stream(c, StreamRole::grid);
    QueryGrid grid;
    for (int q = 0; q < 3; ++q) grid.points.push_back(sample_input(model.space, model.input_dist, grid_rng));

    auto st = CkmeState::init(grid, obs[0], model.space, mother, sched);
    for (std::size_t i = 1; i < n; ++i) st.update(obs[i]);
    for (std::size_t q = 0; q < grid.points.size(); ++q) {
      const auto w = batch_weights(obs, grid.points[q], sched, mother, model.space);
      std::vector<double> streamed(n, 0.0);
      const auto coeff = st.coefficients(q);
      for (std::size_t i = 0; i < coeff.size(); ++i) streamed[st.observation_indices()[i] - 1] = coeff[i];
      for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(streamed[i] - w[i]));
      worst_sum = std::max(worst_sum, std::abs(std::accumulate(w.begin(), w.end(), 0.0) - 1.0));
      worst_sum = std::max(worst_sum, std::abs(std::accumulate(coeff.begin(), coeff.end(), 0.0) - 1.0));
    }
    ++configs;
  }
  return {worst < 1e-12 && worst_sum <= 1e-12,
          std::to_string(configs) + " configurations, max coefficient deviation " + fmt(worst) +
              ", max |sum - 1| " + fmt(worst_sum)};
}

// 4. Closed-form oracle against a large Monte-Carlo oracle.
Outcome oracle_gate() {
  const auto cfg = load_config(config_path("euclidean_demo.json"));
  const auto rep = oracle_gate_report(cfg, 50, 100000, 4);
  bool lote = true;
  for (const auto& row : rep.at("total_expectation")) lote = lote && row.at("passed").get<bool>();
  return {rep.at("passed").get<bool>() && rep.at("pairs").get<std::size_t>() == 50,
          std::to_string(rep.at("pair_failures").get<std::size_t>()) + "/50 pair failures, worst z " +
              fmt(rep.at("worst_z").get<double>(), 3) + ", total expectation " + (lote ? "ok" : "failed")};
}

struct CliRun {
  int code;
  std::string csv;
  double seconds;
};

CliRun run_demo_via_cli(const char* threads, const fs::path& dir) {
  ::setenv("CKME_THREADS", threads, 1);
  fs::remove_all(dir);
  std::ostringstream out, err;
  const auto t0 = Clock::now();
  const int code = cli::dispatch({"run", config_path("euclidean_demo.json").string(), "--output-dir", dir.string()},
                                 out, err);
  const double secs = seconds_since(t0);
  ::unsetenv("CKME_THREADS");
  if (code != 0) std::cerr << err.str();
  return {code, code == 0 ? slurp(dir / "curve.csv") : "", secs};
}

// 5. Euclidean consistency trend, read from the CLI run's CSV.
Outcome euclidean_trend(const CliRun& run) {
  if (run.code != 0) return {false, "run exited with " + std::to_string(run.code)};
  const auto med = median_errors(parse_csv(run.csv));
  bool decreasing = med.size() == 4;
  for (auto it = med.begin(); decreasing && std::next(it) != med.end(); ++it) {
    decreasing = std::next(it)->second < it->second;
  }
  const bool halved = med.count(64) && med.count(4096) && med.at(4096) < 0.5 * med.at(64);
  return {decreasing && halved && run.seconds < 600.0,
          "medians {" + describe(med) + "}, ratio " + fmt(med.at(4096) / med.at(64), 4) + ", " +
              fmt(run.seconds, 3) + " s"};
}

// 6. Sphere and functional trends.
Outcome other_geometry_trends() {
  std::string detail;
  bool ok = true;
  for (const char* name : {"sphere_demo.json", "functional_demo.json"}) {
    const auto cfg = load_config(config_path(name));
    const auto med = median_errors(run_experiment(cfg, {.check_oracle = true}));
    const bool pass = med.at(4096) < med.at(64);
    ok = ok && pass;
    detail += std::string(detail.empty() ? "" : "; ") + std::string(to_string(cfg.space.geometry())) + " {" + describe(med) + "}";
  }
  return {ok, detail};
}

// 7. Local-averaging regression under the linear kernel.
Outcome regression_recovery() {
  const auto cfg = load_config(config_path("regression_demo.json"));
  const auto model = cfg.model();
  std::vector<double> at100, at10k;
  for (auto seed : cfg.seeds) {
    auto grid_rng = make_stream(seed, StreamRole::grid);
    auto train_rng = make_stream(seed, StreamRole::training);
    QueryGrid grid;
    for (std::size_t i = 0; i < cfg.grid_size; ++i) grid.points.push_back(sample_input(cfg.space, cfg.input_dist, grid_rng));
    auto st = CkmeState::init(grid, model.sample(train_rng), cfg.space, cfg.mother, cfg.schedule);
    auto grid_error = [&] {
      std::vector<double> err;
      for (std::size_t q = 0; q < st.query_count(); ++q) {
        err.push_back(std::abs(regression_estimate(st, q, cfg.output_kernel) - model.mean(st.grid().points[q])));
      }
      return median(err);
    };
    while (st.count() < 10000) {
      st.update(model.sample(train_rng));
      if (st.count() == 100) at100.push_back(grid_error());
    }
    at10k.push_back(grid_error());
  }
  const double m100 = median(at100), m10k = median(at10k);
  return {m10k * 2 <= m100,
          "median |estimate - m(x)| " + fmt(m100, 4) + " at n=100, " + fmt(m10k, 4) + " at n=10000 (factor " +
              fmt(m100 / m10k, 3) + ")"};
}

// 8. Box-smoother observations outside the window leave coefficients bit-identical.
Outcome locality() {
  std::size_t checked = 0, violations = 0;
  const std::vector<ConditionalModel> models{
      {MetricSpace::euclidean(1), InputDistribution::uniform_box(0, 1), {MeanKind::sine}, {}},
      {MetricSpace::sphere2(), InputDistribution::uniform_sphere(), {MeanKind::geodesic_to_pole}, {}},
      {MetricSpace::functional(2, 1.0, 1.0), InputDistribution::uniform_params(), {MeanKind::lambda_sum}, {}}};
  for (std::size_t mi = 0; mi < models.size(); ++mi) {
    const auto& model = models[mi];
    const auto mother = MotherSmoother::box(0.5);
    const RateSchedule sched(0.5, model.space.intrinsic_dimension());
    auto grid_rng = make_stream(mi, StreamRole::grid);
    auto train_rng = make_stream(mi, StreamRole::training);
    QueryGrid grid;
    for (int q = 0; q < 32; ++q) grid.points.push_back(sample_input(model.space, model.input_dist, grid_rng));
    auto st = CkmeState::init(grid, model.sample(train_rng), model.space, mother, sched);
    for (int i = 0; i < 1500; ++i) {
      const auto obs = model.sample(train_rng);
      const double reach = mother.parameter() * sched.at(st.count() + 1).h;
      std::vector<std::vector<double>> before(st.query_count());
      for (std::size_t q = 0; q < st.query_count(); ++q) before[q] = st.coefficients(q);
      st.update(obs);
      for (std::size_t q = 0; q < st.query_count(); ++q) {
        if (model.space.distance(st.grid().points[q], obs.x) < reach) continue;
        const auto after = st.coefficients(q);
        ++checked;
        const bool same_prefix =
            after.size() >= before[q].size() &&
            std::memcmp(after.data(), before[q].data(), before[q].size() * sizeof(double)) == 0;
        const bool zero_tail = std::all_of(after.begin() + static_cast<std::ptrdiff_t>(std::min(after.size(), before[q].size())),
                                           after.end(), [](double v) { return v == 0.0; });
        violations += !(same_prefix && zero_tail);
      }
    }
  }
  return {checked > 0 && violations == 0,
          std::to_string(checked) + " out-of-window updates checked, " + std::to_string(violations) + " changed"};
}

// 9. Schedule validator accepts the default and names rejected conditions.
Outcome schedule_validator() {
  const auto rep = validate_schedule(MotherSmoother::box(1.0), RateSchedule(0.5, 1, 1.0), 4096);
  const bool accepted = rep.accepted && std::abs(rep.sup_ratio - std::pow(2.0, -0.75)) <= 1e-9;

  auto condition_for = [](const std::function<void()>& f) -> std::string {
    try {
      f();
    } catch (const ScheduleRejected& e) {
      return e.condition();
    }
    return "accepted";
  };
  const auto eps_hi = condition_for([] { (void)RateSchedule(1.2, 1); });
  const auto eps_lo = condition_for([] { (void)RateSchedule(0.0, 1); });
  const auto big_scale = condition_for([] {
    (void)validate_schedule(MotherSmoother::box(1.0), RateSchedule(0.5, 1, 2.0), 4096);
  });
  const auto edge_scale = condition_for([] {
    (void)validate_schedule(MotherSmoother::box(1.0), RateSchedule(0.5, 1, std::pow(2.0, 0.75)), 4096);
  });
  const bool rejected = eps_hi == "epsilon_range" && eps_lo == "epsilon_range" &&
                        big_scale == "update_weight_bound" && edge_scale == "update_weight_bound";
  return {accepted && rejected, "sup ratio " + fmt(rep.sup_ratio, 12) + "; eps=1.2 -> " + eps_hi + ", eps=0 -> " +
                                    eps_lo + ", a_scale=2 -> " + big_scale + ", a_scale=2^0.75 -> " + edge_scale};
}

// 10. Byte-identical CSV across repeated runs and thread counts.
Outcome determinism(const CliRun& a, const CliRun& b, const CliRun& c) {
  const bool ok = a.code == 0 && b.code == 0 && c.code == 0 && !a.csv.empty() && a.csv == b.csv && a.csv == c.csv;
  return {ok, "CKME_THREADS=1 vs 4: " + std::string(a.csv == b.csv ? "identical" : "different") +
                  "; repeat with 1: " + (a.csv == c.csv ? "identical" : "different") + " (" +
                  std::to_string(a.csv.size()) + " bytes)"};
}

} // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& f) {
    Outcome o;
    try {
      o = f();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    failures += !o.passed;
    std::cout << (o.passed ? "PASS" : "FAIL") << " [" << id << "] " << name << ": " << o.detail << std::endl;
  };

  report(1, "kme deviation bound gate", kme_deviation_gate);
  report(2, "recursive KME equals batch KME", recursive_equals_batch);
  report(3, "streaming equals product-form weights", streaming_batch_equivalence);
  report(4, "closed-form oracle gate", oracle_gate);

  const auto scratch = fs::temp_directory_path() / "ckme_acceptance";
  const auto run1 = run_demo_via_cli("1", scratch / "threads1");
  const auto run4 = run_demo_via_cli("4", scratch / "threads4");
  const auto rerun = run_demo_via_cli("1", scratch / "threads1_again");

  report(5, "euclidean consistency trend", [&] { return euclidean_trend(run4); });
  report(6, "sphere and functional consistency trend", other_geometry_trends);
  report(7, "regression recovery", regression_recovery);
  report(8, "box smoother locality", locality);
  report(9, "schedule validator", schedule_validator);
  report(10, "determinism across runs and threads", [&] { return determinism(run1, run4, rerun); });

  std::cout << (failures == 0 ? "ALL PASS" : "FAILURES: " + std::to_string(failures)) << std::endl;
  return failures == 0 ? 0 : 1;
}
