#include "ckme/reports.hpp"

#include <algorithm>
#include <cmath>

#include <nlohmann/json.hpp>

#include "ckme/ckme.hpp"
#include "ckme/diagnostics.hpp"
#include "ckme/errors.hpp"
#include "ckme/experiment.hpp"
#include "ckme/gaussian_sum.hpp"
#include "ckme/kme.hpp"

namespace ckme {

namespace {

using nlohmann::json;

constexpr double kGateZ = 4.0;
constexpr std::size_t kTotalExpectationDraws = 10000;
constexpr std::size_t kTotalExpectationProbes = 5;

struct MeanSe {
  double mean = 0.0;
  double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  double mean = 0.0;
  for (double x : v) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
  return {mean, std::sqrt(var / n)};
}

bool within(double a, double b, double se) {
  return std::abs(a - b) <= kGateZ * se || std::abs(a - b) <= 1e-12;
}

/// Leave-one-out row means h_i = (1/(M-1)) sum_{j != i} l(y_i, y_j); their
/// mean is the U-statistic and their spread gives its standard error.
std::vector<double> loo_row_means(const std::vector<double>& y, const OutputKernel& k) {
  const std::size_t m = y.size();
  std::vector<double> rows(m, 0.0);
  if (k.family() == OutputKernelFamily::gaussian && m > 2000) {
    const GaussianSumProfile profile(Embedding(y, std::vector<double>(m, 1.0)), k.parameter());
    for (std::size_t i = 0; i < m; ++i) rows[i] = profile(y[i]) - 1.0;
  } else {
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = i + 1; j < m; ++j) {
        const double v = k.eval(y[i], y[j]);
        rows[i] += v;
        rows[j] += v;
      }
    }
  }
  for (double& r : rows) r /= static_cast<double>(m - 1);
  return rows;
}

} // namespace

json oracle_gate_report(const ExperimentConfig& cfg, std::size_t pairs, std::size_t samples,
                        std::uint64_t seed) {
  if (cfg.oracle_kind != OracleKind::closed_form_gaussian) {
    return {{"applicable", false},
            {"passed", true},
            {"reason", "config uses the Monte-Carlo oracle; no closed form to check"}};
  }
  if (samples < 2) throw ValidationError("oracle gate needs at least 2 Monte-Carlo samples");
  const ConditionalModel model = cfg.model();
  const OutputKernel& k = cfg.output_kernel;
  const OracleHandle closed = OracleHandle::closed_form(model, k);

  auto pair_rng = make_stream(seed, StreamRole::diagnostics, 1);
  json pair_rows = json::array();
  std::size_t failures = 0;
  double worst_z = 0.0;
  for (std::size_t p = 0; p < pairs; ++p) {
    const InputPoint x = sample_input(cfg.space, cfg.input_dist, pair_rng);
    const double y = model.sample_output(x, pair_rng);
    auto mc_rng = make_stream(seed, StreamRole::oracle, 1000 + p);
    const Embedding draws = mc_oracle_embedding(model, x, samples, mc_rng);

    std::vector<double> cross_terms(samples);
    for (std::size_t j = 0; j < samples; ++j) cross_terms[j] = k.eval(y, draws.atoms()[j]);
    const MeanSe cross_mc = mean_se(cross_terms);
    const double cross_cf = closed.cross(x, y);

    const MeanSe rows = mean_se(loo_row_means(draws.atoms(), k));
    // Var(U) ~ 4 Var(h_1) / M.
    const MeanSe norm_mc{rows.mean, 2.0 * rows.se};
    const double norm_cf = closed.norm_sq(x);

    const bool cross_ok = within(cross_cf, cross_mc.mean, cross_mc.se);
    const bool norm_ok = within(norm_cf, norm_mc.mean, norm_mc.se);
    if (!cross_ok || !norm_ok) ++failures;
    const double zc = cross_mc.se > 0 ? std::abs(cross_cf - cross_mc.mean) / cross_mc.se : 0.0;
    const double zn = norm_mc.se > 0 ? std::abs(norm_cf - norm_mc.mean) / norm_mc.se : 0.0;
    worst_z = std::max({worst_z, zc, zn});
    pair_rows.push_back({{"x", x.coords},
                         {"y", y},
                         {"cross_closed_form", cross_cf},
                         {"cross_mc", cross_mc.mean},
                         {"cross_se", cross_mc.se},
                         {"norm_closed_form", norm_cf},
                         {"norm_mc", norm_mc.mean},
                         {"norm_se", norm_mc.se},
                         {"passed", cross_ok && norm_ok}});
  }

  // E_X[<l(., y), mu_*(X)>] against E[l(y, Y)] from joint draws.
  auto probe_rng = make_stream(seed, StreamRole::diagnostics, 2);
  json total_rows = json::array();
  bool total_ok = true;
  for (std::size_t t = 0; t < kTotalExpectationProbes; ++t) {
    const double y = model.sample(probe_rng).y;
    auto x_rng = make_stream(seed, StreamRole::diagnostics, 100 + t);
    std::vector<double> conditional(kTotalExpectationDraws);
    for (auto& v : conditional) v = closed.cross(sample_input(cfg.space, cfg.input_dist, x_rng), y);
    auto joint_rng = make_stream(seed, StreamRole::diagnostics, 200 + t);
    std::vector<double> joint(samples);
    for (auto& v : joint) v = k.eval(y, model.sample(joint_rng).y);
    const MeanSe a = mean_se(conditional);
    const MeanSe b = mean_se(joint);
    const double pooled = std::hypot(a.se, b.se);
    const bool ok = within(a.mean, b.mean, pooled);
    total_ok = total_ok && ok;
    total_rows.push_back({{"y", y},
                          {"averaged_closed_form", a.mean},
                          {"joint_mc", b.mean},
                          {"pooled_se", pooled},
                          {"passed", ok}});
  }

  return {{"applicable", true},
          {"pairs", pairs},
          {"samples", samples},
          {"z_threshold", kGateZ},
          {"pair_failures", failures},
          {"worst_z", worst_z},
          {"pair_checks", std::move(pair_rows)},
          {"total_expectation", std::move(total_rows)},
          {"passed", failures == 0 && total_ok}};
}

json diagnose_report(const ExperimentConfig& cfg, std::size_t reference_sample,
                     std::size_t curve_points) {
  json report;
  const std::uint64_t horizon = std::max<std::uint64_t>(cfg.horizon(), 2);
  try {
    report["schedule"] = validate_schedule(cfg.mother, cfg.schedule, horizon);
  } catch (const ScheduleRejected& e) {
    report["schedule"] = {{"accepted", false}, {"condition", e.condition()}, {"detail", e.what()}};
  }
  report["stepsize_series"] = stepsize_series(cfg.schedule, horizon);

  const std::uint64_t seed = cfg.seeds.front();
  auto ref_rng = make_stream(seed, StreamRole::diagnostics);
  std::vector<InputPoint> reference(reference_sample);
  for (auto& x : reference) x = sample_input(cfg.space, cfg.input_dist, ref_rng);

  auto grid_rng = make_stream(seed, StreamRole::grid);
  QueryGrid grid;
  for (std::size_t i = 0; i < cfg.grid_size; ++i) {
    grid.points.push_back(sample_input(cfg.space, cfg.input_dist, grid_rng));
  }

  json curves = json::array();
  std::size_t flagged = 0;
  for (std::size_t i = 0; i < std::min(curve_points, grid.points.size()); ++i) {
    const auto curve = small_ball_ratio_curve(reference, grid.points[i], cfg.schedule, cfg.mother,
                                              cfg.space, cfg.checkpoints);
    for (const auto& p : curve) flagged += p.flagged ? 1 : 0;
    curves.push_back({{"x", grid.points[i].coords}, {"curve", curve}});
  }
  report["small_ball"] = {{"reference_sample", reference_sample},
                          {"floor", 0.01},
                          {"flagged", flagged},
                          {"points", std::move(curves)}};

  const ConditionalModel model = cfg.model();
  auto train_rng = make_stream(seed, StreamRole::training);
  CkmeState st = CkmeState::init(grid, model.sample(train_rng), cfg.space, cfg.mother,
                                 cfg.schedule, CkmeOptions{cfg.truncation});
  json weights = json::array();
  auto record = [&] {
    std::vector<double> maxw;
    std::vector<double> ess;
    double worst_sum = 0.0;
    for (std::size_t q = 0; q < st.query_count(); ++q) {
      const auto r = weight_diagnostics(st.coefficients(q));
      maxw.push_back(r.max);
      ess.push_back(r.effective_size);
      worst_sum = std::max(worst_sum, std::abs(r.sum - 1.0));
    }
    weights.push_back({{"n", st.count()},
                       {"max_weight_median", median(maxw)},
                       {"effective_size_median", median(ess)},
                       {"max_abs_sum_deviation", worst_sum}});
  };
  for (std::uint64_t cp : cfg.checkpoints) {
    while (st.count() < cp) st.update(model.sample(train_rng));
    record();
  }
  report["weights"] = {{"seed", seed}, {"checkpoints", std::move(weights)}};
  return report;
}

std::vector<KmeDemoRow> kme_demo(std::uint64_t n_max, double delta, std::uint64_t seed,
                                 double sigma) {
  if (n_max == 0) throw ValidationError("kme demo needs n >= 1");
  if (!(delta > 0.0 && delta < 1.0)) throw ValidationError("delta must lie in (0, 1)");
  const OutputKernel k = OutputKernel::gaussian(sigma);

  auto ref_rng = make_stream(seed, StreamRole::oracle);
  std::vector<double> ref(100 * n_max);
  for (double& y : ref) y = standard_normal(ref_rng);
  const GaussianSumProfile profile(
      Embedding(ref, std::vector<double>(ref.size(), 1.0 / static_cast<double>(ref.size()))),
      sigma);
  const double ref_norm = profile.squared_norm();

  std::vector<std::uint64_t> ns;
  for (std::uint64_t n = 10; n < n_max; n *= 10) ns.push_back(n);
  ns.push_back(n_max);

  auto rng = make_stream(seed, StreamRole::training);
  KmeState st;
  std::vector<KmeDemoRow> rows;
  auto next = ns.begin();
  for (std::uint64_t i = 1; i <= n_max; ++i) {
    st.update(standard_normal(rng), 1.0 / static_cast<double>(i));
    if (i != *next) continue;
    const Embedding est = st.estimate();
    const double est_norm = est.size() > 512 ? GaussianSumProfile(est, sigma).squared_norm()
                                             : squared_norm(est, k);
    double cross = 0.0;
    for (std::size_t j = 0; j < est.size(); ++j) cross += est.weights()[j] * profile(est.atoms()[j]);
    rows.push_back({i, std::sqrt(std::max(est_norm - 2.0 * cross + ref_norm, 0.0)),
                    kme_deviation_bound(k.sup_bound(), i, delta)});
    ++next;
  }
  return rows;
}

} // namespace ckme
