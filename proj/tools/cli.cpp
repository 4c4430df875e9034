#include "cli.hpp"

#include <algorithm>
#include <iomanip>
#include <ostream>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "ckme/config.hpp"
#include "ckme/errors.hpp"
#include "ckme/experiment.hpp"
#include "ckme/reports.hpp"
#include "ckme/schedules.hpp"

namespace ckme::cli {

namespace {

using nlohmann::json;

struct RunArgs {
  std::string config;
  std::string output_dir;
  unsigned threads = 0;
  std::string save_state;
  std::string resume;
  bool skip_gate = false;
  bool timing = false;
};

struct DemoArgs {
  std::uint64_t n = 1000;
  double delta = 0.05;
  std::uint64_t seed = 0;
  double sigma = 1.0;
};

struct CheckArgs {
  std::string config;
  std::size_t pairs = 0;
  std::size_t samples = 0;
};

int do_run(const RunArgs& a, std::ostream& out) {
  ExperimentConfig cfg = load_config(a.config);
  if (!a.output_dir.empty()) cfg.output_dir = a.output_dir;
  if (a.timing) cfg.record_timing = true;
  RunOptions options;
  options.threads = a.threads;
  options.check_oracle = !a.skip_gate;
  if (!a.save_state.empty()) options.save_state_dir = a.save_state;
  if (!a.resume.empty()) options.resume_dir = a.resume;

  const ErrorCurve curve = run_experiment(cfg, options);
  const auto csv = cfg.output_dir / "curve.csv";
  const auto summary = cfg.output_dir / "summary.json";
  emit_csv(curve, csv);
  emit_json_summary(curve, summary);
  out << "wrote " << csv.string() << " (" << curve.rows.size() << " rows)\n";
  out << "wrote " << summary.string() << "\n";
  return kSuccess;
}

int do_kme_demo(const DemoArgs& a, std::ostream& out) {
  const auto rows = kme_demo(a.n, a.delta, a.seed, a.sigma);
  out << "n,distance,bound\n";
  out << std::setprecision(10);
  for (const auto& r : rows) out << r.n << ',' << r.distance << ',' << r.bound << '\n';
  return kSuccess;
}

int do_diagnose(const std::string& path, std::ostream& out) {
  const ExperimentConfig cfg = load_config(path);
  const json report = diagnose_report(cfg);
  out << report.dump(2) << '\n';
  return report.at("schedule").at("accepted").get<bool>() ? kSuccess : kValidationFailure;
}

int do_oracle_check(const CheckArgs& a, std::ostream& out) {
  const ExperimentConfig cfg = load_config(a.config);
  const json report = oracle_gate_report(cfg, a.pairs ? a.pairs : cfg.gate_pairs,
                                         a.samples ? a.samples : cfg.gate_samples);
  out << report.dump(2) << '\n';
  return report.at("passed").get<bool>() ? kSuccess : kValidationFailure;
}

int do_validate(const std::string& path, std::ostream& out) {
  const ExperimentConfig cfg = load_config(path);
  json report;
  int code = kSuccess;
  try {
    report = validate_schedule(cfg.mother, cfg.schedule, std::max<std::uint64_t>(cfg.horizon(), 2));
  } catch (const ScheduleRejected& e) {
    report = {{"accepted", false}, {"condition", e.condition()}, {"detail", e.what()}};
    code = kValidationFailure;
  }
  report["epsilon"] = cfg.schedule.epsilon();
  report["a_scale"] = cfg.schedule.a_scale();
  report["dimension"] = cfg.schedule.dimension();
  report["smoother"] = {{"family", to_string(cfg.mother.family())},
                        {"sup", cfg.mother.sup()},
                        {"b", cfg.mother.lower_level()},
                        {"R", cfg.mother.lower_radius()}};
  out << report.dump(2) << '\n';
  return code;
}

} // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Recursive estimation of conditional kernel mean embeddings", "ckme"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run = app.add_subcommand("run", "Stream an experiment and write curve.csv / summary.json");
  run->add_option("config", run_args.config, "Experiment config (JSON)")->required();
  run->add_option("--output-dir", run_args.output_dir, "Override the config's output_dir");
  run->add_option("--threads", run_args.threads, "Worker threads (default: CKME_THREADS or all)");
  run->add_option("--save-state", run_args.save_state, "Write per-seed snapshots to this directory");
  run->add_option("--resume", run_args.resume, "Continue from snapshots in this directory");
  run->add_flag("--skip-oracle-gate", run_args.skip_gate, "Do not run the closed-form oracle gate");
  run->add_flag("--timing", run_args.timing, "Record wall-clock time in the wall_ms column");

  DemoArgs demo_args;
  auto* demo = app.add_subcommand("kme-demo", "Recursive KME distance against the deviation bound");
  demo->add_option("--n", demo_args.n, "Largest sample size")->check(CLI::PositiveNumber);
  demo->add_option("--delta", demo_args.delta, "Confidence parameter in (0, 1]")
      ->check(CLI::Range(0.0, 1.0));
  demo->add_option("--seed", demo_args.seed, "Random seed");
  demo->add_option("--sigma", demo_args.sigma, "Gaussian kernel parameter")
      ->check(CLI::PositiveNumber);

  std::string diagnose_path;
  auto* diagnose = app.add_subcommand("diagnose", "Small-ball, weight and stepsize diagnostics");
  diagnose->add_option("config", diagnose_path, "Experiment config (JSON)")->required();

  CheckArgs check_args;
  auto* check = app.add_subcommand("oracle-check", "Closed-form oracle against Monte-Carlo");
  check->add_option("config", check_args.config, "Experiment config (JSON)")->required();
  check->add_option("--pairs", check_args.pairs, "Number of (x, y) pairs");
  check->add_option("--samples", check_args.samples, "Monte-Carlo sample size");

  std::string validate_path;
  auto* validate = app.add_subcommand("validate", "Check the schedule and smoother conditions");
  validate->add_option("config", validate_path, "Experiment config (JSON)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    // Show the failing subcommand's usage when one was selected.
    const auto selected = app.get_subcommands();
    err << (selected.empty() ? app.help() : selected.front()->help());
    return kValidationFailure;
  }

  try {
    if (*run) return do_run(run_args, out);
    if (*demo) return do_kme_demo(demo_args, out);
    if (*diagnose) return do_diagnose(diagnose_path, out);
    if (*check) return do_oracle_check(check_args, out);
    if (*validate) return do_validate(validate_path, out);
  } catch (const ScheduleRejected& e) {
    err << "schedule rejected: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const OracleIncompatible& e) {
    err << "oracle: " << e.what() << '\n';
    return kValidationFailure;
  } catch (const IoError& e) {
    err << "i/o error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
  err << app.help();
  return kValidationFailure;
}

} // namespace ckme::cli
