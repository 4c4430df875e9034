#include "ckme/config.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "ckme/errors.hpp"
#include "ckme/serialization.hpp"

namespace ckme {

namespace {

using nlohmann::json;

bool is_nonnegative_integer(const json& v) {
  return v.is_number_unsigned() || (v.is_number_integer() && v.get<std::int64_t>() >= 0);
}

std::size_t read_count(const json& j, const char* key, std::size_t fallback,
                       const std::string& where) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (!is_nonnegative_integer(v) || v.get<std::uint64_t>() == 0) {
    throw ValidationError(where + "." + key + " must be a positive integer");
  }
  return v.get<std::size_t>();
}

std::vector<std::uint64_t> read_u64_list(const json& j, const char* key, const std::string& where) {
  if (!j.contains(key) || !j.at(key).is_array() || j.at(key).empty()) {
    throw ValidationError(where + "." + key + " must be a nonempty array of integers");
  }
  std::vector<std::uint64_t> out;
  for (const auto& v : j.at(key)) {
    if (!is_nonnegative_integer(v)) {
      throw ValidationError(where + "." + key + " entries must be nonnegative integers");
    }
    out.push_back(v.get<std::uint64_t>());
  }
  return out;
}

bool closed_form_possible(const ExperimentConfig& cfg) {
  return cfg.output_kernel.family() == OutputKernelFamily::gaussian &&
         cfg.noise.kind == NoiseKind::gaussian;
}

} // namespace

ConditionalModel ExperimentConfig::model() const {
  ConditionalModel m;
  m.space = space;
  m.input_dist = input_dist;
  m.mean = mean;
  m.noise = noise;
  return m;
}

OracleHandle ExperimentConfig::oracle(std::uint64_t seed) const {
  if (oracle_kind == OracleKind::closed_form_gaussian) {
    return OracleHandle::closed_form(model(), output_kernel);
  }
  return OracleHandle::monte_carlo(model(), output_kernel, oracle_samples, splitmix64(seed));
}

namespace {

ExperimentConfig parse_config_impl(const json& j) {
  using namespace json_io;
  const std::string root = "config";
  require_keys(j,
               {"schema", "space", "input_dist", "model", "output_kernel", "mother", "schedule",
                "grid_size", "checkpoints", "mc_x_draws", "oracle", "seeds", "output_dir",
                "truncation", "record_timing"},
               root);
  if (!j.contains("schema") || !j.at("schema").is_string() ||
      j.at("schema").get<std::string>() != kConfigSchema) {
    throw ValidationError("config.schema must be \"" + std::string(kConfigSchema) + "\"");
  }
  for (const char* key : {"space", "input_dist", "model", "output_kernel", "mother", "schedule"}) {
    if (!j.contains(key)) throw ValidationError("config." + std::string(key) + " is required");
  }

  ExperimentConfig cfg;
  cfg.space = read_space(j.at("space"), "config.space");
  cfg.input_dist = read_input_distribution(j.at("input_dist"), "config.input_dist");

  const auto& model = j.at("model");
  require_keys(model, {"mean", "noise"}, "config.model");
  if (!model.contains("mean") || !model.contains("noise")) {
    throw ValidationError("config.model needs mean and noise");
  }
  cfg.mean = read_mean(model.at("mean"), "config.model.mean");
  cfg.noise = read_noise(model.at("noise"), "config.model.noise");
  cfg.output_kernel = read_output_kernel(j.at("output_kernel"), "config.output_kernel");
  cfg.mother = read_mother(j.at("mother"), "config.mother");
  cfg.schedule = read_schedule(j.at("schedule"), cfg.space.intrinsic_dimension(), "config.schedule");

  cfg.grid_size = read_count(j, "grid_size", 0, root);
  if (cfg.grid_size == 0) throw ValidationError("config.grid_size is required");
  cfg.checkpoints = read_u64_list(j, "checkpoints", root);
  for (std::size_t i = 0; i < cfg.checkpoints.size(); ++i) {
    if (cfg.checkpoints[i] == 0 || (i > 0 && cfg.checkpoints[i] <= cfg.checkpoints[i - 1])) {
      throw ValidationError("config.checkpoints must be positive and strictly increasing");
    }
  }
  cfg.mc_x_draws = read_count(j, "mc_x_draws", 200, root);
  cfg.seeds = read_u64_list(j, "seeds", root);

  cfg.oracle_kind =
      closed_form_possible(cfg) ? OracleKind::closed_form_gaussian : OracleKind::monte_carlo;
  if (j.contains("oracle")) {
    const auto& o = j.at("oracle");
    require_keys(o, {"kind", "samples", "gate_pairs", "gate_samples"}, "config.oracle");
    if (o.contains("kind")) {
      const std::string kind = o.at("kind").is_string() ? o.at("kind").get<std::string>() : "";
      if (kind == "closed_form") {
        if (!closed_form_possible(cfg)) {
          throw ValidationError(
              "config.oracle.kind closed_form needs a gaussian output kernel and gaussian noise");
        }
        cfg.oracle_kind = OracleKind::closed_form_gaussian;
      } else if (kind == "monte_carlo") {
        cfg.oracle_kind = OracleKind::monte_carlo;
      } else {
        throw ValidationError("config.oracle.kind must be closed_form or monte_carlo");
      }
    }
    cfg.oracle_samples = read_count(o, "samples", cfg.oracle_samples, "config.oracle");
    cfg.gate_pairs = read_count(o, "gate_pairs", cfg.gate_pairs, "config.oracle");
    cfg.gate_samples = read_count(o, "gate_samples", cfg.gate_samples, "config.oracle");
    if (cfg.gate_samples < 2) throw ValidationError("config.oracle.gate_samples must be >= 2");
  }

  if (j.contains("output_dir")) {
    if (!j.at("output_dir").is_string()) throw ValidationError("config.output_dir must be a string");
    cfg.output_dir = j.at("output_dir").get<std::string>();
  }
  if (j.contains("truncation")) {
    cfg.truncation = read_number(j, "truncation", root);
    if (!(cfg.truncation >= 0.0 && cfg.truncation < 1.0)) {
      throw ValidationError("config.truncation must lie in [0, 1)");
    }
  }
  if (j.contains("record_timing")) {
    if (!j.at("record_timing").is_boolean()) {
      throw ValidationError("config.record_timing must be a boolean");
    }
    cfg.record_timing = j.at("record_timing").get<bool>();
  }

  cfg.model().check();
  return cfg;
}

} // namespace

ExperimentConfig parse_config(const json& j) {
  try {
    return parse_config_impl(j);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("malformed config: ") + e.what());
  }
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  json j;
  try {
    j = json::parse(buffer.str());
  } catch (const json::parse_error& e) {
    throw ValidationError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  return parse_config(j);
}

json config_to_json(const ExperimentConfig& cfg) {
  using namespace json_io;
  return {{"schema", kConfigSchema},
          {"space", write(cfg.space)},
          {"input_dist", write(cfg.input_dist)},
          {"model", {{"mean", write(cfg.mean)}, {"noise", write(cfg.noise)}}},
          {"output_kernel", write(cfg.output_kernel)},
          {"mother", write(cfg.mother)},
          {"schedule", write(cfg.schedule)},
          {"grid_size", cfg.grid_size},
          {"checkpoints", cfg.checkpoints},
          {"mc_x_draws", cfg.mc_x_draws},
          {"oracle",
           {{"kind", to_string(cfg.oracle_kind)},
            {"samples", cfg.oracle_samples},
            {"gate_pairs", cfg.gate_pairs},
            {"gate_samples", cfg.gate_samples}}},
          {"seeds", cfg.seeds},
          {"output_dir", cfg.output_dir.string()},
          {"truncation", cfg.truncation},
          {"record_timing", cfg.record_timing}};
}

} // namespace ckme
