#include "config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "errors.hpp"

namespace hygampdcs {

using nlohmann::json;

std::string algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::HygampDcs: return "hygamp_dcs";
    case Algorithm::ForwardOnly: return "forward_only";
    case Algorithm::GampBaseline: return "gamp";
    case Algorithm::EmHygampDcs: return "em_hygamp_dcs";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "hygamp_dcs") return Algorithm::HygampDcs;
  if (name == "forward_only") return Algorithm::ForwardOnly;
  if (name == "gamp") return Algorithm::GampBaseline;
  if (name == "em_hygamp_dcs") return Algorithm::EmHygampDcs;
  throw ConfigError("unknown algorithm '" + name +
                    "' (expected hygamp_dcs, forward_only, gamp or "
                    "em_hygamp_dcs)");
}

namespace {

void check_keys(const json& obj, const std::string& where,
                const std::set<std::string>& allowed) {
  for (auto it = obj.begin(); it != obj.end(); ++it)
    if (!allowed.count(it.key()))
      throw ConfigError("unknown key '" + where + it.key() + "'");
}

double get_number(const json& obj, const std::string& where,
                  const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number())
    throw ConfigError("'" + where + key + "' must be a number");
  return v.get<double>();
}

int get_int(const json& obj, const std::string& where, const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_number_integer())
    throw ConfigError("'" + where + key + "' must be an integer");
  return v.get<int>();
}

std::string get_string(const json& obj, const std::string& where,
                       const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_string())
    throw ConfigError("'" + where + key + "' must be a string");
  return v.get<std::string>();
}

template <typename T>
std::vector<T> get_array(const json& obj, const std::string& where,
                         const std::string& key) {
  const auto& v = obj.at(key);
  if (!v.is_array())
    throw ConfigError("'" + where + key + "' must be an array");
  std::vector<T> out;
  for (const auto& e : v) {
    if (!e.is_number())
      throw ConfigError("'" + where + key + "' entries must be numbers");
    out.push_back(e.get<T>());
  }
  return out;
}

void parse_system(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "system.",
             {"N", "L", "T", "p_a", "p_10", "beta", "snr_db", "sigma2_w"});
  SystemParams& p = cfg.system;
  if (j.contains("N")) p.N = get_int(j, "system.", "N");
  if (j.contains("L")) p.L = get_int(j, "system.", "L");
  if (j.contains("T")) p.T = get_int(j, "system.", "T");
  if (j.contains("p_a")) p.p_a = get_number(j, "system.", "p_a");
  if (j.contains("p_10")) p.p_10 = get_number(j, "system.", "p_10");
  if (j.contains("beta")) p.beta = get_number(j, "system.", "beta");
  const bool has_snr = j.contains("snr_db");
  const bool has_s2 = j.contains("sigma2_w");
  if (has_snr && has_s2)
    throw ConfigError("give either 'system.snr_db' or 'system.sigma2_w', not both");
  if (has_snr)
    p.sigma2_w = SystemParams::sigma2_for_snr_db(p.beta, get_number(j, "system.", "snr_db"));
  else if (has_s2)
    p.sigma2_w = get_number(j, "system.", "sigma2_w");
  try {
    p.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("invalid system parameters: ") + e.what());
  }
}

void parse_detection(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "detection.", {"rule", "threshold"});
  if (j.contains("rule")) {
    const std::string r = get_string(j, "detection.", "rule");
    if (r == "posterior")
      cfg.detection.rule = DetectionRule::PosteriorThreshold;
    else if (r == "power")
      cfg.detection.rule = DetectionRule::PowerThreshold;
    else
      throw ConfigError("'detection.rule' must be 'posterior' or 'power'");
  }
  if (j.contains("threshold")) {
    const auto& v = j.at("threshold");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto")
        throw ConfigError("'detection.threshold' must be a number or 'auto'");
      cfg.detection.auto_threshold = true;
    } else if (v.is_number()) {
      cfg.detection.threshold = v.get<double>();
      if (cfg.detection.rule == DetectionRule::PosteriorThreshold &&
          !(cfg.detection.threshold >= 0.0 && cfg.detection.threshold <= 1.0))
        throw ConfigError("posterior 'detection.threshold' must lie in [0,1]");
      if (!(cfg.detection.threshold >= 0.0))
        throw ConfigError("'detection.threshold' must be >= 0");
    } else {
      throw ConfigError("'detection.threshold' must be a number or 'auto'");
    }
  }
  if (cfg.detection.auto_threshold &&
      cfg.detection.rule != DetectionRule::PowerThreshold)
    throw ConfigError("'detection.threshold' = 'auto' requires the power rule");
}

void parse_solver(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "solver.", {"epsilon", "max_iterations", "damping"});
  if (j.contains("epsilon"))
    cfg.solver.epsilon = get_number(j, "solver.", "epsilon");
  if (j.contains("max_iterations"))
    cfg.solver.max_iterations = get_int(j, "solver.", "max_iterations");
  if (j.contains("damping"))
    cfg.solver.damping = get_number(j, "solver.", "damping");
  if (!(cfg.solver.epsilon > 0.0))
    throw ConfigError("'solver.epsilon' must be > 0");
  if (cfg.solver.max_iterations < 1)
    throw ConfigError("'solver.max_iterations' must be >= 1");
  if (!(cfg.solver.damping > 0.0 && cfg.solver.damping <= 1.0))
    throw ConfigError("'solver.damping' must lie in (0,1]");
}

void parse_em(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "em.", {"snr0_db", "snr0_grid_db", "init_beta_noise_term"});
  if (j.contains("snr0_db")) {
    const auto& v = j.at("snr0_db");
    if (v.is_string()) {
      if (v.get<std::string>() != "auto")
        throw ConfigError("'em.snr0_db' must be a number or 'auto'");
      cfg.em.auto_snr0 = true;
    } else if (v.is_number()) {
      cfg.em.auto_snr0 = false;
      cfg.em.snr0_db = v.get<double>();
    } else {
      throw ConfigError("'em.snr0_db' must be a number or 'auto'");
    }
  }
  if (j.contains("snr0_grid_db")) {
    cfg.em.snr0_grid_db = get_array<double>(j, "em.", "snr0_grid_db");
    if (cfg.em.snr0_grid_db.empty())
      throw ConfigError("'em.snr0_grid_db' must not be empty");
  }
  if (j.contains("init_beta_noise_term")) {
    const std::string v = get_string(j, "em.", "init_beta_noise_term");
    if (v == "sigma")
      cfg.em.init_beta_noise_sigma2 = false;
    else if (v == "sigma2")
      cfg.em.init_beta_noise_sigma2 = true;
    else
      throw ConfigError("'em.init_beta_noise_term' must be 'sigma' or 'sigma2'");
  }
}

void parse_se(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "se.", {"samples", "max_iterations", "mode"});
  if (j.contains("samples")) cfg.se.samples = get_int(j, "se.", "samples");
  if (j.contains("max_iterations"))
    cfg.se.max_iterations = get_int(j, "se.", "max_iterations");
  if (j.contains("mode")) {
    cfg.se.mode = get_string(j, "se.", "mode");
    if (cfg.se.mode != "known" && cfg.se.mode != "em")
      throw ConfigError("'se.mode' must be 'known' or 'em'");
  }
  if (cfg.se.samples < 100)
    throw ConfigError("'se.samples' must be >= 100");
  if (cfg.se.max_iterations < 1)
    throw ConfigError("'se.max_iterations' must be >= 1");
}

void parse_sweep(const json& j, ExperimentConfig& cfg) {
  check_keys(j, "sweep.", {"snr_db", "L", "T", "p_11"});
  if (j.contains("snr_db"))
    cfg.sweep.snr_db = get_array<double>(j, "sweep.", "snr_db");
  if (j.contains("L")) cfg.sweep.L = get_array<int>(j, "sweep.", "L");
  if (j.contains("T")) cfg.sweep.T = get_array<int>(j, "sweep.", "T");
  if (j.contains("p_11")) cfg.sweep.p_11 = get_array<double>(j, "sweep.", "p_11");
}

}  // namespace

ExperimentConfig config_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config root must be an object");
  check_keys(j, "",
             {"system", "algorithms", "detection", "trials", "seed", "threads",
              "solver", "pilots", "em", "se", "sweep"});

  ExperimentConfig cfg;
  if (j.contains("pilots")) {
    const auto& jp = j.at("pilots");
    check_keys(jp, "pilots.", {"normalization"});
    if (jp.contains("normalization")) {
      const std::string v = get_string(jp, "pilots.", "normalization");
      if (v == "unit_column")
        cfg.system.pilot_norm = PilotNormalization::UnitColumn;
      else if (v == "unit_entry")
        cfg.system.pilot_norm = PilotNormalization::UnitEntry;
      else
        throw ConfigError(
            "'pilots.normalization' must be 'unit_column' or 'unit_entry'");
    }
  }
  if (j.contains("system")) parse_system(j.at("system"), cfg);
  if (j.contains("algorithms")) {
    const auto& ja = j.at("algorithms");
    if (!ja.is_array() || ja.empty())
      throw ConfigError("'algorithms' must be a non-empty array");
    cfg.algorithms.clear();
    for (const auto& e : ja) {
      if (!e.is_string())
        throw ConfigError("'algorithms' entries must be strings");
      cfg.algorithms.push_back(algorithm_from_name(e.get<std::string>()));
    }
  }
  if (j.contains("detection")) parse_detection(j.at("detection"), cfg);
  if (j.contains("trials")) {
    cfg.trials = get_int(j, "", "trials");
    if (cfg.trials < 1) throw ConfigError("'trials' must be >= 1");
  }
  if (j.contains("seed")) {
    const auto& v = j.at("seed");
    if (!v.is_number_integer() || v.get<long long>() < 0)
      throw ConfigError("'seed' must be a non-negative integer");
    cfg.seed = v.get<std::uint64_t>();
  }
  if (j.contains("threads")) {
    cfg.threads = get_int(j, "", "threads");
    if (cfg.threads < 1) throw ConfigError("'threads' must be >= 1");
  }
  if (j.contains("solver")) parse_solver(j.at("solver"), cfg);
  if (j.contains("em")) parse_em(j.at("em"), cfg);
  if (j.contains("se")) parse_se(j.at("se"), cfg);
  if (j.contains("sweep")) parse_sweep(j.at("sweep"), cfg);
  return cfg;
}

ExperimentConfig config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return config_from_json_text(ss.str());
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  auto parse_ll = [&](const std::string& v) {
    try {
      size_t pos = 0;
      const long long out = std::stoll(v, &pos);
      if (pos != v.size()) throw std::invalid_argument(v);
      return out;
    } catch (const std::exception&) {
      throw ConfigError("override '" + key + "' needs an integer, got '" + v + "'");
    }
  };
  if (key == "seed") {
    const long long v = parse_ll(value);
    if (v < 0) throw ConfigError("'seed' must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(v);
  } else if (key == "trials") {
    const long long v = parse_ll(value);
    if (v < 1) throw ConfigError("'trials' must be >= 1");
    cfg.trials = static_cast<int>(v);
  } else if (key == "threads") {
    const long long v = parse_ll(value);
    if (v < 1) throw ConfigError("'threads' must be >= 1");
    cfg.threads = static_cast<int>(v);
  } else if (key == "algo") {
    cfg.algorithms = {algorithm_from_name(value)};
  } else {
    throw ConfigError("unsupported override '" + key + "'");
  }
}

}  // namespace hygampdcs
