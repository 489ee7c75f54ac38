#include "hygampdcs.h"

#include <cmath>
#include <cstdio>
#include <exception>
#include <functional>
#include <memory>
#include <sstream>
#include <string>

#include "config.hpp"
#include "errors.hpp"
#include "model.hpp"
#include "rng.hpp"
#include "runner.hpp"
#include "se.hpp"

struct hyg_config_s {
  hygampdcs::ExperimentConfig cfg;
};

struct hyg_result_s {
  std::string csv;
  std::string summary;
};

namespace {

thread_local std::string g_last_error = "no error";

hyg_status fail(hyg_status st, const std::string& msg) {
  g_last_error = msg;
  return st;
}

hyg_status guard(hyg_result** out, const std::function<hyg_status()>& fn) {
  if (out == nullptr)
    return fail(HYG_ERROR_INVALID_ARGUMENT, "output pointer is NULL");
  *out = nullptr;
  try {
    return fn();
  } catch (const hygampdcs::ConfigError& e) {
    return fail(HYG_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HYG_ERROR_RUNTIME, e.what());
  }
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

double resolve_snr0(const hygampdcs::ExperimentConfig& cfg, double* chosen) {
  using namespace hygampdcs;
  if (!cfg.em.auto_snr0) {
    if (chosen) *chosen = cfg.em.snr0_db;
    return cfg.em.snr0_db;
  }
  SeOptions opts;
  opts.samples = cfg.se.samples;
  opts.max_iterations = cfg.se.max_iterations;
  const double v = select_snr0(cfg.system, cfg.em.snr0_grid_db,
                               cfg.em.init_beta_noise_sigma2, opts,
                               stream_seed(cfg.seed, "snr0-select", 0))
                       .snr0_db;
  if (chosen) *chosen = v;
  return v;
}

}  // namespace

extern "C" {

const char* hyg_version(void) { return "0.1.0"; }

const char* hyg_last_error(void) { return g_last_error.c_str(); }

hyg_status hyg_config_parse(const char* json_text, hyg_config** out) {
  if (json_text == nullptr || out == nullptr)
    return fail(HYG_ERROR_INVALID_ARGUMENT, "NULL argument");
  *out = nullptr;
  try {
    auto cfg = std::make_unique<hyg_config_s>();
    cfg->cfg = hygampdcs::config_from_json_text(json_text);
    *out = cfg.release();
    return HYG_OK;
  } catch (const hygampdcs::ConfigError& e) {
    return fail(HYG_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HYG_ERROR_RUNTIME, e.what());
  }
}

hyg_status hyg_config_load(const char* path, hyg_config** out) {
  if (path == nullptr || out == nullptr)
    return fail(HYG_ERROR_INVALID_ARGUMENT, "NULL argument");
  *out = nullptr;
  try {
    auto cfg = std::make_unique<hyg_config_s>();
    cfg->cfg = hygampdcs::config_from_file(path);
    *out = cfg.release();
    return HYG_OK;
  } catch (const hygampdcs::ConfigError& e) {
    return fail(HYG_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HYG_ERROR_RUNTIME, e.what());
  }
}

hyg_status hyg_config_override(hyg_config* cfg, const char* key,
                               const char* value) {
  if (cfg == nullptr || key == nullptr || value == nullptr)
    return fail(HYG_ERROR_INVALID_ARGUMENT, "NULL argument");
  try {
    hygampdcs::apply_override(cfg->cfg, key, value);
    return HYG_OK;
  } catch (const hygampdcs::ConfigError& e) {
    return fail(HYG_ERROR_CONFIG, e.what());
  } catch (const std::exception& e) {
    return fail(HYG_ERROR_RUNTIME, e.what());
  }
}

void hyg_config_free(hyg_config* cfg) { delete cfg; }

hyg_status hyg_run_simulate(const hyg_config* cfg, hyg_result** out) {
  if (cfg == nullptr) return fail(HYG_ERROR_INVALID_ARGUMENT, "config is NULL");
  return guard(out, [&]() {
    const hygampdcs::RunOutput ro =
        hygampdcs::run_experiment(cfg->cfg, /*expand_sweep=*/false);
    auto res = std::make_unique<hyg_result_s>();
    res->csv = hygampdcs::records_csv(ro.records);
    res->summary = hygampdcs::summarize(ro.aggregates);
    const bool dead = hygampdcs::all_diverged(ro.records);
    *out = res.release();
    return dead ? fail(HYG_ERROR_ALL_DIVERGED, "all trials diverged") : HYG_OK;
  });
}

hyg_status hyg_run_sweep(const hyg_config* cfg, hyg_result** out) {
  if (cfg == nullptr) return fail(HYG_ERROR_INVALID_ARGUMENT, "config is NULL");
  return guard(out, [&]() {
    const hygampdcs::RunOutput ro =
        hygampdcs::run_experiment(cfg->cfg, /*expand_sweep=*/true);
    auto res = std::make_unique<hyg_result_s>();
    res->csv = hygampdcs::aggregates_csv(ro.aggregates);
    res->summary = hygampdcs::summarize(ro.aggregates);
    const bool dead = hygampdcs::all_diverged(ro.records);
    *out = res.release();
    return dead ? fail(HYG_ERROR_ALL_DIVERGED, "all trials diverged") : HYG_OK;
  });
}

hyg_status hyg_run_se(const hyg_config* cfg, hyg_result** out) {
  if (cfg == nullptr) return fail(HYG_ERROR_INVALID_ARGUMENT, "config is NULL");
  return guard(out, [&]() {
    using namespace hygampdcs;
    const ExperimentConfig& c = cfg->cfg;
    SeOptions opts;
    opts.samples = c.se.samples;
    opts.max_iterations = c.se.max_iterations;
    const std::uint64_t seed = stream_seed(c.seed, "se", 0);
    SeTrajectory tr;
    std::string head;
    if (c.se.mode == "em") {
      double snr0 = 0.0;
      resolve_snr0(c, &snr0);
      tr = se_trajectory_mc_em(c.system, snr0, c.em.init_beta_noise_sigma2,
                               opts, seed);
      head = "snr0_db=" + fmt(snr0) + "  ";
    } else {
      tr = se_trajectory_mc(c.system, opts, seed);
    }
    auto res = std::make_unique<hyg_result_s>();
    std::ostringstream csv;
    csv << "iteration,tnmse_db,tnmse_believed_db,tau_r_mean\n";
    for (std::size_t i = 0; i < tr.tnmse_db.size(); ++i)
      csv << (i + 1) << ',' << fmt(tr.tnmse_db[i]) << ','
          << fmt(tr.tnmse_believed_db[i]) << ',' << fmt(tr.tau_r_mean[i])
          << "\n";
    res->csv = csv.str();
    res->summary = head + "iterations=" + std::to_string(tr.iterations) +
                   "  converged=" + (tr.converged ? "yes" : "no") +
                   "  final_tnmse_db=" +
                   (tr.tnmse_db.empty() ? "nan" : fmt(tr.tnmse_db.back())) +
                   "\n";
    *out = res.release();
    return HYG_OK;
  });
}

hyg_status hyg_run_em_init(const hyg_config* cfg, hyg_result** out) {
  if (cfg == nullptr) return fail(HYG_ERROR_INVALID_ARGUMENT, "config is NULL");
  return guard(out, [&]() {
    using namespace hygampdcs;
    const ExperimentConfig& c = cfg->cfg;
    double snr0 = 0.0;
    resolve_snr0(c, &snr0);
    const std::uint64_t tm = stream_seed(c.seed, "trial", 0);
    const CMat A = generate_pilots(c.system, tm);
    const GroundTruth truth = sample_ground_truth(c.system, tm);
    const CMat Y = synthesize_received(A, truth, c.system, tm);
    const EmInit ini =
        init_hyperparams(Y, A, snr0, c.em.init_beta_noise_sigma2);
    auto res = std::make_unique<hyg_result_s>();
    std::ostringstream csv;
    csv << "snr0_db,sigma2_w,p_a,beta,p_10,beta_clamped\n"
        << fmt(snr0) << ',' << fmt(ini.hyp.sigma2_w) << ',' << fmt(ini.hyp.p_a)
        << ',' << fmt(ini.hyp.beta) << ',' << fmt(ini.hyp.p_10) << ','
        << (ini.beta_clamped ? 1 : 0) << "\n";
    res->csv = csv.str();
    std::ostringstream sum;
    sum << "snr0_db=" << fmt(snr0) << "  sigma2_w=" << fmt(ini.hyp.sigma2_w)
        << "  p_a=" << fmt(ini.hyp.p_a) << "  beta=" << fmt(ini.hyp.beta)
        << "  p_10=" << fmt(ini.hyp.p_10)
        << (ini.beta_clamped ? "  (beta clamped)" : "") << "\n";
    res->summary = sum.str();
    *out = res.release();
    return HYG_OK;
  });
}

const char* hyg_result_csv(const hyg_result* res) {
  return res ? res->csv.c_str() : "";
}

const char* hyg_result_summary(const hyg_result* res) {
  return res ? res->summary.c_str() : "";
}

void hyg_result_free(hyg_result* res) { delete res; }

}  // extern "C"
