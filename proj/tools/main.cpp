#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "hygampdcs.h"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::string seed, trials, threads, algo;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  sub->add_option("--config", a.config_path, "JSON config file")->required();
  sub->add_option("--out", a.out_path, "output CSV path (default: stdout)");
  sub->add_option("--seed", a.seed, "override master seed");
  sub->add_option("--trials", a.trials, "override trial count");
  sub->add_option("--threads", a.threads, "override worker thread count");
  sub->add_option("--algo", a.algo,
                  "run a single algorithm (hygamp_dcs, forward_only, gamp, "
                  "em_hygamp_dcs)");
}

int status_to_exit(hyg_status st) {
  switch (st) {
    case HYG_OK: return 0;
    case HYG_ERROR_CONFIG: return 2;
    case HYG_ERROR_ALL_DIVERGED: return 3;
    default: return 1;
  }
}

int run(hyg_status (*fn)(const hyg_config*, hyg_result**), const CommonArgs& a) {
  hyg_config* cfg = nullptr;
  hyg_status st = hyg_config_load(a.config_path.c_str(), &cfg);
  if (st != HYG_OK) {
    std::cerr << "error: " << hyg_last_error() << "\n";
    return status_to_exit(st);
  }
  auto override_one = [&](const char* key, const std::string& v) {
    if (v.empty() || st != HYG_OK) return;
    st = hyg_config_override(cfg, key, v.c_str());
    if (st != HYG_OK) std::cerr << "error: " << hyg_last_error() << "\n";
  };
  override_one("seed", a.seed);
  override_one("trials", a.trials);
  override_one("threads", a.threads);
  override_one("algo", a.algo);
  if (st != HYG_OK) {
    hyg_config_free(cfg);
    return status_to_exit(st);
  }

  hyg_result* res = nullptr;
  st = fn(cfg, &res);
  hyg_config_free(cfg);
  if (res == nullptr) {
    std::cerr << "error: " << hyg_last_error() << "\n";
    return status_to_exit(st);
  }
  if (st != HYG_OK) std::cerr << "warning: " << hyg_last_error() << "\n";

  const std::string csv = hyg_result_csv(res);
  if (a.out_path.empty() || a.out_path == "-") {
    std::cout << csv;
  } else {
    std::ofstream out(a.out_path);
    if (!out) {
      std::cerr << "error: cannot write '" << a.out_path << "'\n";
      hyg_result_free(res);
      return 1;
    }
    out << csv;
  }
  std::cerr << hyg_result_summary(res);
  hyg_result_free(res);
  return status_to_exit(st);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Joint user-activity detection and channel estimation simulator"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(hyg_version()));

  CommonArgs sim_args, sweep_args, se_args, init_args;
  CLI::App* sim = app.add_subcommand(
      "simulate", "Monte Carlo trials of one configuration cell");
  add_common(sim, sim_args);
  CLI::App* sweep =
      app.add_subcommand("sweep", "aggregate results over the sweep axes");
  add_common(sweep, sweep_args);
  CLI::App* se = app.add_subcommand(
      "se", "state-evolution prediction of the TNMSE trajectory");
  add_common(se, se_args);
  CLI::App* em_init = app.add_subcommand(
      "em-init", "hyperparameter initialization for one synthesized instance");
  add_common(em_init, init_args);

  CLI11_PARSE(app, argc, argv);

  if (sim->parsed()) return run(hyg_run_simulate, sim_args);
  if (sweep->parsed()) return run(hyg_run_sweep, sweep_args);
  if (se->parsed()) return run(hyg_run_se, se_args);
  if (em_init->parsed()) return run(hyg_run_em_init, init_args);
  return 1;
}
