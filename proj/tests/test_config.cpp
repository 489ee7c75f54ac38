#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "config.hpp"
#include "errors.hpp"

using namespace hygampdcs;

TEST_CASE("defaults from a minimal config") {
  const auto cfg = config_from_json_text("{}");
  CHECK(cfg.system.N == 1000);
  CHECK(cfg.system.L == 300);
  CHECK(cfg.system.T == 4);
  CHECK(cfg.system.p_a == 0.2);
  CHECK(cfg.system.p_10 == 0.25);
  CHECK(cfg.trials == 100);
  CHECK(cfg.seed == 1);
  CHECK(cfg.threads == 1);
  CHECK(cfg.solver.epsilon == 1e-5);
  CHECK(cfg.solver.max_iterations == 200);
  CHECK(cfg.solver.damping == 1.0);
  CHECK(cfg.algorithms.size() == 1);
  CHECK(cfg.algorithms[0] == Algorithm::HygampDcs);
  CHECK(cfg.detection.rule == DetectionRule::PosteriorThreshold);
  CHECK(cfg.detection.threshold == 0.5);
  CHECK(cfg.em.auto_snr0);
  CHECK(cfg.se.samples == 100000);
  CHECK(cfg.se.mode == "known");
  CHECK(cfg.system.pilot_norm == PilotNormalization::UnitColumn);
}

TEST_CASE("full config parses") {
  const char* text = R"({
    "system": {"N": 500, "L": 200, "T": 6, "p_a": 0.1, "p_10": 0.2,
               "beta": 2.0, "sigma2_w": 0.5},
    "algorithms": ["gamp", "forward_only", "hygamp_dcs", "em_hygamp_dcs"],
    "detection": {"rule": "power", "threshold": 0.02},
    "trials": 7, "seed": 99, "threads": 2,
    "solver": {"epsilon": 1e-6, "max_iterations": 50, "damping": 0.9},
    "pilots": {"normalization": "unit_entry"},
    "em": {"snr0_db": -15.0, "init_beta_noise_term": "sigma2"},
    "se": {"samples": 5000, "max_iterations": 40, "mode": "em"},
    "sweep": {"snr_db": [-10, 0], "T": [2, 4], "p_11": [0.5, 0.9]}
  })";
  const auto cfg = config_from_json_text(text);
  CHECK(cfg.system.N == 500);
  CHECK(cfg.system.sigma2_w == 0.5);
  CHECK(cfg.system.beta == 2.0);
  CHECK(cfg.system.pilot_norm == PilotNormalization::UnitEntry);
  CHECK(cfg.algorithms.size() == 4);
  CHECK(cfg.detection.rule == DetectionRule::PowerThreshold);
  CHECK(cfg.detection.threshold == 0.02);
  CHECK(cfg.trials == 7);
  CHECK(cfg.seed == 99);
  CHECK(cfg.threads == 2);
  CHECK(cfg.solver.damping == 0.9);
  CHECK_FALSE(cfg.em.auto_snr0);
  CHECK(cfg.em.snr0_db == -15.0);
  CHECK(cfg.em.init_beta_noise_sigma2);
  CHECK(cfg.se.mode == "em");
  CHECK(cfg.sweep.snr_db.size() == 2);
  CHECK(cfg.sweep.T.size() == 2);
  CHECK(cfg.sweep.p_11.size() == 2);
  CHECK(cfg.sweep.L.empty());
}

TEST_CASE("snr sets the noise variance") {
  const auto cfg = config_from_json_text(
      R"({"system": {"beta": 1.0, "snr_db": -10.0}})");
  CHECK(cfg.system.sigma2_w == doctest::Approx(10.0).epsilon(1e-12));
}

TEST_CASE("unknown keys are rejected with their path") {
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"trails": 3})"),
                       doctest::Contains("trails"), ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"system": {"Q": 1}})"),
                       doctest::Contains("system.Q"), ConfigError);
  CHECK_THROWS_WITH_AS(
      config_from_json_text(R"({"solver": {"momentum": 0.5}})"),
      doctest::Contains("solver.momentum"), ConfigError);
  CHECK_THROWS_WITH_AS(config_from_json_text(R"({"sweep": {"N": [1]}})"),
                       doctest::Contains("sweep.N"), ConfigError);
}

TEST_CASE("conflicting or invalid values are rejected") {
  CHECK_THROWS_AS(config_from_json_text(
                      R"({"system": {"snr_db": 0, "sigma2_w": 1}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"system": {"p_a": 1.2}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"trials": 0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"threads": 0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"solver": {"damping": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"solver": {"epsilon": -1}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"algorithms": ["amp"]})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"algorithms": []})"), ConfigError);
  CHECK_THROWS_AS(config_from_json_text(
                      R"({"detection": {"rule": "posterior", "threshold": "auto"}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"em": {"snr0_db": "soon"}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text(R"({"se": {"mode": "both"}})"),
                  ConfigError);
  CHECK_THROWS_AS(config_from_json_text("not json"), ConfigError);
}

TEST_CASE("auto threshold requires the power rule") {
  const auto cfg = config_from_json_text(
      R"({"detection": {"rule": "power", "threshold": "auto"}})");
  CHECK(cfg.detection.auto_threshold);
}

TEST_CASE("algorithm names round-trip") {
  for (Algorithm a : {Algorithm::HygampDcs, Algorithm::ForwardOnly,
                      Algorithm::GampBaseline, Algorithm::EmHygampDcs})
    CHECK(algorithm_from_name(algorithm_name(a)) == a);
  CHECK_THROWS_AS(algorithm_from_name("nope"), ConfigError);
}

TEST_CASE("overrides") {
  auto cfg = config_from_json_text("{}");
  apply_override(cfg, "seed", "123");
  apply_override(cfg, "trials", "9");
  apply_override(cfg, "threads", "4");
  apply_override(cfg, "algo", "gamp");
  CHECK(cfg.seed == 123);
  CHECK(cfg.trials == 9);
  CHECK(cfg.threads == 4);
  REQUIRE(cfg.algorithms.size() == 1);
  CHECK(cfg.algorithms[0] == Algorithm::GampBaseline);
  CHECK_THROWS_AS(apply_override(cfg, "seed", "abc"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "trials", "0"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "flavor", "x"), ConfigError);
}
