#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstring>
#include <string>

#include "doctest.h"
#include "hygampdcs.h"

namespace {

const char* kTinyJson = R"({
  "system": {"N": 40, "L": 24, "T": 2, "p_a": 0.2, "p_10": 0.25,
             "beta": 1.0, "snr_db": 5.0},
  "algorithms": ["hygamp_dcs", "gamp"],
  "trials": 3,
  "seed": 7
})";

int count_rows(const std::string& csv) {
  int rows = 0;
  for (char c : csv)
    if (c == '\n') ++rows;
  return rows - 1;  // minus header
}

}  // namespace

TEST_CASE("version string is present") {
  REQUIRE(hyg_version() != nullptr);
  CHECK(std::strlen(hyg_version()) > 0);
}

TEST_CASE("simulate produces per-trial rows and a summary") {
  hyg_config* cfg = nullptr;
  REQUIRE(hyg_config_parse(kTinyJson, &cfg) == HYG_OK);
  REQUIRE(cfg != nullptr);

  hyg_result* res = nullptr;
  REQUIRE(hyg_run_simulate(cfg, &res) == HYG_OK);
  REQUIRE(res != nullptr);
  const std::string csv = hyg_result_csv(res);
  CHECK(csv.rfind("cell_id,algo,seed,snr_db,L,N,T,p_a,p_10,iterations,"
                  "converged,tnmse_db,taer,runtime_ms\n",
                  0) == 0);
  CHECK(count_rows(csv) == 6);
  const std::string summary = hyg_result_summary(res);
  CHECK_FALSE(summary.empty());
  CHECK(summary.find("hygamp_dcs") != std::string::npos);
  hyg_result_free(res);
  hyg_config_free(cfg);
}

TEST_CASE("overrides change the run shape and reject junk") {
  hyg_config* cfg = nullptr;
  REQUIRE(hyg_config_parse(kTinyJson, &cfg) == HYG_OK);
  CHECK(hyg_config_override(cfg, "trials", "2") == HYG_OK);
  CHECK(hyg_config_override(cfg, "algo", "gamp") == HYG_OK);
  CHECK(hyg_config_override(cfg, "seed", "99") == HYG_OK);

  CHECK(hyg_config_override(cfg, "algo", "bogus") == HYG_ERROR_CONFIG);
  CHECK(std::strlen(hyg_last_error()) > 0);
  CHECK(hyg_config_override(cfg, "trials", "0") == HYG_ERROR_CONFIG);
  CHECK(hyg_config_override(cfg, "nope", "1") == HYG_ERROR_CONFIG);

  hyg_result* res = nullptr;
  REQUIRE(hyg_run_simulate(cfg, &res) == HYG_OK);
  const std::string csv = hyg_result_csv(res);
  CHECK(count_rows(csv) == 2);
  CHECK(csv.find("hygamp_dcs") == std::string::npos);
  hyg_result_free(res);
  hyg_config_free(cfg);
}

TEST_CASE("bad configs surface as config errors with a message") {
  hyg_config* cfg = nullptr;
  CHECK(hyg_config_parse("{\"trails\": 3}", &cfg) == HYG_ERROR_CONFIG);
  CHECK(cfg == nullptr);
  CHECK(std::string(hyg_last_error()).find("trails") != std::string::npos);

  CHECK(hyg_config_parse("not json", &cfg) == HYG_ERROR_CONFIG);
  CHECK(hyg_config_load("/no/such/file.json", &cfg) == HYG_ERROR_CONFIG);
  CHECK(hyg_config_parse(kTinyJson, nullptr) == HYG_ERROR_INVALID_ARGUMENT);
  CHECK(hyg_config_parse(nullptr, &cfg) == HYG_ERROR_INVALID_ARGUMENT);
}

TEST_CASE("state-evolution runs report per-iteration predictions") {
  const char* json = R"({
    "system": {"N": 200, "L": 60, "T": 2, "p_a": 0.1, "p_10": 0.25,
               "beta": 1.0, "snr_db": 0.0},
    "se": {"samples": 2000, "max_iterations": 30}
  })";
  hyg_config* cfg = nullptr;
  REQUIRE(hyg_config_parse(json, &cfg) == HYG_OK);
  hyg_result* res = nullptr;
  REQUIRE(hyg_run_se(cfg, &res) == HYG_OK);
  const std::string csv = hyg_result_csv(res);
  CHECK(csv.rfind("iteration,tnmse_db,tnmse_believed_db,tau_r_mean\n", 0) == 0);
  CHECK(count_rows(csv) >= 2);
  hyg_result_free(res);
  hyg_config_free(cfg);
}

TEST_CASE("initialization report carries the starting hyperparameters") {
  const char* json = R"({
    "system": {"N": 100, "L": 40, "T": 2, "p_a": 0.1, "p_10": 0.25,
               "beta": 1.0, "snr_db": 0.0},
    "em": {"snr0_db": 0.0}
  })";
  hyg_config* cfg = nullptr;
  REQUIRE(hyg_config_parse(json, &cfg) == HYG_OK);
  hyg_result* res = nullptr;
  REQUIRE(hyg_run_em_init(cfg, &res) == HYG_OK);
  const std::string csv = hyg_result_csv(res);
  CHECK(csv.rfind("snr0_db,sigma2_w,p_a,beta,p_10,beta_clamped\n", 0) == 0);
  CHECK(count_rows(csv) == 1);
  hyg_result_free(res);
  hyg_config_free(cfg);
}

TEST_CASE("null handles are rejected rather than dereferenced") {
  hyg_result* res = nullptr;
  CHECK(hyg_run_simulate(nullptr, &res) == HYG_ERROR_INVALID_ARGUMENT);
  hyg_config* cfg = nullptr;
  REQUIRE(hyg_config_parse(kTinyJson, &cfg) == HYG_OK);
  CHECK(hyg_run_simulate(cfg, nullptr) == HYG_ERROR_INVALID_ARGUMENT);
  CHECK(hyg_config_override(nullptr, "seed", "1") ==
        HYG_ERROR_INVALID_ARGUMENT);
  hyg_config_free(cfg);
  hyg_config_free(nullptr);  // must be a no-op
  hyg_result_free(nullptr);
}
