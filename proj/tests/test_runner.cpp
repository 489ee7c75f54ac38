#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "../src/runner.hpp"
#include "doctest.h"

using namespace hygampdcs;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.system.N = 40;
  cfg.system.L = 24;
  cfg.system.T = 2;
  cfg.system.p_a = 0.2;
  cfg.system.p_10 = 0.25;
  cfg.system.beta = 1.0;
  cfg.system.sigma2_w = SystemParams::sigma2_for_snr_db(1.0, 5.0);
  cfg.algorithms = {Algorithm::HygampDcs, Algorithm::GampBaseline};
  cfg.trials = 6;
  cfg.seed = 7;
  return cfg;
}

bool same_record(const TrialRecord& a, const TrialRecord& b,
                 bool ignore_runtime) {
  auto eq = [](double x, double y) {
    return (std::isnan(x) && std::isnan(y)) || x == y;
  };
  return a.cell_id == b.cell_id && a.algo == b.algo && a.seed == b.seed &&
         eq(a.snr_db, b.snr_db) && a.L == b.L && a.N == b.N && a.T == b.T &&
         eq(a.p_a, b.p_a) && eq(a.p_10, b.p_10) &&
         a.iterations == b.iterations && a.converged == b.converged &&
         eq(a.tnmse_db, b.tnmse_db) && eq(a.taer, b.taer) &&
         (ignore_runtime || eq(a.runtime_ms, b.runtime_ms));
}

long detection_errors(const std::vector<std::pair<double, std::uint8_t>>& pool,
                      double thr) {
  long err = 0;
  for (const auto& e : pool) {
    const bool det = e.first >= thr;
    if (det != (e.second != 0)) ++err;
  }
  return err;
}

}  // namespace

TEST_CASE("threshold search reaches the brute-force optimum") {
  std::mt19937_64 eng(5150);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int rep = 0; rep < 50; ++rep) {
    std::vector<std::pair<double, std::uint8_t>> pool;
    const int n = 3 + static_cast<int>(eng() % 40);
    for (int i = 0; i < n; ++i) {
      // Quantized powers so ties across labels occur often.
      const double pw = std::floor(unif(eng) * 8.0) / 4.0;
      const std::uint8_t lab = unif(eng) < 0.4 ? 1 : 0;
      pool.emplace_back(pw, lab);
    }
    const double thr = min_error_threshold(pool);

    long best = static_cast<long>(pool.size()) + 1;
    std::set<double> cands;
    for (const auto& e : pool) cands.insert(e.first);
    cands.insert(0.0);
    double top = 0.0;
    for (const auto& e : pool) top = std::max(top, e.first);
    cands.insert(top * 2.0 + 1.0);
    for (double c : cands) best = std::min(best, detection_errors(pool, c));
    CAPTURE(rep);
    CHECK(detection_errors(pool, thr) == best);
  }
}

TEST_CASE("experiment output is reproducible and thread-count invariant") {
  ExperimentConfig cfg = tiny_config();
  const RunOutput a = run_experiment(cfg, false);
  const RunOutput b = run_experiment(cfg, false);
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK(same_record(a.records[i], b.records[i], true));

  cfg.threads = 3;
  const RunOutput c = run_experiment(cfg, false);
  REQUIRE(a.records.size() == c.records.size());
  for (std::size_t i = 0; i < a.records.size(); ++i)
    CHECK(same_record(a.records[i], c.records[i], true));
}

TEST_CASE("algorithms compared in one trial share the same data") {
  const ExperimentConfig cfg = tiny_config();
  const RunOutput out = run_experiment(cfg, false);
  REQUIRE(out.records.size() == 12);
  std::set<std::uint64_t> seeds;
  for (int j = 0; j < 6; ++j) {
    const TrialRecord& first = out.records[2 * j];
    const TrialRecord& second = out.records[2 * j + 1];
    CHECK(first.algo == "hygamp_dcs");
    CHECK(second.algo == "gamp");
    CHECK(first.seed == second.seed);
    seeds.insert(first.seed);
  }
  CHECK(seeds.size() == 6);  // trials draw distinct streams
  REQUIRE(out.aggregates.size() == 2);
  CHECK(out.aggregates[0].cell_id == out.aggregates[1].cell_id);
  CHECK(out.aggregates[0].trials == 6);
}

TEST_CASE("record CSV round-trips exactly") {
  const ExperimentConfig cfg = tiny_config();
  RunOutput out = run_experiment(cfg, false);
  // Exercise the NaN path too.
  out.records[3].tnmse_db = std::nan("");
  out.records[3].taer = std::nan("");
  out.records[3].converged = false;

  const std::string csv = records_csv(out.records);
  const std::string header = csv.substr(0, csv.find('\n'));
  CHECK(header ==
        "cell_id,algo,seed,snr_db,L,N,T,p_a,p_10,iterations,converged,"
        "tnmse_db,taer,runtime_ms");
  const std::vector<TrialRecord> back = parse_records_csv(csv);
  REQUIRE(back.size() == out.records.size());
  for (std::size_t i = 0; i < back.size(); ++i)
    CHECK(same_record(back[i], out.records[i], false));
  CHECK_THROWS(parse_records_csv("not,a,header\n"));
}

TEST_CASE("standard errors shrink roughly like the square root of trials") {
  ExperimentConfig cfg = tiny_config();
  cfg.system.N = 60;
  cfg.system.L = 36;
  cfg.system.sigma2_w = SystemParams::sigma2_for_snr_db(1.0, 0.0);
  cfg.algorithms = {Algorithm::GampBaseline};
  cfg.seed = 11;

  cfg.trials = 25;
  const CellAggregate small = run_experiment(cfg, false).aggregates.front();
  cfg.trials = 100;
  const CellAggregate large = run_experiment(cfg, false).aggregates.front();
  REQUIRE(small.tnmse_trials == 25);
  REQUIRE(large.tnmse_trials == 100);
  REQUIRE(large.se_tnmse_db > 0.0);
  const double ratio = small.se_tnmse_db / large.se_tnmse_db;
  CAPTURE(ratio);
  CHECK(ratio >= 1.3);
  CHECK(ratio <= 3.1);
}

TEST_CASE("all-inactive blocks keep detection defined but drop the error ratio") {
  ExperimentConfig cfg;
  cfg.system.N = 5;
  cfg.system.L = 4;
  cfg.system.T = 1;
  cfg.system.p_a = 0.01;
  cfg.system.p_10 = 0.5;
  cfg.system.sigma2_w = 0.1;
  cfg.algorithms = {Algorithm::GampBaseline};
  cfg.trials = 40;
  cfg.seed = 3;
  const RunOutput out = run_experiment(cfg, false);
  int silent = 0;
  for (const auto& r : out.records) {
    if (std::isnan(r.tnmse_db)) {
      CHECK_FALSE(std::isnan(r.taer));  // detection still scored
      ++silent;
    }
  }
  CHECK(silent > 0);
  const CellAggregate& agg = out.aggregates.front();
  CHECK(agg.tnmse_trials == cfg.trials - silent);
  CHECK(std::isfinite(agg.mean_taer));
  CHECK(agg.diverged == 0);
  CHECK_FALSE(all_diverged(out.records));
}

TEST_CASE("fully diverged record sets are recognized") {
  std::vector<TrialRecord> recs(3);
  for (auto& r : recs) {
    r.taer = std::nan("");
    r.tnmse_db = std::nan("");
    r.converged = false;
  }
  CHECK(all_diverged(recs));
  recs[1].taer = 0.25;
  CHECK_FALSE(all_diverged(recs));
  CHECK_FALSE(all_diverged({}));
}

TEST_CASE("cell identifiers carry the sweep coordinates") {
  SystemParams p;
  p.N = 1000;
  p.L = 300;
  p.T = 4;
  p.p_a = 0.2;
  p.p_10 = 0.25;
  p.beta = 1.0;
  p.sigma2_w = 0.1;  // 10 dB
  CHECK(cell_id_for(p) == "snr=10;L=300;T=4;p11=0.75");
}

TEST_CASE("sweep expansion crosses all axes") {
  ExperimentConfig cfg = tiny_config();
  cfg.trials = 2;
  cfg.sweep.snr_db = {0.0, 5.0};
  cfg.sweep.T = {1, 2};
  const RunOutput out = run_experiment(cfg, true);
  // 2 snr x 2 T cells, 2 algorithms each.
  REQUIRE(out.aggregates.size() == 8);
  std::set<std::string> ids;
  for (const auto& a : out.aggregates) ids.insert(a.cell_id);
  CHECK(ids.size() == 4);
  for (const auto& a : out.aggregates) CHECK(a.trials == 2);
}
