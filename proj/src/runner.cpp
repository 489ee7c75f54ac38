#include "runner.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "errors.hpp"
#include "rng.hpp"

namespace hygampdcs {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (int i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::exception_ptr err;
  std::mutex err_mu;
  auto worker = [&]() {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  const int k = std::min(threads, n);
  pool.reserve(k);
  for (int i = 0; i < k; ++i) pool.emplace_back(worker);
  for (auto& t : pool) t.join();
  if (err) std::rethrow_exception(err);
}

std::pair<double, double> mean_se(const std::vector<double>& v) {
  if (v.empty()) return {kNaN, kNaN};
  double m = 0.0;
  for (double x : v) m += x;
  m /= static_cast<double>(v.size());
  if (v.size() < 2) return {m, kNaN};
  double s2 = 0.0;
  for (double x : v) s2 += (x - m) * (x - m);
  s2 /= static_cast<double>(v.size() - 1);
  return {m, std::sqrt(s2 / static_cast<double>(v.size()))};
}

std::vector<SystemParams> expand_cells(const ExperimentConfig& cfg,
                                       bool expand_sweep) {
  std::vector<SystemParams> cells;
  if (!expand_sweep) {
    cells.push_back(cfg.system);
    return cells;
  }
  const std::vector<double> snrs =
      cfg.sweep.snr_db.empty() ? std::vector<double>{cfg.system.snr_db()}
                               : cfg.sweep.snr_db;
  const std::vector<int> ls =
      cfg.sweep.L.empty() ? std::vector<int>{cfg.system.L} : cfg.sweep.L;
  const std::vector<int> ts =
      cfg.sweep.T.empty() ? std::vector<int>{cfg.system.T} : cfg.sweep.T;
  const std::vector<double> p11s =
      cfg.sweep.p_11.empty() ? std::vector<double>{1.0 - cfg.system.p_10}
                             : cfg.sweep.p_11;
  for (double snr : snrs)
    for (int l : ls)
      for (int t : ts)
        for (double p11 : p11s) {
          SystemParams p = cfg.system;
          p.sigma2_w = SystemParams::sigma2_for_snr_db(p.beta, snr);
          p.L = l;
          p.T = t;
          p.p_10 = 1.0 - p11;
          try {
            p.validate();
          } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("invalid sweep cell: ") + e.what());
          }
          cells.push_back(p);
        }
  return cells;
}

struct AlgoRun {
  EstimationResult est;
  bool diverged = false;
  double ms = 0.0;
};

AlgoRun run_algo(Algorithm algo, const CMat& Y, const CMat& A,
                 const SystemParams& p, const SolverOptions& solver,
                 double snr0_db, bool noise_term_sigma2) {
  AlgoRun out;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    switch (algo) {
      case Algorithm::HygampDcs:
        out.est = run_hygamp_dcs(Y, A, p, solver);
        break;
      case Algorithm::ForwardOnly:
        out.est = run_forward_only(Y, A, p, solver);
        break;
      case Algorithm::GampBaseline:
        out.est = run_gamp_baseline(Y, A, p, solver);
        break;
      case Algorithm::EmHygampDcs: {
        const EmInit ini = init_hyperparams(Y, A, snr0_db, noise_term_sigma2);
        out.est = run_em_hygamp_dcs(Y, A, ini.hyp, solver).est;
        break;
      }
    }
  } catch (const DivergenceError&) {
    out.diverged = true;
  }
  const auto t1 = std::chrono::steady_clock::now();
  out.ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  return out;
}

}  // namespace

std::string cell_id_for(const SystemParams& p) {
  std::ostringstream ss;
  ss << "snr=" << fmt_short(p.snr_db()) << ";L=" << p.L << ";T=" << p.T
     << ";p11=" << fmt_short(1.0 - p.p_10);
  return ss.str();
}

double calibrate_power_threshold(const ExperimentConfig& cfg,
                                 const SystemParams& cell,
                                 std::size_t cell_index, Algorithm algo,
                                 double snr0_db, int calibration_trials) {
  std::vector<std::pair<double, std::uint8_t>> pool;
  for (int j = 0; j < calibration_trials; ++j) {
    const std::uint64_t tm = stream_seed(
        cfg.seed, "calibrate", (static_cast<std::uint64_t>(cell_index) << 32) |
                                   static_cast<std::uint64_t>(j));
    const CMat A = generate_pilots(cell, tm);
    const GroundTruth truth = sample_ground_truth(cell, tm);
    const CMat Y = synthesize_received(A, truth, cell, tm);
    const AlgoRun r = run_algo(algo, Y, A, cell, cfg.solver, snr0_db,
                               cfg.em.init_beta_noise_sigma2);
    if (r.diverged) continue;
    for (Eigen::Index t = 0; t < cell.T; ++t)
      for (Eigen::Index n = 0; n < cell.N; ++n)
        pool.emplace_back(std::norm(r.est.x_hat(n, t)), truth.activity(n, t));
  }
  if (pool.empty()) return cfg.system.beta;  // degenerate; unused downstream
  return min_error_threshold(std::move(pool));
}

double min_error_threshold(std::vector<std::pair<double, std::uint8_t>> pool) {
  std::sort(pool.begin(), pool.end(),
            [](const auto& a, const auto& b) { return a.first > b.first; });

  long misses = 0, fas = 0;
  for (const auto& e : pool) misses += e.second ? 1 : 0;
  long best_err = misses;
  double best_thr = pool.front().first * 2.0 + 1.0;  // detects nothing
  std::size_t i = 0;
  while (i < pool.size()) {
    std::size_t j = i;
    while (j < pool.size() && pool[j].first == pool[i].first) {
      if (pool[j].second)
        --misses;
      else
        ++fas;
      ++j;
    }
    const long err = misses + fas;
    if (err < best_err) {
      best_err = err;
      const double hi = pool[i].first;
      const double lo = j < pool.size() ? pool[j].first : 0.0;
      best_thr = j < pool.size() ? 0.5 * (hi + lo) : 0.5 * hi;
    }
    i = j;
  }
  return best_thr;
}

RunOutput run_experiment(const ExperimentConfig& cfg, bool expand_sweep) {
  const std::vector<SystemParams> cells = expand_cells(cfg, expand_sweep);
  const int n_algos = static_cast<int>(cfg.algorithms.size());
  RunOutput out;

  const bool has_em =
      std::count(cfg.algorithms.begin(), cfg.algorithms.end(),
                 Algorithm::EmHygampDcs) > 0;

  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    const SystemParams& cell = cells[ci];
    const std::string cid = cell_id_for(cell);

    double snr0_db = cfg.em.snr0_db;
    if (has_em && cfg.em.auto_snr0) {
      SeOptions opts;
      opts.samples = cfg.se.samples;
      opts.max_iterations = cfg.se.max_iterations;
      snr0_db = select_snr0(cell, cfg.em.snr0_grid_db,
                            cfg.em.init_beta_noise_sigma2, opts,
                            stream_seed(cfg.seed, "snr0-select", ci))
                    .snr0_db;
    }

    double threshold = cfg.detection.threshold;
    if (cfg.detection.auto_threshold)
      threshold = calibrate_power_threshold(cfg, cell, ci,
                                            cfg.algorithms.front(), snr0_db);

    std::vector<TrialRecord> recs(
        static_cast<std::size_t>(cfg.trials) * n_algos);
    parallel_for(cfg.trials, cfg.threads, [&](int j) {
      const std::uint64_t tm = stream_seed(
          cfg.seed, "trial",
          (static_cast<std::uint64_t>(ci) << 32) | static_cast<std::uint64_t>(j));
      const CMat A = generate_pilots(cell, tm);
      const GroundTruth truth = sample_ground_truth(cell, tm);
      const CMat Y = synthesize_received(A, truth, cell, tm);
      for (int k = 0; k < n_algos; ++k) {
        const Algorithm algo = cfg.algorithms[static_cast<std::size_t>(k)];
        const AlgoRun r = run_algo(algo, Y, A, cell, cfg.solver, snr0_db,
                                   cfg.em.init_beta_noise_sigma2);
        TrialRecord rec;
        rec.cell_id = cid;
        rec.algo = algorithm_name(algo);
        rec.seed = tm;
        rec.snr_db = cell.snr_db();
        rec.L = cell.L;
        rec.N = cell.N;
        rec.T = cell.T;
        rec.p_a = cell.p_a;
        rec.p_10 = cell.p_10;
        rec.iterations = r.est.iterations;
        rec.converged = r.est.converged;
        rec.runtime_ms = r.ms;
        if (r.diverged) {
          rec.tnmse_db = kNaN;
          rec.taer = kNaN;
        } else {
          rec.tnmse_db = tnmse_db(r.est.x_hat, truth.signal);
          const ByteMat det = detect_activity(r.est.kappa, r.est.x_hat,
                                              cfg.detection.rule, threshold);
          rec.taer = taer(det, truth.activity);
        }
        recs[static_cast<std::size_t>(j) * n_algos + k] = std::move(rec);
      }
    });

    for (int k = 0; k < n_algos; ++k) {
      CellAggregate agg;
      agg.cell_id = cid;
      agg.algo = algorithm_name(cfg.algorithms[static_cast<std::size_t>(k)]);
      agg.trials = cfg.trials;
      agg.snr_db = cell.snr_db();
      agg.L = cell.L;
      agg.N = cell.N;
      agg.T = cell.T;
      agg.p_a = cell.p_a;
      agg.p_10 = cell.p_10;
      std::vector<double> tn, ta, iters, rts;
      int diverged = 0, conv = 0;
      for (int j = 0; j < cfg.trials; ++j) {
        const TrialRecord& r = recs[static_cast<std::size_t>(j) * n_algos + k];
        if (std::isnan(r.taer))
          ++diverged;
        else
          ta.push_back(r.taer);
        if (!std::isnan(r.tnmse_db)) tn.push_back(r.tnmse_db);
        iters.push_back(r.iterations);
        rts.push_back(r.runtime_ms);
        if (r.converged) ++conv;
      }
      agg.diverged = diverged;
      std::tie(agg.mean_tnmse_db, agg.se_tnmse_db) = mean_se(tn);
      agg.tnmse_trials = static_cast<int>(tn.size());
      std::tie(agg.mean_taer, agg.se_taer) = mean_se(ta);
      agg.mean_iterations = mean_se(iters).first;
      agg.converged_fraction =
          static_cast<double>(conv) / static_cast<double>(cfg.trials);
      agg.mean_runtime_ms = mean_se(rts).first;
      out.aggregates.push_back(std::move(agg));
    }
    out.records.insert(out.records.end(),
                       std::make_move_iterator(recs.begin()),
                       std::make_move_iterator(recs.end()));
  }
  return out;
}

bool all_diverged(const std::vector<TrialRecord>& records) {
  if (records.empty()) return false;
  for (const auto& r : records)
    if (!std::isnan(r.taer)) return false;
  return true;
}

static const char* kRecordHeader =
    "cell_id,algo,seed,snr_db,L,N,T,p_a,p_10,iterations,converged,tnmse_db,"
    "taer,runtime_ms";

std::string records_csv(const std::vector<TrialRecord>& records) {
  std::ostringstream ss;
  ss << kRecordHeader << "\n";
  for (const auto& r : records) {
    ss << r.cell_id << ',' << r.algo << ',' << r.seed << ','
       << fmt_double(r.snr_db) << ',' << r.L << ',' << r.N << ',' << r.T << ','
       << fmt_double(r.p_a) << ',' << fmt_double(r.p_10) << ',' << r.iterations
       << ',' << (r.converged ? 1 : 0) << ',' << fmt_double(r.tnmse_db) << ','
       << fmt_double(r.taer) << ',' << fmt_double(r.runtime_ms) << "\n";
  }
  return ss.str();
}

std::vector<TrialRecord> parse_records_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader)
    throw std::invalid_argument("unexpected CSV header");
  std::vector<TrialRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    for (;;) {
      const std::size_t pos = line.find(',', start);
      if (pos == std::string::npos) {
        f.push_back(line.substr(start));
        break;
      }
      f.push_back(line.substr(start, pos - start));
      start = pos + 1;
    }
    if (f.size() != 14) throw std::invalid_argument("malformed CSV row");
    TrialRecord r;
    r.cell_id = f[0];
    r.algo = f[1];
    r.seed = std::stoull(f[2]);
    r.snr_db = std::stod(f[3]);
    r.L = std::stoi(f[4]);
    r.N = std::stoi(f[5]);
    r.T = std::stoi(f[6]);
    r.p_a = std::stod(f[7]);
    r.p_10 = std::stod(f[8]);
    r.iterations = std::stoi(f[9]);
    r.converged = std::stoi(f[10]) != 0;
    r.tnmse_db = std::stod(f[11]);
    r.taer = std::stod(f[12]);
    r.runtime_ms = std::stod(f[13]);
    out.push_back(std::move(r));
  }
  return out;
}

std::string aggregates_csv(const std::vector<CellAggregate>& aggs) {
  std::ostringstream ss;
  ss << "cell_id,algo,trials,diverged,snr_db,L,N,T,p_a,p_10,mean_tnmse_db,"
        "se_tnmse_db,tnmse_trials,mean_taer,se_taer,mean_iterations,"
        "converged_fraction,mean_runtime_ms\n";
  for (const auto& a : aggs) {
    ss << a.cell_id << ',' << a.algo << ',' << a.trials << ',' << a.diverged
       << ',' << fmt_double(a.snr_db) << ',' << a.L << ',' << a.N << ',' << a.T
       << ',' << fmt_double(a.p_a) << ',' << fmt_double(a.p_10) << ','
       << fmt_double(a.mean_tnmse_db) << ',' << fmt_double(a.se_tnmse_db) << ','
       << a.tnmse_trials << ',' << fmt_double(a.mean_taer) << ','
       << fmt_double(a.se_taer) << ',' << fmt_double(a.mean_iterations) << ','
       << fmt_double(a.converged_fraction) << ','
       << fmt_double(a.mean_runtime_ms) << "\n";
  }
  return ss.str();
}

std::string summarize(const std::vector<CellAggregate>& aggs) {
  std::ostringstream ss;
  for (const auto& a : aggs) {
    ss << a.cell_id << " " << a.algo << ": tnmse=" << fmt_short(a.mean_tnmse_db)
       << " dB (se " << fmt_short(a.se_tnmse_db) << ", n=" << a.tnmse_trials
       << ")  taer=" << fmt_short(a.mean_taer) << " (se "
       << fmt_short(a.se_taer) << ")  iters=" << fmt_short(a.mean_iterations)
       << "  converged=" << fmt_short(a.converged_fraction * 100.0) << "%";
    if (a.diverged > 0) ss << "  DIVERGED=" << a.diverged << "/" << a.trials;
    ss << "\n";
  }
  return ss.str();
}

}  // namespace hygampdcs
