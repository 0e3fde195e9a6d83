#include "openns/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <thread>

#include "openns/errors.hpp"

namespace openns {

namespace {

constexpr std::uint64_t kCollectTag = 0xDA7A5EEDULL;
constexpr std::uint64_t kTruthTag = 0x7291CE11ULL;

std::string join_flags(const std::vector<std::string>& flags) {
  std::string out;
  for (const auto& f : flags) {
    if (!out.empty()) out += ';';
    out += f;
  }
  return out;
}

std::string fmt_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (n_episodes < 1 || L < 1 || n_trials < 1 || n_future_clones < 1)
    throw Error(ErrorCode::BadConfig, "episodes, L, trials, clones must be positive");
  if (algorithms.empty()) throw Error(ErrorCode::BadConfig, "no algorithms configured");
  for (Algorithm a : algorithms) {
    if (a == Algorithm::OPEN && !(algo.open_p < n_episodes / 2))
      throw Error(ErrorCode::BadConfig, "open.p must satisfy p < n_episodes/2");
    if (a == Algorithm::SWIS && algo.swis_window > n_episodes)
      throw Error(ErrorCode::BadConfig, "swis.window must satisfy window <= n_episodes");
    if (a == Algorithm::ProWLS && !(2 * algo.prowls_d + 1 < n_episodes))
      throw Error(ErrorCode::BadConfig, "prowls.d must satisfy 2d+1 < n_episodes");
    if (a == Algorithm::NaiveAR && !(algo.naive_p + 2 <= n_episodes))
      throw Error(ErrorCode::BadConfig, "naive.p must satisfy p + 2 <= n_episodes");
  }
  const Policy pi = Policy::preset(pi_preset);
  const Policy beta = Policy::preset(beta_preset);
  if (!std::isfinite(support_ratio_bound(pi, beta)))
    throw Error(ErrorCode::BadConfig,
                "behavior policy lacks support where the evaluation policy needs it");
  for (double s : speeds) {
    if (!(s >= 0.0)) throw Error(ErrorCode::BadConfig, "speeds must be non-negative");
  }
}

std::pair<Dataset, std::string> collect(const EnvConfig& env_config, const Policy& beta, int n) {
  if (n < 0) throw Error(ErrorCode::BadConfig, "episode count must be non-negative");
  auto env = env_create(env_config);
  Dataset data;
  data.episodes.reserve(n);
  for (int i = 0; i < n; ++i) {
    const std::uint64_t ep_seed = derive_seed(env_config.seed, kCollectTag, i);
    data.episodes.push_back(env->run_episode(beta, ep_seed));
  }
  return {std::move(data), snapshot(*env)};
}

GroundTruth ground_truth(const std::string& env_snapshot, const Policy& pi, int L,
                         int n_future_clones, std::uint64_t seed) {
  if (L < 1 || n_future_clones < 1)
    throw Error(ErrorCode::BadConfig, "L and clone count must be positive");
  std::vector<double> totals(n_future_clones);
  for (int c = 0; c < n_future_clones; ++c) {
    auto env = restore(env_snapshot);
    double total = 0.0;
    for (int k = 0; k < L; ++k) {
      const EpisodeHistory h = env->run_episode(pi, derive_seed(seed, c, k));
      total += h.observed_return();
    }
    totals[c] = total;
  }
  GroundTruth gt;
  for (double t : totals) gt.value += t;
  gt.value /= n_future_clones;
  if (n_future_clones > 1) {
    double ss = 0.0;
    for (double t : totals) ss += (t - gt.value) * (t - gt.value);
    gt.se = std::sqrt(ss / (n_future_clones - 1) / n_future_clones);
  }
  return gt;
}

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows) {
  std::map<std::tuple<std::string, double, std::string>, std::vector<const ResultRow*>> cells;
  for (const auto& r : rows) cells[{r.domain, r.speed, r.algorithm}].push_back(&r);

  std::vector<AggregateRow> out;
  for (const auto& [key, cell] : cells) {
    AggregateRow a;
    a.domain = std::get<0>(key);
    a.speed = std::get<1>(key);
    a.algorithm = std::get<2>(key);
    std::vector<double> errors;
    for (const ResultRow* r : cell) {
      if (r->ok) {
        errors.push_back(r->error);
      } else {
        ++a.n_failed;
      }
    }
    a.n_ok = static_cast<int>(errors.size());
    if (a.n_ok > 0) {
      double mean = 0.0, mean_sq = 0.0;
      for (double e : errors) {
        mean += e;
        mean_sq += e * e;
      }
      mean /= a.n_ok;
      mean_sq /= a.n_ok;
      a.abs_bias = std::abs(mean);
      a.mse = mean_sq;
      if (a.n_ok > 1) {
        double var_e = 0.0, var_sq = 0.0;
        for (double e : errors) {
          var_e += (e - mean) * (e - mean);
          var_sq += (e * e - mean_sq) * (e * e - mean_sq);
        }
        a.se_bias = std::sqrt(var_e / (a.n_ok - 1) / a.n_ok);
        a.se_mse = std::sqrt(var_sq / (a.n_ok - 1) / a.n_ok);
      }
    } else {
      a.abs_bias = std::numeric_limits<double>::quiet_NaN();
      a.mse = std::numeric_limits<double>::quiet_NaN();
    }
    out.push_back(std::move(a));
  }
  return out;
}

SweepResult run_sweep(const ExperimentConfig& config) {
  config.validate();
  const Policy pi = Policy::preset(config.pi_preset);
  const Policy beta = Policy::preset(config.beta_preset);

  AlgoParams params = config.algo;
  params.L = config.L;

  const int n_cells = static_cast<int>(config.speeds.size()) * config.n_trials;
  const int n_algos = static_cast<int>(config.algorithms.size());
  std::vector<ResultRow> rows(static_cast<std::size_t>(n_cells) * n_algos);

  auto run_cell = [&](int cell) {
    const int speed_idx = cell / config.n_trials;
    const int trial = cell % config.n_trials;
    EnvConfig ec = config.env;
    ec.speed = config.speeds[speed_idx];
    // Trial seeds are independent of speed and algorithm, so sweeps stay
    // paired across speeds and adding algorithms never shifts the draws.
    ec.seed = derive_seed(config.base_seed, trial);

    auto [dataset, snap] = collect(ec, beta, config.n_episodes);
    const GroundTruth truth = ground_truth(snap, pi, config.L, config.n_future_clones,
                                           derive_seed(config.base_seed, trial, kTruthTag));

    for (int ai = 0; ai < n_algos; ++ai) {
      ResultRow& row = rows[static_cast<std::size_t>(cell) * n_algos + ai];
      row.domain = domain_name(ec.domain);
      row.speed = ec.speed;
      row.algorithm = algorithm_name(config.algorithms[ai]);
      row.trial = trial;
      row.truth = truth.value;
      try {
        Forecast fc = predict(config.algorithms[ai], dataset, pi, params);
        row.predicted = fc.total;
        row.error = fc.total - truth.value;
        row.flags = join_flags(fc.flags);
        row.ok = true;
      } catch (const Error& e) {
        row.predicted = std::numeric_limits<double>::quiet_NaN();
        row.error = std::numeric_limits<double>::quiet_NaN();
        row.flags = error_code_name(e.code());
        row.ok = false;
      }
    }
  };

  int jobs = config.jobs > 0 ? config.jobs
                             : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::max(1, std::min(jobs, n_cells));
  if (jobs == 1) {
    for (int cell = 0; cell < n_cells; ++cell) run_cell(cell);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> workers;
    workers.reserve(jobs);
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&]() {
        for (int cell = next.fetch_add(1); cell < n_cells; cell = next.fetch_add(1))
          run_cell(cell);
      });
    }
    for (auto& t : workers) t.join();
  }

  SweepResult result;
  result.rows = std::move(rows);
  result.aggregates = aggregate_rows(result.rows);
  return result;
}

AblationResult ablation_sweep(const ExperimentConfig& config, AblationParam param,
                              const std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorCode::BadConfig, "ablation needs at least one value");
  AblationResult result;
  result.param = param;
  result.values = values;
  for (double v : values) {
    ExperimentConfig cfg = config;  // shared base_seed keeps comparisons paired
    if (param == AblationParam::OpenP) {
      cfg.algo.open_p = static_cast<int>(v);
    } else {
      cfg.algo.prowls_d = static_cast<int>(v);
    }
    result.per_value.push_back(run_sweep(cfg));
  }
  return result;
}

std::string SweepResult::to_results_csv() const {
  std::string out = "domain,speed,algorithm,trial,predicted,truth,error,flags\n";
  for (const auto& r : rows) {
    out += r.domain;
    out += ',' + fmt_double(r.speed);
    out += ',' + r.algorithm;
    out += ',' + std::to_string(r.trial);
    out += ',' + fmt_double(r.predicted);
    out += ',' + fmt_double(r.truth);
    out += ',' + fmt_double(r.error);
    out += ',' + r.flags + '\n';
  }
  return out;
}

std::string SweepResult::to_summary_csv() const {
  std::string out = "domain,speed,algorithm,abs_bias,mse,se_bias,se_mse,n_ok,n_failed\n";
  for (const auto& a : aggregates) {
    out += a.domain;
    out += ',' + fmt_double(a.speed);
    out += ',' + a.algorithm;
    out += ',' + fmt_double(a.abs_bias);
    out += ',' + fmt_double(a.mse);
    out += ',' + fmt_double(a.se_bias);
    out += ',' + fmt_double(a.se_mse);
    out += ',' + std::to_string(a.n_ok);
    out += ',' + std::to_string(a.n_failed) + '\n';
  }
  return out;
}

std::string AblationResult::to_results_csv() const {
  const char* pname = param == AblationParam::OpenP ? "open_p" : "prowls_d";
  std::string out = "domain,speed,algorithm,trial,predicted,truth,error,flags\n";
  for (std::size_t vi = 0; vi < values.size(); ++vi) {
    char suffix[48];
    std::snprintf(suffix, sizeof(suffix), "@%s=%g", pname, values[vi]);
    for (const auto& r : per_value[vi].rows) {
      out += r.domain;
      out += ',' + fmt_double(r.speed);
      out += ',' + r.algorithm + suffix;
      out += ',' + std::to_string(r.trial);
      out += ',' + fmt_double(r.predicted);
      out += ',' + fmt_double(r.truth);
      out += ',' + fmt_double(r.error);
      out += ',' + r.flags + '\n';
    }
  }
  return out;
}

}  // namespace openns
