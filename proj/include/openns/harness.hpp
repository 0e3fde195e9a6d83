#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "openns/env.hpp"
#include "openns/forecast.hpp"

namespace openns {

struct ExperimentConfig {
  EnvConfig env;
  int n_episodes = 2000;
  int L = 200;
  int n_trials = 30;
  int n_future_clones = 30;
  std::vector<Algorithm> algorithms = {Algorithm::OPEN, Algorithm::ProWLS, Algorithm::WIS,
                                       Algorithm::SWIS, Algorithm::NaiveAR};
  AlgoParams algo;
  std::string pi_preset = "robotoy_run_heavy(0.8)";
  std::string beta_preset = "robotoy_behavior";
  std::vector<double> speeds = {0.0, 1.0, 2.0, 3.0};
  std::uint64_t base_seed = 1;
  int jobs = 0;  // 0 = hardware concurrency

  /// Checks the hyper-parameter envelope (p < n/2, window <= n, 2d+1 < n)
  /// and that every shipped (pi, beta) pair keeps a finite support ratio.
  void validate() const;
};

struct ResultRow {
  std::string domain;
  double speed = 0.0;
  std::string algorithm;
  int trial = 0;
  double predicted = 0.0;
  double truth = 0.0;
  double error = 0.0;
  std::string flags;  // semicolon-joined diagnostics or the failure taxonomy
  bool ok = false;
};

struct AggregateRow {
  std::string domain;
  double speed = 0.0;
  std::string algorithm;
  double abs_bias = 0.0;
  double mse = 0.0;
  double se_bias = 0.0;
  double se_mse = 0.0;
  int n_ok = 0;
  int n_failed = 0;
};

struct SweepResult {
  std::vector<ResultRow> rows;
  std::vector<AggregateRow> aggregates;

  std::string to_results_csv() const;  // domain,speed,algorithm,trial,predicted,truth,error,flags
  std::string to_summary_csv() const;  // domain,speed,algorithm,abs_bias,mse,se_bias,se_mse,n_ok,n_failed
};

std::vector<AggregateRow> aggregate_rows(const std::vector<ResultRow>& rows);

/// Runs n episodes of `beta` from a fresh environment; returns the logged
/// dataset and the post-meta-transition snapshot used for ground truth.
std::pair<Dataset, std::string> collect(const EnvConfig& env_config, const Policy& beta, int n);

struct GroundTruth {
  double value = 0.0;  // mean over clones of sum_{k=1..L} G_k under pi
  double se = 0.0;     // per-clone standard error
};

GroundTruth ground_truth(const std::string& env_snapshot, const Policy& pi, int L,
                         int n_future_clones, std::uint64_t seed);

/// speeds x trials grid: collect under beta, predict with every algorithm,
/// compare against clone-based ground truth. Per-cell failures become typed
/// failure rows. Deterministic given base_seed; parallel over cells.
SweepResult run_sweep(const ExperimentConfig& config);

enum class AblationParam { OpenP, ProwlsD };

struct AblationResult {
  AblationParam param{};
  std::vector<double> values;
  std::vector<SweepResult> per_value;  // same order as values

  /// Single long-format table; algorithm names carry an "@param=value" suffix.
  std::string to_results_csv() const;
};

AblationResult ablation_sweep(const ExperimentConfig& config, AblationParam param,
                              const std::vector<double>& values);

}  // namespace openns
