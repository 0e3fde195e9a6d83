#pragma once

#include <string>

#include "openns/policy.hpp"
#include "openns/regress.hpp"
#include "openns/types.hpp"

namespace openns {

/// Per-episode off-policy statistics for a fixed evaluation policy:
/// observed return G_i, full-trajectory ratio rho_i, PDIS estimate J-hat_i,
/// the prefix-normalized estimate J-tilde_i, and the instrument Z_i =
/// [G_i, J-tilde_i].
struct PerformanceSeries {
  int n = 0;
  Eigen::VectorXd g;
  Eigen::VectorXd rho;
  Eigen::VectorXd j_hat;
  Eigen::VectorXd j_tilde;
  Eigen::MatrixXd z;  // n x 2
};

/// Per-decision importance sampling estimate: sum_t (prod_{j<=t} pi/beta) R_t.
double pdis_estimate(const EpisodeHistory& history, const Policy& pi);

/// Full-trajectory importance ratio rho = prod_t pi/beta.
double trajectory_ratio(const EpisodeHistory& history, const Policy& pi);

/// Self-normalized estimate (sum rho_i G_i) / (sum rho_i).
double wis_estimate(const PerformanceSeries& series);

/// wis_estimate restricted to the last `window` episodes.
double swis_estimate(const PerformanceSeries& series, int window);

PerformanceSeries build_performance_series(const Dataset& dataset, const Policy& pi);

/// Assembles the two-stage regression inputs from a series: stage-1 rows
/// (lagged Z -> G_i, weights rho-bar) for episodes p+1..n and stage-2 rows
/// (-> G_{i+1}, weights rho-dagger) for episodes 2p..n-1.
RegressionProblem build_regression_targets(const PerformanceSeries& series, int p);

/// Least-squares of rho_i * J-hat_{i+1} on the raw noisy lags; kept as the
/// attenuation-bias baseline.
ArModel naive_ar_fit(const PerformanceSeries& series, int p, bool intercept = true);

/// CSV rows: i,G,rho,j_hat,j_tilde
std::string series_to_csv(const PerformanceSeries& series);
void save_series_csv(const PerformanceSeries& series, const std::string& path);

}  // namespace openns
