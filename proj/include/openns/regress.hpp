#pragma once

#include <Eigen/Dense>
#include <string>

namespace openns {

struct WlsResult {
  Eigen::VectorXd coeffs;
  double condition = 0.0;   // pivot-ratio estimate from the normal equations
  bool degenerate = false;  // ridge fallback was taken
};

/// argmin_c sum_i w_i (x_i^T c - y_i)^2 via normal equations. Rank-deficient
/// systems fall back to a ridge solve scaled by trace(X^T W X) and set the
/// degenerate flag.
WlsResult weighted_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w, double ridge_factor = 1e-10);

/// Inputs for the two-stage fits. Carries the full per-episode series plus
/// the materialized stage rows; row ranges are 1-based inclusive episode
/// indices so the lag bookkeeping matches the estimator definitions.
struct RegressionProblem {
  int p = 0;     // lag order
  int n = 0;     // episodes in the source series
  int zdim = 0;  // instrument vector dimension

  Eigen::VectorXd j_hat;  // per-episode PDIS estimates (size n)
  Eigen::VectorXd rho;    // full-trajectory ratios (size n)
  Eigen::VectorXd g;      // observed returns (size n)
  Eigen::MatrixXd z;      // n x zdim instrument statistics

  int stage1_first = 0, stage1_last = 0;  // default p+1 .. n
  int stage2_first = 0, stage2_last = 0;  // default 2p .. n-1

  // Stage-1 rows (row r <-> episode stage1_first + r): lagged instruments
  // (Z_{i-p} .. Z_{i-1} flattened) regressed onto targets with the given
  // normalized weights.
  Eigen::MatrixXd instruments;
  Eigen::VectorXd targets_stage1;
  Eigen::VectorXd weights_stage1;

  // Stage-2 rows (row r <-> episode stage2_first + r).
  Eigen::VectorXd targets_stage2;
  Eigen::VectorXd weights_stage2;

  // Lagged noisy inputs for the naive fit, aligned with stage-2 rows.
  Eigen::MatrixXd inputs;
};

struct FitDiagnostics {
  double condition_stage1 = 0.0;
  double condition_stage2 = 0.0;
  bool degenerate_stage1 = false;
  bool degenerate_stage2 = false;
  bool weak_instrument = false;
};

/// Linear p-lag performance model. theta holds the p lag coefficients
/// (oldest to newest) followed by the intercept when fitted with one.
struct ArModel {
  int p = 0;
  bool intercept = true;
  Eigen::VectorXd theta;
  Eigen::VectorXd phi;       // stage-1 coefficients, p*zdim (+1 intercept)
  FitDiagnostics diagnostics;

  // Denoised performance values J-bar for episodes
  // [first_denoised .. first_denoised + denoised.size() - 1] (1-based).
  Eigen::VectorXd denoised;
  int first_denoised = 0;

  std::string to_json() const;
};

struct TwoStageOptions {
  bool intercept = true;
  double ridge_factor = 1e-10;
};

/// The OPEN parameter fit: stage 1 regresses returns on lagged instruments
/// (weights rho-bar) to denoise the performance series, stage 2 regresses the
/// next return on the denoised lags (weights rho-dagger).
ArModel two_stage_iv_fit(const RegressionProblem& problem, const TwoStageOptions& options = {});

/// Closed-form p=1 instrument estimate (Z1^T X2)^{-1} (Z1^T Lambda2 X3),
/// the consistency oracle for the two-stage fits. Uses the first instrument
/// component and the stage-2 row range of `problem`.
double closed_form_iv(const RegressionProblem& problem);

/// Builds the p=1 scalar-instrument problem in the exact form the
/// consistency analysis uses: instrument J-hat_{i-1}, stage-1 target
/// J-hat_i, stage-2 target rho_i * J-hat_{i+1}, uniform weights, and both
/// stages over the shared row range i = 2 .. n-1.
RegressionProblem make_scalar_iv_problem(const Eigen::VectorXd& j_hat, const Eigen::VectorXd& rho);

/// Fourier trend model over the normalized episode index x = i/n.
/// coefficients = [constant, sin(2*pi*x), cos(2*pi*x), ..., sin(2*pi*d*x),
/// cos(2*pi*d*x)], 2d+1 entries.
struct FourierModel {
  int d = 0;
  Eigen::VectorXd coefficients;
  double condition = 0.0;
  bool degenerate = false;

  std::string to_json() const;
};

Eigen::VectorXd fourier_features(double x, int d);

/// Weighted least squares of targets y_i on Fourier features of i/n.
/// Weights default to the normalized trajectory ratios when empty.
FourierModel prowls_fit(const Eigen::VectorXd& g, const Eigen::VectorXd& rho, int d,
                        const Eigen::VectorXd& weights = Eigen::VectorXd());

/// Evaluates the fitted basis at x = (n+k)/n for k = 1..L.
Eigen::VectorXd prowls_forecast(const FourierModel& model, int n, int L);

}  // namespace openns
