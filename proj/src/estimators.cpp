#include "openns/estimators.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "openns/errors.hpp"

namespace openns {

namespace {

double step_ratio(const Step& s, const Policy& pi) {
  if (!(s.behavior_prob > 0.0))
    throw Error(ErrorCode::ZeroBehaviorProb,
                "recorded behavior probability is zero; support assumption violated");
  return pi.prob(s.observation, s.action) / s.behavior_prob;
}

}  // namespace

double pdis_estimate(const EpisodeHistory& history, const Policy& pi) {
  double ratio = 1.0;
  double total = 0.0;
  for (const Step& s : history.steps) {
    ratio *= step_ratio(s, pi);
    total += ratio * s.reward;
  }
  return total;
}

double trajectory_ratio(const EpisodeHistory& history, const Policy& pi) {
  double ratio = 1.0;
  for (const Step& s : history.steps) ratio *= step_ratio(s, pi);
  return ratio;
}

double wis_estimate(const PerformanceSeries& series) {
  if (series.n == 0) throw Error(ErrorCode::InsufficientData, "empty series");
  const double mass = series.rho.sum();
  if (!(mass > 0.0))
    throw Error(ErrorCode::IneffectiveSample, "all importance ratios are zero");
  return series.rho.dot(series.g) / mass;
}

double swis_estimate(const PerformanceSeries& series, int window) {
  if (window <= 0) throw Error(ErrorCode::BadConfig, "window must be positive");
  if (window > series.n)
    throw Error(ErrorCode::InsufficientData, "window exceeds the number of episodes");
  const auto rho = series.rho.tail(window);
  const auto g = series.g.tail(window);
  const double mass = rho.sum();
  if (!(mass > 0.0))
    throw Error(ErrorCode::IneffectiveSample, "all windowed importance ratios are zero");
  return rho.dot(g) / mass;
}

PerformanceSeries build_performance_series(const Dataset& dataset, const Policy& pi) {
  PerformanceSeries s;
  s.n = static_cast<int>(dataset.size());
  s.g.resize(s.n);
  s.rho.resize(s.n);
  s.j_hat.resize(s.n);
  s.j_tilde.resize(s.n);
  s.z.resize(s.n, 2);

  double rho_prefix = 0.0;
  for (int idx = 0; idx < s.n; ++idx) {
    const EpisodeHistory& h = dataset.episodes[idx];
    s.g(idx) = h.observed_return();
    s.rho(idx) = trajectory_ratio(h, pi);
    s.j_hat(idx) = pdis_estimate(h, pi);

    // J-tilde_i = rho_i G_i / ((n/i) * sum_{k<=i} rho_k), prefix-only so the
    // statistic is causal in i.
    rho_prefix += s.rho(idx);
    const double i = static_cast<double>(idx + 1);
    const double denom = (static_cast<double>(s.n) / i) * rho_prefix;
    s.j_tilde(idx) = denom > 0.0 ? s.rho(idx) * s.g(idx) / denom : 0.0;

    s.z(idx, 0) = s.g(idx);
    s.z(idx, 1) = s.j_tilde(idx);
  }
  return s;
}

RegressionProblem build_regression_targets(const PerformanceSeries& series, int p) {
  if (p < 1) throw Error(ErrorCode::BadConfig, "lag order must be >= 1");
  const int n = series.n;
  if (n < 2 * p + 1)
    throw Error(ErrorCode::InsufficientData,
                "need at least 2p+1 episodes for the p-lag construction");

  RegressionProblem prob;
  prob.p = p;
  prob.n = n;
  prob.zdim = static_cast<int>(series.z.cols());
  prob.j_hat = series.j_hat;
  prob.rho = series.rho;
  prob.g = series.g;
  prob.z = series.z;
  prob.stage1_first = p + 1;
  prob.stage1_last = n;
  prob.stage2_first = 2 * p;
  prob.stage2_last = n - 1;

  const int rows1 = prob.stage1_last - prob.stage1_first + 1;
  prob.instruments.resize(rows1, p * prob.zdim);
  prob.targets_stage1.resize(rows1);
  prob.weights_stage1.resize(rows1);
  for (int r = 0; r < rows1; ++r) {
    const int i = prob.stage1_first + r;  // 1-based episode
    for (int k = 0; k < p; ++k) {
      const int lag_episode = i - p + k;  // Z_{i-p} .. Z_{i-1}
      for (int c = 0; c < prob.zdim; ++c)
        prob.instruments(r, k * prob.zdim + c) = series.z(lag_episode - 1, c);
    }
    prob.targets_stage1(r) = series.g(i - 1);
    prob.weights_stage1(r) = series.rho(i - 1);
  }
  const double mass1 = prob.weights_stage1.sum();
  if (!(mass1 > 0.0))
    throw Error(ErrorCode::ZeroWeightMass, "stage-1 importance weights are all zero");
  prob.weights_stage1 /= mass1;

  const int rows2 = prob.stage2_last - prob.stage2_first + 1;
  prob.targets_stage2.resize(rows2);
  prob.weights_stage2.resize(rows2);
  prob.inputs.resize(rows2, p);
  for (int r = 0; r < rows2; ++r) {
    const int i = prob.stage2_first + r;
    prob.targets_stage2(r) = series.g(i);            // G_{i+1}
    prob.weights_stage2(r) = series.rho(i - 1) * series.rho(i);
    for (int k = 0; k < p; ++k)
      prob.inputs(r, k) = series.j_hat(i - p + k);   // J-hat_{i-p+1} .. J-hat_i
  }
  const double mass2 = prob.weights_stage2.sum();
  if (mass2 < 1e-12)
    throw Error(ErrorCode::IneffectiveSample,
                "stage-2 weight mass below 1e-12; dataset carries no effective sample");
  prob.weights_stage2 /= mass2;
  return prob;
}

ArModel naive_ar_fit(const PerformanceSeries& series, int p, bool intercept) {
  if (p < 1) throw Error(ErrorCode::BadConfig, "lag order must be >= 1");
  const int n = series.n;
  if (n < p + 2)
    throw Error(ErrorCode::InsufficientData, "need at least p+2 episodes for the naive fit");

  const int rows = n - p;  // episodes i = p .. n-1 (1-based)
  const int cols = p + (intercept ? 1 : 0);
  Eigen::MatrixXd X(rows, cols);
  Eigen::VectorXd y(rows);
  for (int r = 0; r < rows; ++r) {
    const int i = p + r;
    for (int k = 0; k < p; ++k) X(r, k) = series.j_hat(i - p + k);
    if (intercept) X(r, p) = 1.0;
    y(r) = series.rho(i - 1) * series.j_hat(i);  // rho_i * J-hat_{i+1}
  }
  const Eigen::VectorXd w = Eigen::VectorXd::Constant(rows, 1.0 / rows);
  const WlsResult fit = weighted_least_squares(X, y, w, 1e-8);

  ArModel model;
  model.p = p;
  model.intercept = intercept;
  model.theta = fit.coeffs;
  model.diagnostics.condition_stage2 = fit.condition;
  model.diagnostics.degenerate_stage2 = fit.degenerate;
  return model;
}

std::string series_to_csv(const PerformanceSeries& series) {
  std::string out = "i,G,rho,j_hat,j_tilde\n";
  char buf[160];
  for (int idx = 0; idx < series.n; ++idx) {
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g,%.17g\n", idx + 1, series.g(idx),
                  series.rho(idx), series.j_hat(idx), series.j_tilde(idx));
    out += buf;
  }
  return out;
}

void save_series_csv(const PerformanceSeries& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << series_to_csv(series);
}

}  // namespace openns
