#include "openns/regress.hpp"

#include <cmath>

#include <nlohmann/json.hpp>

#include "openns/errors.hpp"

namespace openns {

WlsResult weighted_least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                                 const Eigen::VectorXd& w, double ridge_factor) {
  if (X.rows() != y.size() || X.rows() != w.size())
    throw Error(ErrorCode::DimensionMismatch, "rows(X), len(y), len(w) must agree");
  if (X.rows() == 0) throw Error(ErrorCode::InsufficientData, "empty system");
  if ((w.array() < 0.0).any()) throw Error(ErrorCode::BadConfig, "negative weight");
  const double mass = w.sum();
  if (!(mass > 0.0)) throw Error(ErrorCode::ZeroWeightMass, "weights sum to zero");

  const Eigen::MatrixXd Xw = w.asDiagonal() * X;
  Eigen::MatrixXd A = X.transpose() * Xw;
  const Eigen::VectorXd b = X.transpose() * (w.asDiagonal() * y);

  WlsResult result;
  Eigen::LDLT<Eigen::MatrixXd> ldlt(A);
  const Eigen::VectorXd d = ldlt.vectorD().cwiseAbs();
  const double dmax = d.maxCoeff();
  const double dmin = d.minCoeff();
  result.condition = dmin > 0.0 ? dmax / dmin : std::numeric_limits<double>::infinity();

  const bool singular = ldlt.info() != Eigen::Success || !(dmin > dmax * 1e-13) ||
                        !std::isfinite(dmax);
  if (!singular) {
    result.coeffs = ldlt.solve(b);
    if (result.coeffs.allFinite()) return result;
  }

  // Rank-deficient or numerically unstable: ridge fallback scaled by the
  // average diagonal mass.
  const double scale = A.trace() / static_cast<double>(A.cols());
  const double ridge = std::max(ridge_factor * scale, 1e-300);
  A.diagonal().array() += ridge;
  result.coeffs = Eigen::LDLT<Eigen::MatrixXd>(A).solve(b);
  result.degenerate = true;
  if (!result.coeffs.allFinite())
    throw Error(ErrorCode::SingularSystem, "normal equations unsolvable even with ridge");
  return result;
}

namespace {

void validate_problem(const RegressionProblem& prob) {
  if (prob.p < 1 || prob.n < 2 || prob.zdim < 1)
    throw Error(ErrorCode::BadConfig, "malformed regression problem");
  if (prob.stage1_first <= prob.p || prob.stage1_last > prob.n ||
      prob.stage1_first > prob.stage1_last)
    throw Error(ErrorCode::BadConfig, "stage-1 range out of bounds");
  if (prob.stage2_first - prob.p + 1 < prob.stage1_first || prob.stage2_last > prob.stage1_last ||
      prob.stage2_first > prob.stage2_last || prob.stage2_last > prob.n - 1)
    throw Error(ErrorCode::BadConfig, "stage-2 range out of bounds");
  const int rows1 = prob.stage1_last - prob.stage1_first + 1;
  const int rows2 = prob.stage2_last - prob.stage2_first + 1;
  if (prob.instruments.rows() != rows1 || prob.targets_stage1.size() != rows1 ||
      prob.weights_stage1.size() != rows1)
    throw Error(ErrorCode::DimensionMismatch, "stage-1 rows inconsistent");
  if (prob.targets_stage2.size() != rows2 || prob.weights_stage2.size() != rows2)
    throw Error(ErrorCode::DimensionMismatch, "stage-2 rows inconsistent");
  if (prob.instruments.cols() != prob.p * prob.zdim)
    throw Error(ErrorCode::DimensionMismatch, "instrument lag width mismatch");
}

}  // namespace

ArModel two_stage_iv_fit(const RegressionProblem& prob, const TwoStageOptions& options) {
  validate_problem(prob);
  const int rows1 = static_cast<int>(prob.instruments.rows());
  const int icols = static_cast<int>(prob.instruments.cols());

  Eigen::MatrixXd X1(rows1, icols + (options.intercept ? 1 : 0));
  X1.leftCols(icols) = prob.instruments;
  if (options.intercept) X1.col(icols).setOnes();

  const WlsResult stage1 =
      weighted_least_squares(X1, prob.targets_stage1, prob.weights_stage1, options.ridge_factor);

  ArModel model;
  model.p = prob.p;
  model.intercept = options.intercept;
  model.phi = stage1.coeffs;
  model.diagnostics.condition_stage1 = stage1.condition;
  model.diagnostics.degenerate_stage1 = stage1.degenerate;
  model.diagnostics.weak_instrument = stage1.degenerate || stage1.condition > 1e12;

  model.first_denoised = prob.stage1_first;
  model.denoised = X1 * stage1.coeffs;

  const int rows2 = prob.stage2_last - prob.stage2_first + 1;
  Eigen::MatrixXd X2(rows2, prob.p + (options.intercept ? 1 : 0));
  for (int r = 0; r < rows2; ++r) {
    const int i = prob.stage2_first + r;
    // lags J-bar_{i-p+1} .. J-bar_i, oldest first
    for (int k = 0; k < prob.p; ++k)
      X2(r, k) = model.denoised(i - prob.p + 1 + k - model.first_denoised);
    if (options.intercept) X2(r, prob.p) = 1.0;
  }
  const WlsResult stage2 =
      weighted_least_squares(X2, prob.targets_stage2, prob.weights_stage2, options.ridge_factor);
  model.theta = stage2.coeffs;
  model.diagnostics.condition_stage2 = stage2.condition;
  model.diagnostics.degenerate_stage2 = stage2.degenerate;
  return model;
}

double closed_form_iv(const RegressionProblem& prob) {
  validate_problem(prob);
  double zx = 0.0;   // Z_1^T X_2
  double zlx = 0.0;  // Z_1^T Lambda_2 X_3
  for (int i = prob.stage2_first; i <= prob.stage2_last; ++i) {
    const double instrument = prob.z(i - 2, 0);  // first component of Z_{i-1}
    zx += instrument * prob.j_hat(i - 1);
    zlx += instrument * prob.rho(i - 1) * prob.j_hat(i);
  }
  if (zx == 0.0)
    throw Error(ErrorCode::WeakInstrument,
                "instrument-regressor covariance is zero (relevance assumption violated)");
  return zlx / zx;
}

RegressionProblem make_scalar_iv_problem(const Eigen::VectorXd& j_hat,
                                         const Eigen::VectorXd& rho) {
  const int n = static_cast<int>(j_hat.size());
  if (rho.size() != n) throw Error(ErrorCode::DimensionMismatch, "j_hat/rho length mismatch");
  if (n < 3) throw Error(ErrorCode::InsufficientData, "need at least 3 episodes");

  RegressionProblem prob;
  prob.p = 1;
  prob.n = n;
  prob.zdim = 1;
  prob.j_hat = j_hat;
  prob.rho = rho;
  prob.g = j_hat;  // unused in this form
  prob.z = j_hat;
  prob.stage1_first = 2;
  prob.stage1_last = n - 1;
  prob.stage2_first = 2;
  prob.stage2_last = n - 1;

  const int rows = n - 2;
  prob.instruments.resize(rows, 1);
  prob.targets_stage1.resize(rows);
  prob.targets_stage2.resize(rows);
  prob.inputs.resize(rows, 1);
  for (int r = 0; r < rows; ++r) {
    const int i = 2 + r;
    prob.instruments(r, 0) = j_hat(i - 2);           // J-hat_{i-1}
    prob.targets_stage1(r) = j_hat(i - 1);           // J-hat_i
    prob.targets_stage2(r) = rho(i - 1) * j_hat(i);  // rho_i J-hat_{i+1}
    prob.inputs(r, 0) = j_hat(i - 1);
  }
  prob.weights_stage1 = Eigen::VectorXd::Constant(rows, 1.0 / rows);
  prob.weights_stage2 = Eigen::VectorXd::Constant(rows, 1.0 / rows);
  return prob;
}

Eigen::VectorXd fourier_features(double x, int d) {
  constexpr double kTwoPi = 6.283185307179586476925286766559;
  Eigen::VectorXd row(2 * d + 1);
  row(0) = 1.0;
  for (int k = 1; k <= d; ++k) {
    const double arg = kTwoPi * k * x;
    row(2 * k - 1) = std::sin(arg);
    row(2 * k) = std::cos(arg);
  }
  return row;
}

FourierModel prowls_fit(const Eigen::VectorXd& g, const Eigen::VectorXd& rho, int d,
                        const Eigen::VectorXd& weights) {
  const int n = static_cast<int>(g.size());
  if (d < 0) throw Error(ErrorCode::BadConfig, "Fourier order must be non-negative");
  if (2 * d + 1 >= n)
    throw Error(ErrorCode::InsufficientData, "Fourier basis larger than the sample");
  if (rho.size() != n) throw Error(ErrorCode::DimensionMismatch, "g/rho length mismatch");

  Eigen::VectorXd w;
  if (weights.size() == 0) {
    const double mass = rho.sum();
    if (!(mass > 0.0)) throw Error(ErrorCode::ZeroWeightMass, "all importance ratios are zero");
    w = rho / mass;
  } else {
    if (weights.size() != n) throw Error(ErrorCode::DimensionMismatch, "weights length mismatch");
    w = weights;
  }

  Eigen::MatrixXd X(n, 2 * d + 1);
  for (int idx = 0; idx < n; ++idx)
    X.row(idx) = fourier_features(static_cast<double>(idx + 1) / n, d).transpose();

  const WlsResult fit = weighted_least_squares(X, g, w);
  FourierModel model;
  model.d = d;
  model.coefficients = fit.coeffs;
  model.condition = fit.condition;
  model.degenerate = fit.degenerate;
  return model;
}

Eigen::VectorXd prowls_forecast(const FourierModel& model, int n, int L) {
  if (L < 1) throw Error(ErrorCode::BadConfig, "forecast length must be >= 1");
  Eigen::VectorXd out(L);
  for (int k = 1; k <= L; ++k) {
    const double x = static_cast<double>(n + k) / n;
    out(k - 1) = fourier_features(x, model.d).dot(model.coefficients);
  }
  return out;
}

namespace {

nlohmann::json diagnostics_json(const FitDiagnostics& d) {
  return {{"condition_stage1", d.condition_stage1},
          {"condition_stage2", d.condition_stage2},
          {"degenerate_stage1", d.degenerate_stage1},
          {"degenerate_stage2", d.degenerate_stage2},
          {"weak_instrument", d.weak_instrument}};
}

}  // namespace

std::string ArModel::to_json() const {
  nlohmann::json j;
  j["p"] = p;
  j["intercept"] = intercept;
  j["theta"] = std::vector<double>(theta.data(), theta.data() + theta.size());
  j["phi"] = std::vector<double>(phi.data(), phi.data() + phi.size());
  j["diagnostics"] = diagnostics_json(diagnostics);
  return j.dump();
}

std::string FourierModel::to_json() const {
  nlohmann::json j;
  j["d"] = d;
  j["coefficients"] =
      std::vector<double>(coefficients.data(), coefficients.data() + coefficients.size());
  j["diagnostics"] = {{"condition", condition}, {"degenerate", degenerate}};
  return j.dump();
}

}  // namespace openns
