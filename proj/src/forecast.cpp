#include "openns/forecast.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include <nlohmann/json.hpp>

#include "openns/errors.hpp"

namespace openns {

const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::OPEN: return "OPEN";
    case Algorithm::ProWLS: return "Pro-WLS";
    case Algorithm::WIS: return "WIS";
    case Algorithm::SWIS: return "SWIS";
    case Algorithm::NaiveAR: return "NaiveAR";
  }
  return "unknown";
}

Algorithm algorithm_from_name(const std::string& name) {
  if (name == "OPEN" || name == "open") return Algorithm::OPEN;
  if (name == "Pro-WLS" || name == "prowls" || name == "pro-wls") return Algorithm::ProWLS;
  if (name == "WIS" || name == "wis") return Algorithm::WIS;
  if (name == "SWIS" || name == "swis") return Algorithm::SWIS;
  if (name == "NaiveAR" || name == "naive_ar" || name == "naive") return Algorithm::NaiveAR;
  throw Error(ErrorCode::BadConfig, "unknown algorithm '" + name + "'");
}

Forecast rollout(const ArModel& model, std::vector<double> seed_lags, int L,
                 double clip_magnitude) {
  if (static_cast<int>(seed_lags.size()) != model.p)
    throw Error(ErrorCode::DimensionMismatch, "seed lags must match the model order");
  if (L < 1) throw Error(ErrorCode::BadConfig, "forecast length must be >= 1");
  if (!model.theta.allFinite())
    throw Error(ErrorCode::NonFinite, "model coefficients are not finite");
  for (double v : seed_lags) {
    if (!std::isfinite(v)) throw Error(ErrorCode::NonFinite, "seed lag is not finite");
  }

  Forecast fc;
  fc.per_episode.reserve(L);
  bool clipped = false;
  for (int k = 0; k < L; ++k) {
    double next = model.intercept ? model.theta(model.p) : 0.0;
    for (int j = 0; j < model.p; ++j) next += model.theta(j) * seed_lags[j];
    if (!std::isfinite(next) || std::abs(next) > clip_magnitude) {
      next = std::clamp(std::isfinite(next) ? next : clip_magnitude, -clip_magnitude,
                        clip_magnitude);
      clipped = true;
    }
    fc.per_episode.push_back(next);
    seed_lags.erase(seed_lags.begin());
    seed_lags.push_back(next);
  }
  if (clipped) fc.flags.push_back("divergent-forecast");
  fc.total = 0.0;
  for (double v : fc.per_episode) fc.total += v;
  return fc;
}

namespace {

Forecast flat_forecast(double value, int L) {
  Forecast fc;
  fc.per_episode.assign(L, value);
  fc.total = value * L;
  return fc;
}

}  // namespace

Forecast predict(Algorithm algorithm, const Dataset& dataset, const Policy& pi,
                 const AlgoParams& params) {
  if (params.L < 1) throw Error(ErrorCode::BadConfig, "L must be >= 1");
  const PerformanceSeries series = build_performance_series(dataset, pi);
  const int n = series.n;

  Forecast fc;
  switch (algorithm) {
    case Algorithm::WIS:
      fc = flat_forecast(wis_estimate(series), params.L);
      break;
    case Algorithm::SWIS:
      fc = flat_forecast(swis_estimate(series, params.swis_window), params.L);
      break;
    case Algorithm::ProWLS: {
      const FourierModel model = prowls_fit(series.g, series.rho, params.prowls_d);
      const Eigen::VectorXd values = prowls_forecast(model, n, params.L);
      fc.per_episode.assign(values.data(), values.data() + values.size());
      fc.total = values.sum();
      if (model.degenerate) fc.flags.push_back("weak-instrument");
      break;
    }
    case Algorithm::NaiveAR: {
      const ArModel model = naive_ar_fit(series, params.naive_p, params.intercept);
      std::vector<double> lags(series.j_hat.data() + n - params.naive_p,
                               series.j_hat.data() + n);
      const double clip = 1e4 * std::max(1.0, series.g.cwiseAbs().maxCoeff());
      fc = rollout(model, std::move(lags), params.L, clip);
      break;
    }
    case Algorithm::OPEN: {
      const RegressionProblem problem = build_regression_targets(series, params.open_p);
      const ArModel model = two_stage_iv_fit(problem, {params.intercept, 1e-10});
      // Seed the auto-regression with the final p denoised values; raw PDIS
      // estimates never feed the forecast.
      const int count = static_cast<int>(model.denoised.size());
      std::vector<double> lags(model.denoised.data() + count - params.open_p,
                               model.denoised.data() + count);
      const double clip = 1e4 * std::max(1.0, series.g.cwiseAbs().maxCoeff());
      fc = rollout(model, std::move(lags), params.L, clip);
      if (model.diagnostics.weak_instrument) fc.flags.push_back("weak-instrument");
      break;
    }
  }
  fc.algorithm_id = algorithm_name(algorithm);
  return fc;
}

std::string Forecast::to_csv() const {
  std::string out = "episode_index,predicted_J\n";
  char buf[96];
  for (std::size_t k = 0; k < per_episode.size(); ++k) {
    std::snprintf(buf, sizeof(buf), "%zu,%.17g\n", k + 1, per_episode[k]);
    out += buf;
  }
  return out;
}

std::string Forecast::summary_json() const {
  nlohmann::json j;
  j["algorithm"] = algorithm_id;
  j["total"] = total;
  j["length"] = per_episode.size();
  j["provenance"] = provenance;
  j["flags"] = flags;
  return j.dump();
}

}  // namespace openns
