#include "openns/demo.hpp"

#include <cmath>
#include <cstdio>

#include "openns/errors.hpp"
#include "openns/estimators.hpp"
#include "openns/svg.hpp"

namespace openns {

namespace {

double lsq_slope(const std::vector<std::pair<double, double>>& pts) {
  const double n = static_cast<double>(pts.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (const auto& [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  return denom != 0.0 ? (n * sxy - sx * sy) / denom : 0.0;
}

double sd(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double mean = 0;
  for (double x : v) mean += x;
  mean /= v.size();
  double ss = 0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / v.size());
}

std::string two_col_csv(const char* header, const std::vector<std::pair<double, double>>& rows) {
  std::string out = header;
  out += '\n';
  char buf[96];
  for (const auto& [a, b] : rows) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", a, b);
    out += buf;
  }
  return out;
}

}  // namespace

DemoResult run_demo(const ToolConfig& config) {
  const ExperimentConfig& e = config.experiment;
  if (e.env.domain != DomainId::RoboToyActive && e.env.domain != DomainId::RoboToyPassive)
    throw Error(ErrorCode::BadConfig, "the demo runs on the robotoy domains");

  const Policy pi = Policy::preset(e.pi_preset);
  const Policy beta = Policy::preset(e.beta_preset);
  const int n = e.n_episodes;
  const int L = e.L;
  const int p = e.algo.open_p;

  EnvConfig ec = e.env;
  ec.seed = derive_seed(e.base_seed, 0);

  // Collect under beta while recording the true (unobservable) performance
  // of pi on every M_i from the domain's closed form.
  auto env = env_create(ec);
  Dataset data;
  std::vector<double> true_j(n);
  for (int i = 0; i < n; ++i) {
    true_j[i] = env->expected_return(pi).value();
    data.episodes.push_back(env->run_episode(beta, derive_seed(ec.seed, 0xDA7A5EEDULL, i)));
  }

  // Expected true performance of the next L episodes if pi were deployed.
  std::vector<double> future_j(L);
  {
    const double q_run = pi.prob(0, 1);
    const double mean_reward = 8.0 * (1.0 - q_run) + 10.0 * q_run;
    double lambda = env->latent()[0];
    for (int k = 0; k < L; ++k) {
      if (ec.domain == DomainId::RoboToyActive) {
        future_j[k] = lambda * mean_reward;
        const double alpha = ec.speed * ec.params.robotoy_alpha0;
        lambda = std::max(ec.params.robotoy_lambda_min, lambda * (1.0 - alpha * q_run));
      } else {
        const double phase = 2.0 * 3.14159265358979323846 * ec.speed *
                             static_cast<double>(n + k) / ec.params.robotoy_period;
        future_j[k] = (1.0 + ec.params.robotoy_amplitude * std::sin(phase)) * mean_reward;
      }
    }
  }

  const PerformanceSeries series = build_performance_series(data, pi);
  const RegressionProblem problem = build_regression_targets(series, p);
  const ArModel model = two_stage_iv_fit(problem, {e.algo.intercept, 1e-10});

  const int count = static_cast<int>(model.denoised.size());
  std::vector<double> lags(model.denoised.data() + count - p, model.denoised.data() + count);
  const double clip = 1e4 * std::max(1.0, series.g.cwiseAbs().maxCoeff());
  const Forecast fc = rollout(model, std::move(lags), L, clip);

  DemoResult result;

  // Panel 1: true performance with the deployment boundary at episode n.
  std::vector<std::pair<double, double>> truth_pts, future_pts;
  for (int i = 0; i < n; ++i) truth_pts.emplace_back(i + 1, true_j[i]);
  for (int k = 0; k < L; ++k) future_pts.emplace_back(n + k + 1, future_j[k]);
  {
    std::vector<std::pair<double, double>> all = truth_pts;
    all.insert(all.end(), future_pts.begin(), future_pts.end());
    result.files.emplace_back("demo_true_performance.csv",
                              two_col_csv("episode,true_J", all));
    PlotSpec spec{"true performance of the evaluation policy", "episode", "J_i",
                  {PlotSeries{"past (behavior deployed)", "#1f77b4", true, false, truth_pts, {}},
                   PlotSeries{"future (pi deployed)", "#7f7f7f", true, false, future_pts, {}}},
                  static_cast<double>(n),
                  true};
    result.files.emplace_back("demo_true_performance.svg", render_panel(spec));
  }

  // Panel 2: raw counterfactual estimates.
  std::vector<std::pair<double, double>> raw_pts;
  for (int i = 0; i < n; ++i) raw_pts.emplace_back(i + 1, series.j_hat(i));
  result.files.emplace_back("demo_estimates.csv",
                            two_col_csv("episode,j_hat", raw_pts));
  {
    PlotSpec spec{"counterfactual performance estimates", "episode", "J-hat_i",
                  {PlotSeries{"PDIS estimate", "#444444", false, true, raw_pts, {}}},
                  0.0,
                  false};
    result.files.emplace_back("demo_estimates.svg", render_panel(spec));
  }

  // Panel 3: denoised series plus the forecast.
  std::vector<std::pair<double, double>> denoised_pts, forecast_pts;
  for (int r = 0; r < count; ++r)
    denoised_pts.emplace_back(model.first_denoised + r, model.denoised(r));
  for (int k = 0; k < L; ++k) forecast_pts.emplace_back(n + k + 1, fc.per_episode[k]);
  {
    std::string csv = "episode,value,kind\n";
    char buf[120];
    for (const auto& [x, y] : denoised_pts) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,denoised\n", x, y);
      csv += buf;
    }
    for (const auto& [x, y] : forecast_pts) {
      std::snprintf(buf, sizeof(buf), "%.17g,%.17g,forecast\n", x, y);
      csv += buf;
    }
    result.files.emplace_back("demo_denoised_forecast.csv", std::move(csv));
    PlotSpec spec{"denoised estimates and forecast", "episode", "J",
                  {PlotSeries{"denoised (stage 1)", "#2ca02c", false, true, denoised_pts, {}},
                   PlotSeries{"forecast", "#d62728", true, false, forecast_pts, {}}},
                  static_cast<double>(n),
                  true};
    result.files.emplace_back("demo_denoised_forecast.svg", render_panel(spec));
  }

  std::vector<double> raw_res, den_res;
  for (int r = 0; r < count; ++r) {
    const int i = model.first_denoised + r;  // 1-based episode
    raw_res.push_back(series.j_hat(i - 1) - true_j[i - 1]);
    den_res.push_back(model.denoised(r) - true_j[i - 1]);
  }
  result.stats.raw_residual_sd = sd(raw_res);
  result.stats.denoised_residual_sd = sd(den_res);
  result.stats.past_trend_slope = lsq_slope(raw_pts);
  result.stats.forecast_slope = lsq_slope(forecast_pts);
  return result;
}

}  // namespace openns
