#pragma once

#include <string>
#include <utility>
#include <vector>

#include "openns/config.hpp"

namespace openns {

struct DemoStats {
  double raw_residual_sd = 0.0;       // J-hat vs true J over the denoised range
  double denoised_residual_sd = 0.0;  // J-bar vs true J over the same range
  double past_trend_slope = 0.0;      // least-squares slope through past J-hat
  double forecast_slope = 0.0;        // least-squares slope through the forecast
};

struct DemoResult {
  std::vector<std::pair<std::string, std::string>> files;  // filename -> content
  DemoStats stats;
};

/// Stage-by-stage walkthrough on a RoboToy domain: the unobserved true
/// performance with the deployment boundary, the raw counterfactual
/// estimates, and the denoised series with the forecast overlay. Emits three
/// CSVs and three SVG panels.
DemoResult run_demo(const ToolConfig& config);

}  // namespace openns
