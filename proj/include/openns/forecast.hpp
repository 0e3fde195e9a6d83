#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "openns/estimators.hpp"

namespace openns {

enum class Algorithm { OPEN, ProWLS, WIS, SWIS, NaiveAR };

const char* algorithm_name(Algorithm a);
Algorithm algorithm_from_name(const std::string& name);

struct AlgoParams {
  int open_p = 400;
  int naive_p = 400;
  int prowls_d = 5;
  int swis_window = 400;
  int L = 200;  // forecast horizon
  bool intercept = true;
};

/// Predicted per-episode performance for the next L episodes plus their sum,
/// the estimate of the expected future performance.
struct Forecast {
  std::vector<double> per_episode;
  double total = 0.0;
  std::string algorithm_id;
  std::uint64_t provenance = 0;  // config hash mixed with the seed
  std::vector<std::string> flags;

  std::string to_csv() const;       // episode_index,predicted_J
  std::string summary_json() const;
};

/// Applies the fitted lag model auto-regressively for L steps. seed_lags are
/// the p most recent denoised values, oldest first. Values beyond
/// clip_magnitude are clipped and the forecast is flagged divergent.
Forecast rollout(const ArModel& model, std::vector<double> seed_lags, int L,
                 double clip_magnitude = std::numeric_limits<double>::infinity());

/// One entry point for every algorithm; WIS/SWIS emit flat forecasts so the
/// bias/MSE bookkeeping is uniform.
Forecast predict(Algorithm algorithm, const Dataset& dataset, const Policy& pi,
                 const AlgoParams& params);

}  // namespace openns
