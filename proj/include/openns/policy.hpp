#pragma once

#include <string>
#include <vector>

#include "openns/rng.hpp"

namespace openns {

/// Discrete-observation stochastic policy with exact action-probability
/// queries. All construction paths (tabular rows, mixtures, named presets)
/// materialize the same dense row-stochastic table, so prob() is exact and
/// mixture probabilities are the literal convex combination.
class Policy {
 public:
  enum class Kind { Tabular, Mixture, DomainPreset };

  Policy() = default;

  Kind kind() const { return kind_; }
  const std::string& preset_id() const { return preset_id_; }
  int observation_count() const { return n_obs_; }
  int action_count() const { return n_act_; }

  /// Exact probability of `action` under `observation`.
  double prob(int observation, int action) const;

  /// Samples an action; deterministic given the stream state and consistent
  /// with prob().
  int sample(int observation, RandomStream& rng) const;

  const std::vector<double>& table() const { return table_; }

  static Policy tabular(int n_obs, int n_act, std::vector<double> table);
  static Policy uniform(int n_obs, int n_act);
  static Policy mixture(const std::vector<Policy>& components, const std::vector<double>& weights);

  /// Resolves a preset id such as "robotoy_run_heavy(0.8)" or
  /// "medevac_behavior". Unknown ids raise BadConfig.
  static Policy preset(const std::string& id);

 private:
  Kind kind_ = Kind::Tabular;
  std::string preset_id_;
  int n_obs_ = 0;
  int n_act_ = 0;
  std::vector<double> table_;  // row-major n_obs x n_act

  void validate() const;
  void check_obs(int observation) const;
};

/// max over (o,a) with pi(o,a) > 0 of pi/beta; +infinity when beta lacks
/// support somewhere pi needs it.
double support_ratio_bound(const Policy& pi, const Policy& beta);

/// CSV rows: observation_id,action_id,probability
void save_policy_csv(const Policy& p, const std::string& path);
Policy load_policy_csv(const std::string& path);

}  // namespace openns
