#pragma once

// Internal: concrete domain implementations behind env_create().

#include <array>

#include "openns/env.hpp"

namespace openns::domains {

/// Two-action toy robot; one macro-decision per episode. `run` pays more but
/// (in the active variant) wears the motors down for every future episode.
class RoboToyEnv final : public Env {
 public:
  RoboToyEnv(const EnvConfig& cfg, bool active);

  int observation_count() const override { return 1; }
  int action_count() const override { return 2; }
  double reward_bound() const override { return 16.0; }
  std::vector<double> latent() const override { return {lambda_}; }
  std::optional<double> expected_return(const Policy& pi) const override;
  std::unique_ptr<Env> clone() const override;

  static constexpr int kWalk = 0;
  static constexpr int kRun = 1;

 protected:
  EpisodeHistory simulate(const Policy& policy, RandomStream& ep_rng) override;
  void meta_transition(const EpisodeHistory& h) override;
  std::vector<double> serialize_latent() const override { return {lambda_}; }
  void deserialize_latent(const std::vector<double>& values) override;

 private:
  double passive_lambda(std::int64_t episode) const;

  bool active_;
  double lambda_ = 1.0;
};

/// Classic mountain car with 10x macro-actions and an effective acceleration
/// multiplier that decays with how vigorously the car was driven.
class MountainCarEnv final : public Env {
 public:
  explicit MountainCarEnv(const EnvConfig& cfg);

  int observation_count() const override;
  int action_count() const override { return 3; }
  double reward_bound() const override { return 1.0; }
  std::vector<double> latent() const override { return {kappa_}; }
  std::unique_ptr<Env> clone() const override;

 protected:
  EpisodeHistory simulate(const Policy& policy, RandomStream& ep_rng) override;
  void meta_transition(const EpisodeHistory& h) override;
  std::vector<double> serialize_latent() const override { return {kappa_, mean_abs_vel_}; }
  void deserialize_latent(const std::vector<double>& values) override;

 private:
  int discretize(double pos, double vel) const;

  double kappa_ = 1.0;
  double mean_abs_vel_ = 0.0;  // realized in the last simulated episode
};

/// Discrete-event ambulance dispatch. Passive channel: the high-priority
/// arrival rate oscillates with the episode index. Active channel: each
/// unit's service rate decays with its dispatch count.
class MedevacEnv final : public Env {
 public:
  explicit MedevacEnv(const EnvConfig& cfg);

  int observation_count() const override { return 48; }
  int action_count() const override { return 5; }
  double reward_bound() const override { return cfg_.params.medevac_reward_high; }
  std::vector<double> latent() const override;
  std::unique_ptr<Env> clone() const override;

  double high_priority_rate(std::int64_t episode) const;

 protected:
  EpisodeHistory simulate(const Policy& policy, RandomStream& ep_rng) override;
  void meta_transition(const EpisodeHistory& h) override;
  std::vector<double> serialize_latent() const override;
  void deserialize_latent(const std::vector<double>& values) override;

 private:
  static constexpr int kUnits = 4;
  static constexpr int kNoDispatch = 4;

  std::array<double, kUnits> service_rate_{};
  std::array<int, kUnits> episode_dispatches_{};  // realized in the last episode
};

}  // namespace openns::domains
