#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "openns/policy.hpp"
#include "openns/rng.hpp"
#include "openns/types.hpp"

namespace openns {

enum class DomainId : std::uint8_t {
  RoboToyActive = 0,
  RoboToyPassive = 1,
  NsMountainCar = 2,
  Medevac = 3,
};

const char* domain_name(DomainId id);
DomainId domain_from_name(const std::string& name);

/// Every numeric constant the domains use, exposed as named fields so
/// experiments are reproducible and tunable from config files.
struct DomainParams {
  // RoboToy (active + passive variants)
  double robotoy_alpha0 = 0.001;      // wear per `run` at speed 1
  double robotoy_sigma_r = 0.05;      // reward noise
  double robotoy_lambda_min = 0.05;   // wear multiplier floor
  double robotoy_amplitude = 0.3;     // passive oscillation amplitude
  double robotoy_period = 2000.0;     // episodes per passive oscillation at speed 1

  // Non-stationary mountain car
  double mc_velocity_decay = 0.02;    // force decay per unit mean |velocity| at speed 1
  double mc_kappa_min = 0.2;          // force multiplier floor
  double mc_grid = 8.0;               // observation grid resolution per axis
  double mc_action_repeat = 10.0;     // primitive repeats per macro-action

  // Medevac dispatch
  double medevac_zones = 34.0;
  double medevac_units = 4.0;
  double medevac_rate_low = 0.5;      // arrival rates by priority
  double medevac_rate_mid = 0.3;
  double medevac_rate_high = 0.2;
  double medevac_oscillation = 0.5;   // amplitude on the high-priority rate
  double medevac_period = 2000.0;
  double medevac_service_rate = 1.0;  // nominal per-unit service rate
  double medevac_wear = 0.0001;       // service-rate decay per dispatch at speed 1
  double medevac_service_floor = 0.2; // fraction of nominal rate
  double medevac_reward_low = 1.0;
  double medevac_reward_mid = 5.0;
  double medevac_reward_high = 25.0;

  std::vector<double> pack() const;
  static DomainParams unpack(const std::vector<double>& values);
};

struct EnvConfig {
  DomainId domain = DomainId::RoboToyActive;
  double speed = 0.0;          // rate of non-stationarity; 0 = stationary
  std::uint64_t seed = 0;
  int horizon_cap = 0;         // 0 picks the domain default
  DomainParams params;
};

/// A non-stationary episodic decision process: a sequence of POMDPs whose
/// episode-to-episode transition may depend on the realized interactions.
/// Instances are single-threaded; clone() + independent sub-seeds is the
/// parallelism mechanism.
class Env {
 public:
  virtual ~Env() = default;

  const EnvConfig& config() const { return cfg_; }
  std::int64_t episode_index() const { return episode_; }

  virtual int observation_count() const = 0;
  virtual int action_count() const = 0;
  virtual double reward_bound() const = 0;

  /// Runs one episode under `policy` with the given episode sub-seed, applies
  /// the meta-transition exactly once, and advances the episode index.
  EpisodeHistory run_episode(const Policy& policy, std::uint64_t episode_seed);

  /// Domain-specific latent summary (wear multiplier, force multiplier,
  /// arrival/service rates) for inspection and oracles.
  virtual std::vector<double> latent() const = 0;

  /// Exact J_i(pi) where the domain admits a closed form.
  virtual std::optional<double> expected_return(const Policy&) const { return std::nullopt; }

  virtual std::unique_ptr<Env> clone() const = 0;

  // Snapshot plumbing; prefer the free functions below.
  std::vector<double> latent_payload() const { return serialize_latent(); }
  void restore_state(std::int64_t episode, const std::vector<double>& latent_values,
                     const std::array<std::uint64_t, 4>& rng_state);

 protected:
  explicit Env(const EnvConfig& cfg);

  virtual EpisodeHistory simulate(const Policy& policy, RandomStream& ep_rng) = 0;
  virtual void meta_transition(const EpisodeHistory& h) = 0;
  virtual std::vector<double> serialize_latent() const = 0;
  virtual void deserialize_latent(const std::vector<double>& values) = 0;

  /// Records one step, checking the behavior probability contract.
  static void push_step(EpisodeHistory& h, int obs, int action, double reward, double prob);

  EnvConfig cfg_;
  std::int64_t episode_ = 0;
  RandomStream rng_;  // persistent stream; advanced once per episode

 private:
  friend std::string snapshot(const Env& env);
  friend std::unique_ptr<Env> restore(const std::string& bytes);
};

/// Factory. Validates the config (unknown domain, negative speed, bad horizon).
std::unique_ptr<Env> env_create(const EnvConfig& config);

/// Versioned self-describing binary snapshot of the full environment state.
std::string snapshot(const Env& env);
std::unique_ptr<Env> restore(const std::string& bytes);

}  // namespace openns
