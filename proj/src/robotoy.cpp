#include <algorithm>
#include <cmath>

#include "domains.hpp"
#include "openns/errors.hpp"

namespace openns::domains {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kWalkReward = 8.0;
constexpr double kRunReward = 10.0;
}  // namespace

RoboToyEnv::RoboToyEnv(const EnvConfig& cfg, bool active) : Env(cfg), active_(active) {
  lambda_ = active_ ? 1.0 : passive_lambda(0);
}

double RoboToyEnv::passive_lambda(std::int64_t episode) const {
  const auto& p = cfg_.params;
  return 1.0 + p.robotoy_amplitude *
                   std::sin(kTwoPi * cfg_.speed * static_cast<double>(episode) / p.robotoy_period);
}

EpisodeHistory RoboToyEnv::simulate(const Policy& policy, RandomStream& ep_rng) {
  EpisodeHistory h;
  const int obs = 0;
  const int action = policy.sample(obs, ep_rng);
  double reward = (action == kRun ? kRunReward : kWalkReward) * lambda_;
  if (cfg_.params.robotoy_sigma_r > 0.0) reward += ep_rng.normal(0.0, cfg_.params.robotoy_sigma_r);
  reward = std::clamp(reward, -reward_bound(), reward_bound());
  push_step(h, obs, action, reward, policy.prob(obs, action));
  return h;
}

void RoboToyEnv::meta_transition(const EpisodeHistory& h) {
  if (active_) {
    // run wears the motors; walking causes no wear
    if (!h.steps.empty() && h.steps.front().action == kRun) {
      const double alpha = cfg_.speed * cfg_.params.robotoy_alpha0;
      lambda_ = std::max(cfg_.params.robotoy_lambda_min, lambda_ * (1.0 - alpha));
    }
  } else {
    lambda_ = passive_lambda(episode_ + 1);
  }
}

std::optional<double> RoboToyEnv::expected_return(const Policy& pi) const {
  const double q_run = pi.prob(0, kRun);
  return lambda_ * (kWalkReward * (1.0 - q_run) + kRunReward * q_run);
}

void RoboToyEnv::deserialize_latent(const std::vector<double>& values) {
  if (values.size() != 1) throw Error(ErrorCode::BadSnapshot, "robotoy latent size mismatch");
  lambda_ = values[0];
}

std::unique_ptr<Env> RoboToyEnv::clone() const { return std::make_unique<RoboToyEnv>(*this); }

}  // namespace openns::domains
