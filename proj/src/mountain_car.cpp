#include <algorithm>
#include <cmath>

#include "domains.hpp"
#include "openns/errors.hpp"

namespace openns::domains {

namespace {
constexpr double kMinPos = -1.2;
constexpr double kMaxPos = 0.6;
constexpr double kGoalPos = 0.5;
constexpr double kMaxVel = 0.07;
constexpr double kForce = 0.001;
constexpr double kGravity = 0.0025;
}  // namespace

MountainCarEnv::MountainCarEnv(const EnvConfig& cfg) : Env(cfg) {}

int MountainCarEnv::observation_count() const {
  const int g = static_cast<int>(cfg_.params.mc_grid);
  return g * g;
}

int MountainCarEnv::discretize(double pos, double vel) const {
  const int g = static_cast<int>(cfg_.params.mc_grid);
  int pos_bin = static_cast<int>((pos - kMinPos) / (kMaxPos - kMinPos) * g);
  int vel_bin = static_cast<int>((vel + kMaxVel) / (2.0 * kMaxVel) * g);
  pos_bin = std::clamp(pos_bin, 0, g - 1);
  vel_bin = std::clamp(vel_bin, 0, g - 1);
  return pos_bin * g + vel_bin;
}

EpisodeHistory MountainCarEnv::simulate(const Policy& policy, RandomStream& ep_rng) {
  EpisodeHistory h;
  double pos = ep_rng.uniform(-0.6, -0.4);
  double vel = 0.0;

  const int repeat = static_cast<int>(cfg_.params.mc_action_repeat);
  double abs_vel_sum = 0.0;
  std::int64_t primitive_steps = 0;
  bool done = false;

  for (int macro = 0; macro < cfg_.horizon_cap && !done; ++macro) {
    const int obs = discretize(pos, vel);
    const int action = policy.sample(obs, ep_rng);
    const double force = static_cast<double>(action - 1);

    for (int k = 0; k < repeat && !done; ++k) {
      vel += kForce * force * kappa_ - kGravity * std::cos(3.0 * pos);
      vel = std::clamp(vel, -kMaxVel, kMaxVel);
      pos += vel;
      if (pos < kMinPos) {
        pos = kMinPos;
        vel = 0.0;
      }
      abs_vel_sum += std::abs(vel);
      ++primitive_steps;
      if (pos >= kGoalPos) done = true;
    }
    push_step(h, obs, action, -1.0, policy.prob(obs, action));
  }

  mean_abs_vel_ = primitive_steps > 0 ? abs_vel_sum / static_cast<double>(primitive_steps) : 0.0;
  return h;
}

void MountainCarEnv::meta_transition(const EpisodeHistory&) {
  // effective acceleration decays with how vigorously the car was driven
  const double decay = cfg_.speed * cfg_.params.mc_velocity_decay * mean_abs_vel_;
  kappa_ = std::max(cfg_.params.mc_kappa_min, kappa_ * (1.0 - decay));
}

void MountainCarEnv::deserialize_latent(const std::vector<double>& values) {
  if (values.size() != 2) throw Error(ErrorCode::BadSnapshot, "mountain car latent size mismatch");
  kappa_ = values[0];
  mean_abs_vel_ = values[1];
}

std::unique_ptr<Env> MountainCarEnv::clone() const {
  return std::make_unique<MountainCarEnv>(*this);
}

}  // namespace openns::domains
