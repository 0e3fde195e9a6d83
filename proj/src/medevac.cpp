#include <algorithm>
#include <cmath>

#include "domains.hpp"
#include "openns/errors.hpp"

namespace openns::domains {

namespace {
constexpr double kTwoPi = 6.283185307179586476925286766559;
// Home bases of the four units along the 34-zone strip.
constexpr int kBases[4] = {4, 12, 21, 29};
}  // namespace

MedevacEnv::MedevacEnv(const EnvConfig& cfg) : Env(cfg) {
  service_rate_.fill(cfg_.params.medevac_service_rate);
  episode_dispatches_.fill(0);
}

double MedevacEnv::high_priority_rate(std::int64_t episode) const {
  const auto& p = cfg_.params;
  // Purely index-driven oscillation: the passive channel of the hybrid
  // non-stationarity, independent of any action taken.
  return p.medevac_rate_high *
         (1.0 + p.medevac_oscillation *
                    std::sin(kTwoPi * cfg_.speed * static_cast<double>(episode) / p.medevac_period));
}

std::vector<double> MedevacEnv::latent() const {
  std::vector<double> v(service_rate_.begin(), service_rate_.end());
  v.push_back(high_priority_rate(episode_));
  return v;
}

EpisodeHistory MedevacEnv::simulate(const Policy& policy, RandomStream& ep_rng) {
  EpisodeHistory h;
  const auto& p = cfg_.params;
  const int zones = static_cast<int>(p.medevac_zones);
  const double rate_high = high_priority_rate(episode_);
  const double rates[3] = {p.medevac_rate_low, p.medevac_rate_mid, rate_high};
  const double rewards[3] = {p.medevac_reward_low, p.medevac_reward_mid, p.medevac_reward_high};
  const double total_rate = rates[0] + rates[1] + rates[2];

  std::array<double, kUnits> busy_until{};
  busy_until.fill(0.0);
  episode_dispatches_.fill(0);

  double now = 0.0;
  for (int event = 0; event < cfg_.horizon_cap; ++event) {
    now += ep_rng.exponential(total_rate);

    int priority = 2;
    double u = ep_rng.uniform01() * total_rate;
    if (u < rates[0]) {
      priority = 0;
    } else if (u < rates[0] + rates[1]) {
      priority = 1;
    }
    const int zone = static_cast<int>(ep_rng.uniform01() * zones) % zones;

    int mask = 0;
    for (int unit = 0; unit < kUnits; ++unit) {
      if (busy_until[unit] <= now) mask |= 1 << unit;
    }
    const int obs = priority * 16 + mask;
    const int action = policy.sample(obs, ep_rng);

    double reward = 0.0;
    if (action != kNoDispatch && ((mask >> action) & 1)) {
      reward = rewards[priority];
      const double dist = std::abs(zone - kBases[action]) / static_cast<double>(zones - 1);
      busy_until[action] = now + ep_rng.exponential(service_rate_[action]) * (1.0 + dist);
      ++episode_dispatches_[action];
    }
    push_step(h, obs, action, reward, policy.prob(obs, action));
  }
  return h;
}

void MedevacEnv::meta_transition(const EpisodeHistory&) {
  // wear and tear: a unit's service rate decays with how often it was used
  const auto& p = cfg_.params;
  const double floor = p.medevac_service_floor * p.medevac_service_rate;
  for (int unit = 0; unit < kUnits; ++unit) {
    const double decay = cfg_.speed * p.medevac_wear * episode_dispatches_[unit];
    service_rate_[unit] = std::max(floor, service_rate_[unit] * (1.0 - decay));
  }
}

std::vector<double> MedevacEnv::serialize_latent() const {
  std::vector<double> v(service_rate_.begin(), service_rate_.end());
  for (int d : episode_dispatches_) v.push_back(static_cast<double>(d));
  return v;
}

void MedevacEnv::deserialize_latent(const std::vector<double>& values) {
  if (values.size() != 2 * kUnits)
    throw Error(ErrorCode::BadSnapshot, "medevac latent size mismatch");
  for (int unit = 0; unit < kUnits; ++unit) {
    service_rate_[unit] = values[unit];
    episode_dispatches_[unit] = static_cast<int>(values[kUnits + unit]);
  }
}

std::unique_ptr<Env> MedevacEnv::clone() const { return std::make_unique<MedevacEnv>(*this); }

}  // namespace openns::domains
