#include "openns/env.hpp"

#include <cmath>
#include <cstring>

#include "domains.hpp"
#include "openns/errors.hpp"

namespace openns {

const char* domain_name(DomainId id) {
  switch (id) {
    case DomainId::RoboToyActive: return "robotoy_active";
    case DomainId::RoboToyPassive: return "robotoy_passive";
    case DomainId::NsMountainCar: return "mountain_car";
    case DomainId::Medevac: return "medevac";
  }
  return "unknown";
}

DomainId domain_from_name(const std::string& name) {
  if (name == "robotoy_active") return DomainId::RoboToyActive;
  if (name == "robotoy_passive") return DomainId::RoboToyPassive;
  if (name == "mountain_car") return DomainId::NsMountainCar;
  if (name == "medevac") return DomainId::Medevac;
  throw Error(ErrorCode::BadConfig, "unknown domain '" + name + "'");
}

std::vector<double> DomainParams::pack() const {
  return {robotoy_alpha0,    robotoy_sigma_r,   robotoy_lambda_min, robotoy_amplitude,
          robotoy_period,    mc_velocity_decay, mc_kappa_min,       mc_grid,
          mc_action_repeat,  medevac_zones,     medevac_units,      medevac_rate_low,
          medevac_rate_mid,  medevac_rate_high, medevac_oscillation, medevac_period,
          medevac_service_rate, medevac_wear,   medevac_service_floor, medevac_reward_low,
          medevac_reward_mid, medevac_reward_high};
}

DomainParams DomainParams::unpack(const std::vector<double>& v) {
  DomainParams p;
  if (v.size() != p.pack().size())
    throw Error(ErrorCode::BadSnapshot, "domain parameter block size mismatch");
  std::size_t i = 0;
  p.robotoy_alpha0 = v[i++];
  p.robotoy_sigma_r = v[i++];
  p.robotoy_lambda_min = v[i++];
  p.robotoy_amplitude = v[i++];
  p.robotoy_period = v[i++];
  p.mc_velocity_decay = v[i++];
  p.mc_kappa_min = v[i++];
  p.mc_grid = v[i++];
  p.mc_action_repeat = v[i++];
  p.medevac_zones = v[i++];
  p.medevac_units = v[i++];
  p.medevac_rate_low = v[i++];
  p.medevac_rate_mid = v[i++];
  p.medevac_rate_high = v[i++];
  p.medevac_oscillation = v[i++];
  p.medevac_period = v[i++];
  p.medevac_service_rate = v[i++];
  p.medevac_wear = v[i++];
  p.medevac_service_floor = v[i++];
  p.medevac_reward_low = v[i++];
  p.medevac_reward_mid = v[i++];
  p.medevac_reward_high = v[i++];
  return p;
}

Env::Env(const EnvConfig& cfg) : cfg_(cfg), rng_(derive_seed(cfg.seed, 0x456e76)) {}

void Env::push_step(EpisodeHistory& h, int obs, int action, double reward, double prob) {
  if (!(prob > 0.0))
    throw Error(ErrorCode::ZeroBehaviorProb,
                "policy assigned zero probability to the taken action");
  h.steps.push_back({obs, action, reward, prob});
}

EpisodeHistory Env::run_episode(const Policy& policy, std::uint64_t episode_seed) {
  if (policy.observation_count() != observation_count() ||
      policy.action_count() != action_count())
    throw Error(ErrorCode::DimensionMismatch,
                "policy spaces do not match the domain");
  // All in-episode stochasticity comes from a stream mixing the persistent
  // state stream with the caller's sub-seed: same (state, sub-seed) replays
  // bit-identically, distinct sub-seeds give independent futures.
  RandomStream ep_rng(derive_seed(rng_.next_u64(), episode_seed));
  EpisodeHistory h = simulate(policy, ep_rng);
  h.episode_index = episode_;
  meta_transition(h);
  ++episode_;
  return h;
}

void Env::restore_state(std::int64_t episode, const std::vector<double>& latent_values,
                        const std::array<std::uint64_t, 4>& rng_state) {
  episode_ = episode;
  deserialize_latent(latent_values);
  rng_.set_state(rng_state);
}

std::unique_ptr<Env> env_create(const EnvConfig& config) {
  if (!(config.speed >= 0.0) || !std::isfinite(config.speed))
    throw Error(ErrorCode::BadConfig, "speed must be a non-negative real");
  if (config.horizon_cap < 0)
    throw Error(ErrorCode::BadConfig, "horizon_cap must be positive");

  EnvConfig cfg = config;
  switch (cfg.domain) {
    case DomainId::RoboToyActive:
    case DomainId::RoboToyPassive:
      if (cfg.horizon_cap == 0) cfg.horizon_cap = 1;
      return std::make_unique<domains::RoboToyEnv>(cfg, cfg.domain == DomainId::RoboToyActive);
    case DomainId::NsMountainCar:
      if (cfg.horizon_cap == 0) cfg.horizon_cap = 30;
      return std::make_unique<domains::MountainCarEnv>(cfg);
    case DomainId::Medevac:
      if (cfg.horizon_cap == 0) cfg.horizon_cap = 20;
      return std::make_unique<domains::MedevacEnv>(cfg);
  }
  throw Error(ErrorCode::BadConfig, "unknown domain id");
}

namespace {

constexpr char kMagic[4] = {'O', 'N', 'S', '1'};
constexpr std::uint32_t kVersion = 1;

class ByteWriter {
 public:
  void u8(std::uint8_t v) { buf_.push_back(static_cast<char>(v)); }
  void u32(std::uint32_t v) { raw(&v, sizeof v); }
  void u64(std::uint64_t v) { raw(&v, sizeof v); }
  void i64(std::int64_t v) { raw(&v, sizeof v); }
  void f64(double v) { raw(&v, sizeof v); }
  void doubles(const std::vector<double>& v) {
    u32(static_cast<std::uint32_t>(v.size()));
    for (double x : v) f64(x);
  }
  std::string take() { return std::move(buf_); }

 private:
  void raw(const void* p, std::size_t n) {
    const char* c = static_cast<const char*>(p);
    buf_.append(c, c + n);
  }
  std::string buf_;
};

class ByteReader {
 public:
  explicit ByteReader(const std::string& buf) : buf_(buf) {}

  std::uint8_t u8() { return static_cast<std::uint8_t>(take(1)[0]); }
  std::uint32_t u32() { return read<std::uint32_t>(); }
  std::uint64_t u64() { return read<std::uint64_t>(); }
  std::int64_t i64() { return read<std::int64_t>(); }
  double f64() { return read<double>(); }
  std::vector<double> doubles() {
    const std::uint32_t n = u32();
    if (n > 1u << 20) throw Error(ErrorCode::BadSnapshot, "implausible array length");
    std::vector<double> v(n);
    for (auto& x : v) x = f64();
    return v;
  }
  bool exhausted() const { return pos_ == buf_.size(); }

 private:
  template <typename T>
  T read() {
    T v;
    std::memcpy(&v, take(sizeof(T)), sizeof(T));
    return v;
  }
  const char* take(std::size_t n) {
    if (pos_ + n > buf_.size()) throw Error(ErrorCode::BadSnapshot, "truncated snapshot");
    const char* p = buf_.data() + pos_;
    pos_ += n;
    return p;
  }
  const std::string& buf_;
  std::size_t pos_ = 0;
};

}  // namespace

std::string snapshot(const Env& env) {
  ByteWriter w;
  w.u8(kMagic[0]);
  w.u8(kMagic[1]);
  w.u8(kMagic[2]);
  w.u8(kMagic[3]);
  w.u32(kVersion);
  w.u8(static_cast<std::uint8_t>(env.cfg_.domain));
  w.f64(env.cfg_.speed);
  w.u64(env.cfg_.seed);
  w.i64(env.cfg_.horizon_cap);
  w.doubles(env.cfg_.params.pack());
  w.i64(env.episode_);
  w.doubles(env.serialize_latent());
  for (std::uint64_t word : env.rng_.state()) w.u64(word);
  return w.take();
}

std::unique_ptr<Env> restore(const std::string& bytes) {
  ByteReader r(bytes);
  char magic[4];
  for (char& c : magic) c = static_cast<char>(r.u8());
  if (std::memcmp(magic, kMagic, 4) != 0)
    throw Error(ErrorCode::BadSnapshot, "bad magic bytes");
  if (r.u32() != kVersion) throw Error(ErrorCode::BadSnapshot, "unsupported snapshot version");

  EnvConfig cfg;
  const std::uint8_t domain = r.u8();
  if (domain > static_cast<std::uint8_t>(DomainId::Medevac))
    throw Error(ErrorCode::BadSnapshot, "bad domain id");
  cfg.domain = static_cast<DomainId>(domain);
  cfg.speed = r.f64();
  cfg.seed = r.u64();
  cfg.horizon_cap = static_cast<int>(r.i64());
  cfg.params = DomainParams::unpack(r.doubles());

  auto env = env_create(cfg);
  const std::int64_t episode = r.i64();
  const std::vector<double> latent_values = r.doubles();
  std::array<std::uint64_t, 4> rng_state;
  for (auto& word : rng_state) word = r.u64();
  if (!r.exhausted()) throw Error(ErrorCode::BadSnapshot, "trailing bytes");
  env->restore_state(episode, latent_values, rng_state);
  return env;
}

}  // namespace openns
