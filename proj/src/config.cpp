#include "openns/config.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "openns/errors.hpp"

namespace openns {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig, "bad numeric value for '" + key + "': " + value);
  }
}

int to_int(const std::string& key, const std::string& value) {
  const double v = to_double(key, value);
  const int i = static_cast<int>(v);
  if (static_cast<double>(i) != v)
    throw Error(ErrorCode::BadConfig, "expected an integer for '" + key + "'");
  return i;
}

std::uint64_t to_u64(const std::string& key, const std::string& value) {
  try {
    std::size_t pos = 0;
    const std::uint64_t v = std::stoull(value, &pos);
    if (pos != value.size()) throw std::invalid_argument(value);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig, "bad seed value for '" + key + "': " + value);
  }
}

std::vector<std::string> split_list(std::string value) {
  value = trim(value);
  if (!value.empty() && value.front() == '[') {
    if (value.back() != ']')
      throw Error(ErrorCode::BadConfig, "unterminated list: " + value);
    value = value.substr(1, value.size() - 2);
  }
  std::vector<std::string> items;
  std::istringstream ss(value);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  return items;
}

}  // namespace

std::vector<double> parse_double_list(const std::string& value) {
  std::vector<double> out;
  for (const auto& item : split_list(value)) out.push_back(to_double("list", item));
  return out;
}

ToolConfig default_config(const std::string& profile) {
  ToolConfig cfg;
  if (profile == "paper") {
    cfg.experiment.n_episodes = 2000;
    cfg.experiment.L = 200;
    cfg.experiment.n_trials = 30;
    cfg.experiment.n_future_clones = 30;
    cfg.experiment.algo.open_p = 400;
    cfg.experiment.algo.naive_p = 400;
    cfg.experiment.algo.swis_window = 400;
    cfg.experiment.algo.prowls_d = 5;
  } else if (profile == "desk") {
    cfg.experiment.n_episodes = 1000;
    cfg.experiment.L = 100;
    cfg.experiment.n_trials = 20;
    cfg.experiment.n_future_clones = 20;
    cfg.experiment.algo.open_p = 200;
    cfg.experiment.algo.naive_p = 200;
    cfg.experiment.algo.swis_window = 200;
    cfg.experiment.algo.prowls_d = 5;
  } else {
    throw Error(ErrorCode::BadConfig, "unknown profile '" + profile + "' (paper|desk)");
  }
  cfg.experiment.algo.L = cfg.experiment.L;
  return cfg;
}

void apply_key(ToolConfig& config, const std::string& raw_key, const std::string& raw_value) {
  const std::string key = trim(raw_key);
  const std::string value = trim(raw_value);
  ExperimentConfig& e = config.experiment;
  DomainParams& p = e.env.params;

  if (key == "env.domain") {
    e.env.domain = domain_from_name(value);
    // Pick the matching default presets when the user has not set any.
    if (e.env.domain == DomainId::NsMountainCar) {
      e.pi_preset = "mc_energy_pump(0.8)";
      e.beta_preset = "mc_behavior";
    } else if (e.env.domain == DomainId::Medevac) {
      e.pi_preset = "medevac_dispatch_heavy";
      e.beta_preset = "medevac_behavior";
    } else {
      e.pi_preset = "robotoy_run_heavy(0.8)";
      e.beta_preset = "robotoy_behavior";
    }
  } else if (key == "env.speed") {
    e.env.speed = to_double(key, value);
  } else if (key == "env.seed") {
    e.env.seed = to_u64(key, value);
  } else if (key == "env.horizon_cap") {
    e.env.horizon_cap = to_int(key, value);
  } else if (key == "episodes") {
    e.n_episodes = to_int(key, value);
  } else if (key == "future_episodes") {
    e.L = to_int(key, value);
    e.algo.L = e.L;
  } else if (key == "trials") {
    e.n_trials = to_int(key, value);
  } else if (key == "clones") {
    e.n_future_clones = to_int(key, value);
  } else if (key == "speeds") {
    e.speeds = parse_double_list(value);
  } else if (key == "algorithms") {
    e.algorithms.clear();
    for (const auto& name : split_list(value)) e.algorithms.push_back(algorithm_from_name(name));
  } else if (key == "pi") {
    e.pi_preset = value;
  } else if (key == "beta") {
    e.beta_preset = value;
  } else if (key == "base_seed") {
    e.base_seed = to_u64(key, value);
  } else if (key == "jobs") {
    e.jobs = to_int(key, value);
  } else if (key == "open.p") {
    e.algo.open_p = to_int(key, value);
  } else if (key == "naive.p") {
    e.algo.naive_p = to_int(key, value);
  } else if (key == "prowls.d") {
    e.algo.prowls_d = to_int(key, value);
  } else if (key == "swis.window") {
    e.algo.swis_window = to_int(key, value);
  } else if (key == "ablate.param") {
    if (value != "open_p" && value != "prowls_d")
      throw Error(ErrorCode::BadConfig, "ablate.param must be open_p or prowls_d");
    config.ablate_param = value;
  } else if (key == "ablate.values") {
    config.ablate_values = parse_double_list(value);
  } else if (key == "robotoy.alpha0") {
    p.robotoy_alpha0 = to_double(key, value);
  } else if (key == "robotoy.sigma_r") {
    p.robotoy_sigma_r = to_double(key, value);
  } else if (key == "robotoy.lambda_min") {
    p.robotoy_lambda_min = to_double(key, value);
  } else if (key == "robotoy.amplitude") {
    p.robotoy_amplitude = to_double(key, value);
  } else if (key == "robotoy.period") {
    p.robotoy_period = to_double(key, value);
  } else if (key == "mc.velocity_decay") {
    p.mc_velocity_decay = to_double(key, value);
  } else if (key == "mc.kappa_min") {
    p.mc_kappa_min = to_double(key, value);
  } else if (key == "mc.grid") {
    p.mc_grid = to_double(key, value);
  } else if (key == "mc.action_repeat") {
    p.mc_action_repeat = to_double(key, value);
  } else if (key == "medevac.zones") {
    p.medevac_zones = to_double(key, value);
  } else if (key == "medevac.rate_low") {
    p.medevac_rate_low = to_double(key, value);
  } else if (key == "medevac.rate_mid") {
    p.medevac_rate_mid = to_double(key, value);
  } else if (key == "medevac.rate_high") {
    p.medevac_rate_high = to_double(key, value);
  } else if (key == "medevac.oscillation") {
    p.medevac_oscillation = to_double(key, value);
  } else if (key == "medevac.period") {
    p.medevac_period = to_double(key, value);
  } else if (key == "medevac.service_rate") {
    p.medevac_service_rate = to_double(key, value);
  } else if (key == "medevac.wear") {
    p.medevac_wear = to_double(key, value);
  } else if (key == "medevac.service_floor") {
    p.medevac_service_floor = to_double(key, value);
  } else if (key == "medevac.reward_low") {
    p.medevac_reward_low = to_double(key, value);
  } else if (key == "medevac.reward_mid") {
    p.medevac_reward_mid = to_double(key, value);
  } else if (key == "medevac.reward_high") {
    p.medevac_reward_high = to_double(key, value);
  } else {
    throw Error(ErrorCode::UnknownKey, "unknown config key '" + key + "'");
  }
}

void apply_config_text(ToolConfig& config, const std::string& text) {
  std::istringstream ss(text);
  std::string line;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::BadConfig,
                  "line " + std::to_string(line_no) + ": expected key = value");
    apply_key(config, line.substr(0, eq), line.substr(eq + 1));
  }
}

ToolConfig load_config(const std::string& profile, const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides) {
  ToolConfig cfg = default_config(profile);
  if (!config_path.empty()) {
    std::ifstream in(config_path);
    if (!in) throw Error(ErrorCode::Io, "cannot open config '" + config_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    apply_config_text(cfg, buf.str());
  }
  for (const auto& [k, v] : overrides) apply_key(cfg, k, v);
  return cfg;
}

std::string config_to_string(const ToolConfig& config) {
  const ExperimentConfig& e = config.experiment;
  std::ostringstream out;
  out << "env.domain = " << domain_name(e.env.domain) << '\n';
  char buf[64];
  auto put = [&](const char* key, double v) {
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    out << key << " = " << buf << '\n';
  };
  put("env.speed", e.env.speed);
  out << "env.seed = " << e.env.seed << '\n';
  out << "env.horizon_cap = " << e.env.horizon_cap << '\n';
  out << "episodes = " << e.n_episodes << '\n';
  out << "future_episodes = " << e.L << '\n';
  out << "trials = " << e.n_trials << '\n';
  out << "clones = " << e.n_future_clones << '\n';
  out << "speeds = ";
  for (std::size_t i = 0; i < e.speeds.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", e.speeds[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
  out << "algorithms = ";
  for (std::size_t i = 0; i < e.algorithms.size(); ++i)
    out << (i ? "," : "") << algorithm_name(e.algorithms[i]);
  out << '\n';
  out << "pi = " << e.pi_preset << '\n';
  out << "beta = " << e.beta_preset << '\n';
  out << "base_seed = " << e.base_seed << '\n';
  out << "open.p = " << e.algo.open_p << '\n';
  out << "naive.p = " << e.algo.naive_p << '\n';
  out << "prowls.d = " << e.algo.prowls_d << '\n';
  out << "swis.window = " << e.algo.swis_window << '\n';
  const auto packed = e.env.params.pack();
  out << "params =";
  for (double v : packed) {
    std::snprintf(buf, sizeof(buf), " %.17g", v);
    out << buf;
  }
  out << '\n';
  out << "ablate.param = " << config.ablate_param << '\n';
  out << "ablate.values = ";
  for (std::size_t i = 0; i < config.ablate_values.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g", config.ablate_values[i]);
    out << (i ? "," : "") << buf;
  }
  out << '\n';
  return out.str();
}

std::uint64_t config_hash(const ToolConfig& config) {
  // FNV-1a over the canonical serialization
  const std::string s = config_to_string(config);
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

}  // namespace openns
