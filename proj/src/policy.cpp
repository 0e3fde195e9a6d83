#include "openns/policy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>

#include "openns/errors.hpp"

namespace openns {

namespace {

constexpr double kRowSumTol = 1e-12;

// Observation/action space dimensions of the shipped domains. Presets are
// defined against these; the harness checks the policy matches the live
// environment before use.
constexpr int kRoboToyObs = 1, kRoboToyActs = 2;
constexpr int kMountainCarObs = 64, kMountainCarActs = 3;
constexpr int kMedevacObs = 48, kMedevacActs = 5;
constexpr int kMedevacUnits = 4;
constexpr int kMedevacPriorities = 3;

struct PresetSpec {
  std::string name;
  bool has_arg = false;
  double arg = 0.0;
};

PresetSpec parse_preset_id(const std::string& id) {
  PresetSpec spec;
  const auto open = id.find('(');
  if (open == std::string::npos) {
    spec.name = id;
    return spec;
  }
  if (id.back() != ')') throw Error(ErrorCode::BadConfig, "malformed preset id '" + id + "'");
  spec.name = id.substr(0, open);
  const std::string arg = id.substr(open + 1, id.size() - open - 2);
  try {
    std::size_t pos = 0;
    spec.arg = std::stod(arg, &pos);
    if (pos != arg.size()) throw std::invalid_argument(arg);
  } catch (const std::exception&) {
    throw Error(ErrorCode::BadConfig, "bad preset argument in '" + id + "'");
  }
  spec.has_arg = true;
  return spec;
}

double preset_arg(const PresetSpec& spec, double fallback) {
  return spec.has_arg ? spec.arg : fallback;
}

Policy robotoy_action_heavy(double q, int heavy_action) {
  std::vector<double> t(kRoboToyObs * kRoboToyActs, 0.0);
  t[heavy_action] = q;
  t[1 - heavy_action] = 1.0 - q;
  return Policy::tabular(kRoboToyObs, kRoboToyActs, std::move(t));
}

// Grid policy for mountain car: obs = pos_bin*8 + vel_bin, vel bins 0..3 are
// negative velocities. Pushes along the current velocity with mass q.
Policy mc_energy_pump(double q) {
  std::vector<double> t(kMountainCarObs * kMountainCarActs, 0.0);
  const double rest = (1.0 - q) / 2.0;
  for (int obs = 0; obs < kMountainCarObs; ++obs) {
    const int vel_bin = obs % 8;
    const int push = vel_bin < 4 ? 0 : 2;
    for (int a = 0; a < kMountainCarActs; ++a) t[obs * kMountainCarActs + a] = rest;
    t[obs * kMountainCarActs + push] = q;
  }
  return Policy::tabular(kMountainCarObs, kMountainCarActs, std::move(t));
}

Policy mc_constant_action(int action) {
  std::vector<double> t(kMountainCarObs * kMountainCarActs, 0.0);
  for (int obs = 0; obs < kMountainCarObs; ++obs) t[obs * kMountainCarActs + action] = 1.0;
  return Policy::tabular(kMountainCarObs, kMountainCarActs, std::move(t));
}

// Medevac observation encodes (priority, availability mask):
// obs = priority*16 + mask, mask bit u set when unit u is idle.
Policy medevac_dispatch_heavy() {
  const double q_by_priority[kMedevacPriorities] = {0.5, 0.8, 0.95};
  std::vector<double> t(kMedevacObs * kMedevacActs, 0.0);
  for (int pr = 0; pr < kMedevacPriorities; ++pr) {
    for (int mask = 0; mask < 16; ++mask) {
      const int obs = pr * 16 + mask;
      int idle = 0;
      for (int u = 0; u < kMedevacUnits; ++u) idle += (mask >> u) & 1;
      if (idle == 0) {
        t[obs * kMedevacActs + kMedevacUnits] = 1.0;
        continue;
      }
      const double q = q_by_priority[pr];
      for (int u = 0; u < kMedevacUnits; ++u) {
        if ((mask >> u) & 1) t[obs * kMedevacActs + u] = q / idle;
      }
      t[obs * kMedevacActs + kMedevacUnits] = 1.0 - q;
    }
  }
  return Policy::tabular(kMedevacObs, kMedevacActs, std::move(t));
}

Policy medevac_always_dispatch() {
  std::vector<double> t(kMedevacObs * kMedevacActs, 0.0);
  for (int pr = 0; pr < kMedevacPriorities; ++pr) {
    for (int mask = 0; mask < 16; ++mask) {
      const int obs = pr * 16 + mask;
      int first = kMedevacUnits;  // no-dispatch when everyone is busy
      for (int u = 0; u < kMedevacUnits; ++u) {
        if ((mask >> u) & 1) {
          first = u;
          break;
        }
      }
      t[obs * kMedevacActs + first] = 1.0;
    }
  }
  return Policy::tabular(kMedevacObs, kMedevacActs, std::move(t));
}

Policy medevac_never_dispatch() {
  std::vector<double> t(kMedevacObs * kMedevacActs, 0.0);
  for (int obs = 0; obs < kMedevacObs; ++obs) t[obs * kMedevacActs + kMedevacUnits] = 1.0;
  return Policy::tabular(kMedevacObs, kMedevacActs, std::move(t));
}

}  // namespace

void Policy::validate() const {
  if (n_obs_ <= 0 || n_act_ <= 0) throw Error(ErrorCode::BadConfig, "empty policy table");
  if (table_.size() != static_cast<std::size_t>(n_obs_) * n_act_)
    throw Error(ErrorCode::DimensionMismatch, "policy table size mismatch");
  for (int o = 0; o < n_obs_; ++o) {
    double sum = 0.0;
    for (int a = 0; a < n_act_; ++a) {
      const double p = table_[o * n_act_ + a];
      if (!(p >= 0.0) || !std::isfinite(p))
        throw Error(ErrorCode::BadConfig, "negative or non-finite probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > kRowSumTol)
      throw Error(ErrorCode::BadConfig, "policy row does not sum to 1");
  }
}

void Policy::check_obs(int observation) const {
  if (observation < 0 || observation >= n_obs_)
    throw Error(ErrorCode::OutOfRange, "observation id out of range");
}

double Policy::prob(int observation, int action) const {
  check_obs(observation);
  if (action < 0 || action >= n_act_) throw Error(ErrorCode::OutOfRange, "action id out of range");
  return table_[observation * n_act_ + action];
}

int Policy::sample(int observation, RandomStream& rng) const {
  check_obs(observation);
  const double u = rng.uniform01();
  double cum = 0.0;
  for (int a = 0; a < n_act_; ++a) {
    cum += table_[observation * n_act_ + a];
    if (u < cum) return a;
  }
  // Guard against cum landing a hair below 1; return the last supported action.
  for (int a = n_act_ - 1; a >= 0; --a) {
    if (table_[observation * n_act_ + a] > 0.0) return a;
  }
  throw Error(ErrorCode::BadConfig, "policy row without support");
}

Policy Policy::tabular(int n_obs, int n_act, std::vector<double> table) {
  Policy p;
  p.kind_ = Kind::Tabular;
  p.n_obs_ = n_obs;
  p.n_act_ = n_act;
  p.table_ = std::move(table);
  p.validate();
  return p;
}

Policy Policy::uniform(int n_obs, int n_act) {
  std::vector<double> t(static_cast<std::size_t>(n_obs) * n_act, 1.0 / n_act);
  return tabular(n_obs, n_act, std::move(t));
}

Policy Policy::mixture(const std::vector<Policy>& components, const std::vector<double>& weights) {
  if (components.empty() || components.size() != weights.size())
    throw Error(ErrorCode::DimensionMismatch, "mixture components/weights mismatch");
  double wsum = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0)) throw Error(ErrorCode::BadConfig, "negative mixture weight");
    wsum += w;
  }
  if (std::abs(wsum - 1.0) > kRowSumTol)
    throw Error(ErrorCode::BadConfig, "mixture weights do not sum to 1");

  const int n_obs = components.front().observation_count();
  const int n_act = components.front().action_count();
  std::vector<double> t(static_cast<std::size_t>(n_obs) * n_act, 0.0);
  for (std::size_t k = 0; k < components.size(); ++k) {
    const Policy& c = components[k];
    if (c.observation_count() != n_obs || c.action_count() != n_act)
      throw Error(ErrorCode::DimensionMismatch, "mixture components over different spaces");
    for (std::size_t i = 0; i < t.size(); ++i) t[i] += weights[k] * c.table()[i];
  }
  Policy p = tabular(n_obs, n_act, std::move(t));
  p.kind_ = Kind::Mixture;
  return p;
}

Policy Policy::preset(const std::string& id) {
  const PresetSpec spec = parse_preset_id(id);
  Policy p;
  if (spec.name == "robotoy_run_heavy") {
    p = robotoy_action_heavy(preset_arg(spec, 0.8), 1);
  } else if (spec.name == "robotoy_walk_heavy") {
    p = robotoy_action_heavy(preset_arg(spec, 0.8), 0);
  } else if (spec.name == "robotoy_always_run") {
    p = robotoy_action_heavy(1.0, 1);
  } else if (spec.name == "robotoy_always_walk") {
    p = robotoy_action_heavy(1.0, 0);
  } else if (spec.name == "robotoy_behavior") {
    // Leans toward walking (run mass 0.45) while keeping pi/beta <= 2
    // against the run-heavy evaluation presets.
    p = Policy::mixture({robotoy_action_heavy(0.4, 1), Policy::uniform(kRoboToyObs, kRoboToyActs)},
                        {0.5, 0.5});
  } else if (spec.name == "mc_energy_pump") {
    p = mc_energy_pump(preset_arg(spec, 0.8));
  } else if (spec.name == "mc_full_throttle") {
    p = mc_constant_action(2);
  } else if (spec.name == "mc_coast") {
    p = mc_constant_action(1);
  } else if (spec.name == "mc_behavior") {
    p = Policy::mixture({mc_energy_pump(0.8), Policy::uniform(kMountainCarObs, kMountainCarActs)},
                        {0.5, 0.5});
  } else if (spec.name == "medevac_dispatch_heavy") {
    p = medevac_dispatch_heavy();
  } else if (spec.name == "medevac_always_dispatch") {
    p = medevac_always_dispatch();
  } else if (spec.name == "medevac_never_dispatch") {
    p = medevac_never_dispatch();
  } else if (spec.name == "medevac_behavior") {
    p = Policy::mixture({medevac_dispatch_heavy(), Policy::uniform(kMedevacObs, kMedevacActs)},
                        {0.5, 0.5});
  } else if (spec.name == "uniform2") {
    p = Policy::uniform(1, 2);
  } else {
    throw Error(ErrorCode::BadConfig, "unknown policy preset '" + id + "'");
  }
  p.kind_ = Kind::DomainPreset;
  p.preset_id_ = id;
  return p;
}

double support_ratio_bound(const Policy& pi, const Policy& beta) {
  if (pi.observation_count() != beta.observation_count() ||
      pi.action_count() != beta.action_count())
    throw Error(ErrorCode::DimensionMismatch, "policies over different spaces");
  double bound = 0.0;
  for (int o = 0; o < pi.observation_count(); ++o) {
    for (int a = 0; a < pi.action_count(); ++a) {
      const double p = pi.prob(o, a);
      if (p <= 0.0) continue;
      const double b = beta.prob(o, a);
      if (b <= 0.0) return std::numeric_limits<double>::infinity();
      bound = std::max(bound, p / b);
    }
  }
  return bound;
}

void save_policy_csv(const Policy& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open '" + path + "' for writing");
  out << "observation_id,action_id,probability\n";
  char buf[64];
  for (int o = 0; o < p.observation_count(); ++o) {
    for (int a = 0; a < p.action_count(); ++a) {
      std::snprintf(buf, sizeof(buf), "%.17g", p.prob(o, a));
      out << o << ',' << a << ',' << buf << '\n';
    }
  }
}

Policy load_policy_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::Io, "empty policy file '" + path + "'");
  std::map<std::pair<int, int>, double> cells;
  int max_obs = -1, max_act = -1;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string f0, f1, f2;
    if (!std::getline(ss, f0, ',') || !std::getline(ss, f1, ',') || !std::getline(ss, f2))
      throw Error(ErrorCode::Io, "malformed policy row '" + line + "'");
    const int o = std::stoi(f0), a = std::stoi(f1);
    cells[{o, a}] = std::stod(f2);
    max_obs = std::max(max_obs, o);
    max_act = std::max(max_act, a);
  }
  if (max_obs < 0) throw Error(ErrorCode::Io, "policy file has no rows");
  std::vector<double> t(static_cast<std::size_t>(max_obs + 1) * (max_act + 1), 0.0);
  for (const auto& [key, v] : cells) t[key.first * (max_act + 1) + key.second] = v;
  return Policy::tabular(max_obs + 1, max_act + 1, std::move(t));
}

}  // namespace openns
