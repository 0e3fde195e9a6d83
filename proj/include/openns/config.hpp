#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "openns/harness.hpp"

namespace openns {

/// Everything the CLI drives: the experiment itself plus the ablation grid.
struct ToolConfig {
  ExperimentConfig experiment;
  std::string ablate_param = "open_p";
  std::vector<double> ablate_values = {100, 200, 400};
};

/// Baseline configs. "paper" matches the published scale (n=2000, L=200,
/// 30 trials/clones, p=400, window=400); "desk" halves the scale and keeps
/// the 20%-of-n rule for p and the window (n=1000, p=200, window=200).
ToolConfig default_config(const std::string& profile);

/// Applies one `key = value` pair. Unknown keys fail before any work runs.
void apply_key(ToolConfig& config, const std::string& key, const std::string& value);

/// Parses TOML-style `key = value` text ('#' comments, bracketed or bare
/// comma lists) and applies every pair in order.
void apply_config_text(ToolConfig& config, const std::string& text);

ToolConfig load_config(const std::string& profile, const std::string& config_path,
                       const std::vector<std::pair<std::string, std::string>>& overrides);

/// Canonical serialization; feeds the provenance hash.
std::string config_to_string(const ToolConfig& config);
std::uint64_t config_hash(const ToolConfig& config);

std::vector<double> parse_double_list(const std::string& value);

}  // namespace openns
