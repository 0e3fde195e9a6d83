#pragma once

#include <cstdint>
#include <vector>

namespace openns {

/// One logged interaction: the observation shown to the policy, the action it
/// took, the reward received, and the exact probability the behavior policy
/// assigned to that action (required by importance sampling).
struct Step {
  int observation = 0;
  int action = 0;
  double reward = 0.0;
  double behavior_prob = 1.0;
};

/// One episode of collected data; the unit all estimators consume.
struct EpisodeHistory {
  std::int64_t episode_index = 0;  // 0-based position in the dataset
  std::vector<Step> steps;

  double observed_return() const {
    double g = 0.0;
    for (const auto& s : steps) g += s.reward;
    return g;
  }
};

/// Ordered sequence of episodes collected under the behavior policies.
struct Dataset {
  std::vector<EpisodeHistory> episodes;

  std::size_t size() const { return episodes.size(); }
  bool empty() const { return episodes.empty(); }
};

}  // namespace openns
