#pragma once

#include <optional>
#include <span>
#include <vector>

#include "settag/corpus.hpp"
#include "settag/tagger.hpp"

namespace settag {

// Supported range of the risk-aversion parameter. Small values force
// singleton predictions, large ones favour larger sets.
inline constexpr double kMinBeta = 1e-3;
inline constexpr double kMaxBeta = 64.0;

// Utility family u(y, Y) = [y in Y] * g(|Y|) with
// g(k) = 1 - ((k - 1) / (s - 1))^beta.
struct UtilityConfig {
  double beta = 1.0;
  std::size_t num_tags = 2;

  // Throws std::invalid_argument unless kMinBeta <= beta <= kMaxBeta and
  // num_tags >= 1.
  UtilityConfig(double beta, std::size_t num_tags);
};

// Set-size discount g(k). g(1) = 1 and g(s) = 0 exactly.
// Throws std::out_of_range unless 1 <= k <= s.
double g_beta(std::size_t k, const UtilityConfig& cfg);

struct PredictionSet {
  // Descending posterior probability, ties by ascending id.
  std::vector<TagId> tags;
  double expected_utility = 0.0;

  bool contains(TagId t) const;
};

// 0 if gold is absent (or unknown to the model), g(|set|) otherwise.
double utility(std::optional<TagId> gold, const PredictionSet& predicted, const UtilityConfig& cfg);

// g(|subset|) * sum of the subset's posterior mass. Throws
// std::invalid_argument for an empty subset or duplicate ids.
double expected_utility(const Posterior& posterior, std::span<const TagId> subset, const UtilityConfig& cfg);

// Tag ids by descending probability, ties by ascending id.
std::vector<TagId> rank_tags(const Posterior& posterior);

// Largest entry, ties by ascending id.
TagId argmax_tag(const Posterior& posterior);

// Bayes-optimal set prediction: the top-k prefix of rank_tags() with the
// highest expected utility, smallest k on ties. When the prefix utilities
// rise and then fall this is the prefix grown until the first non-increase.
PredictionSet ubop(const Posterior& posterior, const UtilityConfig& cfg);

}  // namespace settag
