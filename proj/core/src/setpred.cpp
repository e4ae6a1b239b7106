#include "settag/setpred.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace settag {

UtilityConfig::UtilityConfig(double beta_in, std::size_t num_tags_in) : beta(beta_in), num_tags(num_tags_in) {
  if (!(beta >= kMinBeta && beta <= kMaxBeta)) {
    throw std::invalid_argument("beta must lie in [" + std::to_string(kMinBeta) + ", " + std::to_string(kMaxBeta) +
                                "], got " + std::to_string(beta));
  }
  if (num_tags < 1) throw std::invalid_argument("tag set must not be empty");
}

double g_beta(std::size_t k, const UtilityConfig& cfg) {
  if (k < 1 || k > cfg.num_tags) {
    throw std::out_of_range("set size " + std::to_string(k) + " outside [1, " + std::to_string(cfg.num_tags) + "]");
  }
  if (k == 1) return 1.0;
  const double ratio = static_cast<double>(k - 1) / static_cast<double>(cfg.num_tags - 1);
  return 1.0 - std::pow(ratio, cfg.beta);
}

bool PredictionSet::contains(TagId t) const { return std::find(tags.begin(), tags.end(), t) != tags.end(); }

double utility(std::optional<TagId> gold, const PredictionSet& predicted, const UtilityConfig& cfg) {
  if (!gold || !predicted.contains(*gold)) return 0.0;
  return g_beta(predicted.tags.size(), cfg);
}

double expected_utility(const Posterior& posterior, std::span<const TagId> subset, const UtilityConfig& cfg) {
  if (subset.empty()) throw std::invalid_argument("expected_utility: empty subset");
  std::vector<TagId> sorted(subset.begin(), subset.end());
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw std::invalid_argument("expected_utility: duplicate tag in subset");
  }
  double mass = 0.0;
  for (auto t : subset) mass += posterior.probs.at(t);
  return g_beta(subset.size(), cfg) * mass;
}

std::vector<TagId> rank_tags(const Posterior& posterior) {
  std::vector<TagId> order(posterior.size());
  std::iota(order.begin(), order.end(), TagId{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](TagId a, TagId b) { return posterior.probs[a] > posterior.probs[b]; });
  return order;
}

TagId argmax_tag(const Posterior& posterior) {
  if (posterior.probs.empty()) throw std::invalid_argument("argmax_tag: empty posterior");
  // max_element returns the first maximum, i.e. the smallest id.
  return static_cast<TagId>(std::max_element(posterior.probs.begin(), posterior.probs.end()) -
                            posterior.probs.begin());
}

PredictionSet ubop(const Posterior& posterior, const UtilityConfig& cfg) {
  if (posterior.size() != cfg.num_tags) {
    throw std::invalid_argument("posterior length " + std::to_string(posterior.size()) +
                                " does not match tag set size " + std::to_string(cfg.num_tags));
  }
  const auto order = rank_tags(posterior);
  PredictionSet out;
  out.tags.push_back(order[0]);
  double mass = posterior.probs[order[0]];
  if (cfg.num_tags == 1) {
    out.expected_utility = mass;
    return out;
  }
  out.expected_utility = mass;  // g(1) = 1
  // For beta < 1 the prefix utilities can dip and rise again, so every prefix
  // is scored rather than stopping at the first decrease. Ties keep the
  // smaller set.
  std::size_t best = 1;
  for (std::size_t k = 1; k < order.size(); ++k) {
    mass += posterior.probs[order[k]];
    const double eu = g_beta(k + 1, cfg) * mass;
    if (eu > out.expected_utility) {
      out.expected_utility = eu;
      best = k + 1;
    }
  }
  out.tags.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(best));
  return out;
}

}  // namespace settag
