#include "settag/tagger.hpp"

#include <cmath>
#include <numeric>

namespace settag {

bool is_valid_posterior(const Posterior& p, std::size_t size, double tolerance) {
  if (p.size() != size) return false;
  double sum = 0.0;
  for (double x : p.probs) {
    if (!std::isfinite(x) || x < 0.0 || x > 1.0 + tolerance) return false;
    sum += x;
  }
  return std::abs(sum - 1.0) <= tolerance;
}

Posterior normalize(std::vector<double> weights, const std::vector<bool>& support) {
  double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  if (!(sum > 0.0)) {
    std::size_t n = 0;
    for (std::size_t t = 0; t < weights.size(); ++t) {
      const bool in = support.empty() || support[t];
      weights[t] = in ? 1.0 : 0.0;
      n += in ? 1 : 0;
    }
    sum = static_cast<double>(n);
  }
  for (auto& w : weights) w /= sum;
  return Posterior{std::move(weights)};
}

}  // namespace settag
