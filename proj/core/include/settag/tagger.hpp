#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "settag/corpus.hpp"

namespace settag {

// Probability vector over a tag set, indexed by TagId.
struct Posterior {
  std::vector<double> probs;

  std::size_t size() const { return probs.size(); }
  double operator[](TagId t) const { return probs[t]; }

  friend bool operator==(const Posterior&, const Posterior&) = default;
};

// Non-negative, finite, length `size` and summing to 1 within `tolerance`.
bool is_valid_posterior(const Posterior& p, std::size_t size, double tolerance = 1e-9);

// Scales non-negative weights to sum to one. An all-zero vector becomes the
// uniform distribution over `support` (or over everything if support is empty).
Posterior normalize(std::vector<double> weights, const std::vector<bool>& support = {});

// Common contract of all taggers: a trained, immutable model that maps each
// token of a document to a posterior over its tag set. Implementations are
// safe to share across threads.
class Tagger {
 public:
  virtual ~Tagger() = default;

  virtual std::string_view kind() const = 0;
  virtual const TagSet& tagset() const = 0;
  // Tags observed in training; all other tags always receive probability 0.
  virtual const std::vector<bool>& support() const = 0;
  // Whether `word` (normalized form) occurred in the training data.
  virtual bool knows(std::string_view word) const = 0;
  // One posterior per token, computed from the tokens' normalized forms.
  virtual std::vector<Posterior> posteriors(const Document& doc) const = 0;
  // Versioned structured-text model file.
  virtual void save(std::ostream& out) const = 0;
};

}  // namespace settag
