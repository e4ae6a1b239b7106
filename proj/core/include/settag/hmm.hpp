#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "settag/tagger.hpp"

namespace settag {

struct HmmOptions {
  // Longest suffix (in code points) used for unknown-word emissions.
  std::size_t max_suffix = 4;
  // Words seen at most this often contribute to the suffix statistics.
  std::uint64_t rare_threshold = 2;
  // Add-epsilon smoothing of known-word emissions.
  double emission_epsilon = 0.1;
};

// Second-order (trigram) HMM tagger in the style of TnT: deleted-interpolation
// transition smoothing and suffix-based emissions for unknown words.
// Posteriors are per-position marginals from forward-backward in log space.
class HmmModel final : public Tagger {
 public:
  // Everything that is serialized. Transition counts are indexed with the
  // boundary symbol at position `tagset.size()`.
  struct Params {
    TagSet tagset;
    HmmOptions options;
    std::array<double, 3> lambdas{1.0, 0.0, 0.0};  // unigram, bigram, trigram
    std::vector<std::uint64_t> unigram;             // [t]
    std::vector<std::uint64_t> bigram;              // [(b) * s + t], b in 0..s
    std::vector<std::uint64_t> trigram;             // [((a) * (s+1) + b) * s + t]
    std::map<std::string, std::vector<std::uint64_t>, std::less<>> emissions;
    std::map<std::string, std::vector<std::uint64_t>, std::less<>> suffixes;
  };

  // Throws DataError if no token carries a gold tag.
  static HmmModel train(const std::vector<Document>& docs, const TagSet& tagset, const HmmOptions& options = {});

  explicit HmmModel(Params params);

  const Params& params() const { return p_; }
  const std::array<double, 3>& lambdas() const { return p_.lambdas; }

  // Interpolated P(t | prev2, prev1); std::nullopt stands for the document
  // boundary. Sums to one over t for every context.
  double transition(std::optional<TagId> prev2, std::optional<TagId> prev1, TagId t) const;
  // Emission score of `word` under tag t: P(w|t) for known words, and a value
  // proportional to P(t|suffix) / P(t) for unknown ones.
  double emission(std::string_view word, TagId t) const;

  std::string_view kind() const override { return "hmm"; }
  const TagSet& tagset() const override { return p_.tagset; }
  const std::vector<bool>& support() const override { return support_; }
  bool knows(std::string_view word) const override;
  std::vector<Posterior> posteriors(const Document& doc) const override;
  void save(std::ostream& out) const override;

 private:
  std::vector<double> emission_row(std::string_view word) const;
  std::vector<double> unknown_emission(std::string_view word) const;
  std::size_t bos() const { return p_.tagset.size(); }

  Params p_;
  std::vector<bool> support_;
  std::vector<TagId> active_;
  std::uint64_t total_ = 0;
  double theta_ = 0.0;
  std::vector<double> rare_prior_;
  // log P(t | a, b) for a, b in 0..s (s = boundary), t in 0..s-1.
  std::vector<double> log_trans_;
};

}  // namespace settag
