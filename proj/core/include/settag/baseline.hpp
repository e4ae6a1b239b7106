#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "settag/tagger.hpp"

namespace settag {

// Relative-frequency tagger: P(t|w) = #(t,w) / #(w) for known words, the
// tag prior #(t) / total otherwise. Context is ignored.
class BaselineModel final : public Tagger {
 public:
  // Tokens without a gold tag are skipped. Throws DataError if no token
  // carries a gold tag.
  static BaselineModel train(const std::vector<Document>& docs, const TagSet& tagset);

  Posterior posterior(std::string_view word) const;
  Posterior prior() const;

  std::uint64_t word_count(std::string_view word) const;
  std::uint64_t joint_count(std::string_view word, TagId tag) const;
  std::uint64_t tag_count(TagId tag) const { return tag_counts_[tag]; }
  std::uint64_t total() const { return total_; }

  std::string_view kind() const override { return "baseline"; }
  const TagSet& tagset() const override { return tagset_; }
  const std::vector<bool>& support() const override { return support_; }
  bool knows(std::string_view word) const override;
  std::vector<Posterior> posteriors(const Document& doc) const override;
  void save(std::ostream& out) const override;

  // Reconstructs a model from its serialized fields (used by the model loader).
  BaselineModel(TagSet tagset, std::map<std::string, std::vector<std::uint64_t>, std::less<>> joint);

 private:
  TagSet tagset_;
  std::map<std::string, std::vector<std::uint64_t>, std::less<>> joint_;
  std::vector<std::uint64_t> tag_counts_;
  std::vector<bool> support_;
  std::uint64_t total_ = 0;
};

}  // namespace settag
