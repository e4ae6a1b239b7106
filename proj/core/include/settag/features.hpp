#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "settag/corpus.hpp"

namespace settag {

struct FeatureConfig {
  // Neighbouring words at offsets -window..-1 and +1..+window.
  std::size_t word_window = 2;
  // Prefixes and suffixes of length 1..max_affix (code points, lowercased).
  std::size_t max_affix = 4;
  // Tags at offsets -2, -1 and +1.
  bool use_tags = true;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

// Tag values of the context slots. Non-negative values are TagIds.
using ContextTag = std::int32_t;
inline constexpr ContextTag kBoundaryTag = -1;     // outside the document
inline constexpr ContextTag kPlaceholderTag = -2;  // not yet predicted

struct ContextTags {
  ContextTag prev2 = kBoundaryTag;
  ContextTag prev1 = kBoundaryTag;
  ContextTag next1 = kBoundaryTag;
};

// Context slots for position i taken from a full tag sequence (gold tags or
// a first-pass tagging). Entries of `tags` may be kPlaceholderTag.
ContextTags context_at(const std::vector<ContextTag>& tags, std::size_t i);

// The feature templates instantiated at position i, as strings.
std::vector<std::string> feature_strings(const Document& doc, std::size_t i, const ContextTags& context,
                                         const TagSet& tagset, const FeatureConfig& config);

using FeatureId = std::uint32_t;

// Sorted, duplicate-free ids of active binary features.
struct FeatureVector {
  std::vector<FeatureId> ids;

  friend bool operator==(const FeatureVector&, const FeatureVector&) = default;
};

// Bijective feature name <-> id map. Ids are assigned in insertion order.
class FeatureIndex {
 public:
  FeatureId add(const std::string& name);
  const FeatureId* find(std::string_view name) const;
  const std::string& name(FeatureId id) const { return names_.at(id); }
  std::size_t size() const { return names_.size(); }
  const std::vector<std::string>& names() const { return names_; }

 private:
  std::unordered_map<std::string, FeatureId> ids_;
  std::vector<std::string> names_;
};

// Features of position i restricted to those present in `index`.
FeatureVector extract_features(const FeatureIndex& index, const Document& doc, std::size_t i,
                               const ContextTags& context, const TagSet& tagset, const FeatureConfig& config);

// Precomputed word-level features of a document. Tag features are looked up
// per call, which is what the decoders need: the words stay fixed while the
// context tags change.
class DocumentFeatures {
 public:
  DocumentFeatures(const FeatureIndex& index, const Document& doc, const TagSet& tagset,
                   const FeatureConfig& config);

  FeatureVector at(std::size_t i, const ContextTags& context) const;

 private:
  std::vector<std::vector<FeatureId>> word_features_;
  // [slot][tag + 2] -> feature id or kMissing, slot = prev2, prev1, next1.
  std::vector<std::vector<FeatureId>> tag_features_;
  bool use_tags_;
};

}  // namespace settag
