#include "settag/features.hpp"

#include <algorithm>
#include <limits>

#include "settag/utf8.hpp"

namespace settag {

namespace {

constexpr FeatureId kMissing = std::numeric_limits<FeatureId>::max();
constexpr std::string_view kSlotNames[] = {"t-2=", "t-1=", "t+1="};

std::string tag_value(ContextTag tag, const TagSet& tagset) {
  if (tag == kBoundaryTag) return "<BOUNDARY>";
  if (tag == kPlaceholderTag) return "<PENDING>";
  return tagset.label(static_cast<TagId>(tag));
}

std::vector<std::string> word_feature_strings(const Document& doc, std::size_t i, const FeatureConfig& config) {
  std::vector<std::string> f;
  const std::string& word = doc.tokens[i].normalized;
  const auto lower = utf8::fold(utf8::decode(word));
  f.emplace_back("bias");
  f.push_back("w=" + word);
  f.push_back("lw=" + utf8::encode(lower));
  for (std::size_t k = 1; k <= std::min(config.max_affix, lower.size()); ++k) {
    f.push_back("p" + std::to_string(k) + "=" + utf8::encode(lower.substr(0, k)));
    f.push_back("s" + std::to_string(k) + "=" + utf8::encode(lower.substr(lower.size() - k)));
  }
  if (std::any_of(lower.begin(), lower.end(), utf8::is_digit)) f.emplace_back("has_digit");
  if (std::any_of(lower.begin(), lower.end(), utf8::is_punct)) f.emplace_back("has_punct");
  const auto l = static_cast<std::ptrdiff_t>(doc.size());
  for (std::size_t d = 1; d <= config.word_window; ++d) {
    const auto off = static_cast<std::ptrdiff_t>(d);
    const auto at = static_cast<std::ptrdiff_t>(i);
    const std::string left = at - off >= 0 ? utf8::fold(doc.tokens[at - off].normalized) : "<s>";
    const std::string right = at + off < l ? utf8::fold(doc.tokens[at + off].normalized) : "</s>";
    f.push_back("w-" + std::to_string(d) + "=" + left);
    f.push_back("w+" + std::to_string(d) + "=" + right);
  }
  return f;
}

}  // namespace

ContextTags context_at(const std::vector<ContextTag>& tags, std::size_t i) {
  ContextTags c;
  if (i >= 2) c.prev2 = tags[i - 2];
  if (i >= 1) c.prev1 = tags[i - 1];
  if (i + 1 < tags.size()) c.next1 = tags[i + 1];
  return c;
}

std::vector<std::string> feature_strings(const Document& doc, std::size_t i, const ContextTags& context,
                                         const TagSet& tagset, const FeatureConfig& config) {
  auto f = word_feature_strings(doc, i, config);
  if (config.use_tags) {
    f.push_back(std::string(kSlotNames[0]) + tag_value(context.prev2, tagset));
    f.push_back(std::string(kSlotNames[1]) + tag_value(context.prev1, tagset));
    f.push_back(std::string(kSlotNames[2]) + tag_value(context.next1, tagset));
  }
  return f;
}

FeatureId FeatureIndex::add(const std::string& name) {
  auto [it, inserted] = ids_.emplace(name, static_cast<FeatureId>(names_.size()));
  if (inserted) names_.push_back(name);
  return it->second;
}

const FeatureId* FeatureIndex::find(std::string_view name) const {
  auto it = ids_.find(std::string(name));
  return it == ids_.end() ? nullptr : &it->second;
}

FeatureVector extract_features(const FeatureIndex& index, const Document& doc, std::size_t i,
                               const ContextTags& context, const TagSet& tagset, const FeatureConfig& config) {
  FeatureVector v;
  for (const auto& name : feature_strings(doc, i, context, tagset, config)) {
    if (const auto* id = index.find(name)) v.ids.push_back(*id);
  }
  std::sort(v.ids.begin(), v.ids.end());
  v.ids.erase(std::unique(v.ids.begin(), v.ids.end()), v.ids.end());
  return v;
}

DocumentFeatures::DocumentFeatures(const FeatureIndex& index, const Document& doc, const TagSet& tagset,
                                   const FeatureConfig& config)
    : use_tags_(config.use_tags) {
  word_features_.reserve(doc.size());
  for (std::size_t i = 0; i < doc.size(); ++i) {
    std::vector<FeatureId> ids;
    for (const auto& name : word_feature_strings(doc, i, config)) {
      if (const auto* id = index.find(name)) ids.push_back(*id);
    }
    word_features_.push_back(std::move(ids));
  }
  if (!use_tags_) return;
  tag_features_.assign(3, std::vector<FeatureId>(tagset.size() + 2, kMissing));
  for (std::size_t slot = 0; slot < 3; ++slot) {
    for (ContextTag t = kPlaceholderTag; t < static_cast<ContextTag>(tagset.size()); ++t) {
      if (const auto* id = index.find(std::string(kSlotNames[slot]) + tag_value(t, tagset))) {
        tag_features_[slot][static_cast<std::size_t>(t + 2)] = *id;
      }
    }
  }
}

FeatureVector DocumentFeatures::at(std::size_t i, const ContextTags& context) const {
  FeatureVector v{word_features_.at(i)};
  if (use_tags_) {
    const ContextTag slots[] = {context.prev2, context.prev1, context.next1};
    for (std::size_t k = 0; k < 3; ++k) {
      const auto id = tag_features_[k][static_cast<std::size_t>(slots[k] + 2)];
      if (id != kMissing) v.ids.push_back(id);
    }
  }
  std::sort(v.ids.begin(), v.ids.end());
  v.ids.erase(std::unique(v.ids.begin(), v.ids.end()), v.ids.end());
  return v;
}

}  // namespace settag
