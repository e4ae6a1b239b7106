#include "settag/baseline.hpp"

#include <ostream>

#include "detail/json_io.hpp"
#include "settag/error.hpp"

namespace settag {

BaselineModel::BaselineModel(TagSet tagset, std::map<std::string, std::vector<std::uint64_t>, std::less<>> joint)
    : tagset_(std::move(tagset)),
      joint_(std::move(joint)),
      tag_counts_(tagset_.size(), 0),
      support_(tagset_.size(), false) {
  for (const auto& [word, counts] : joint_) {
    if (counts.size() != tagset_.size()) throw DataError("baseline counts for '" + word + "' have wrong length");
    for (std::size_t t = 0; t < counts.size(); ++t) {
      tag_counts_[t] += counts[t];
      total_ += counts[t];
    }
  }
  if (total_ == 0) throw DataError("baseline model has no counts");
  for (std::size_t t = 0; t < tag_counts_.size(); ++t) support_[t] = tag_counts_[t] > 0;
}

BaselineModel BaselineModel::train(const std::vector<Document>& docs, const TagSet& tagset) {
  std::map<std::string, std::vector<std::uint64_t>, std::less<>> joint;
  bool any = false;
  for (const auto& doc : docs) {
    for (const auto& tok : doc.tokens) {
      if (!tok.gold) continue;
      auto& counts = joint[tok.normalized];
      if (counts.empty()) counts.assign(tagset.size(), 0);
      ++counts.at(*tok.gold);
      any = true;
    }
  }
  if (!any) throw DataError("baseline: empty training data");
  return BaselineModel(tagset, std::move(joint));
}

Posterior BaselineModel::prior() const {
  Posterior p{std::vector<double>(tagset_.size(), 0.0)};
  for (std::size_t t = 0; t < p.probs.size(); ++t) {
    p.probs[t] = static_cast<double>(tag_counts_[t]) / static_cast<double>(total_);
  }
  return p;
}

Posterior BaselineModel::posterior(std::string_view word) const {
  auto it = joint_.find(word);
  if (it == joint_.end()) return prior();
  std::uint64_t n = 0;
  for (auto c : it->second) n += c;
  Posterior p{std::vector<double>(tagset_.size(), 0.0)};
  for (std::size_t t = 0; t < p.probs.size(); ++t) {
    p.probs[t] = static_cast<double>(it->second[t]) / static_cast<double>(n);
  }
  return p;
}

std::uint64_t BaselineModel::word_count(std::string_view word) const {
  auto it = joint_.find(word);
  if (it == joint_.end()) return 0;
  std::uint64_t n = 0;
  for (auto c : it->second) n += c;
  return n;
}

std::uint64_t BaselineModel::joint_count(std::string_view word, TagId tag) const {
  auto it = joint_.find(word);
  return it == joint_.end() ? 0 : it->second.at(tag);
}

bool BaselineModel::knows(std::string_view word) const { return joint_.find(word) != joint_.end(); }

std::vector<Posterior> BaselineModel::posteriors(const Document& doc) const {
  std::vector<Posterior> out;
  out.reserve(doc.size());
  for (const auto& tok : doc.tokens) out.push_back(posterior(tok.normalized));
  return out;
}

void BaselineModel::save(std::ostream& out) const {
  auto j = detail::model_header(kind(), tagset_);
  auto& counts = j["joint_counts"] = detail::Json::array();
  for (const auto& [word, c] : joint_) counts.push_back({word, c});
  out << j.dump(1) << '\n';
}

}  // namespace settag
