#include "settag/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <ostream>
#include <set>
#include <sstream>

#include "settag/error.hpp"

namespace settag {

TagSet::TagSet(std::vector<std::string> labels) : labels_(std::move(labels)) {
  std::sort(labels_.begin(), labels_.end());
  labels_.erase(std::unique(labels_.begin(), labels_.end()), labels_.end());
  for (const auto& l : labels_) {
    if (l.empty()) throw DataError("empty tag label");
  }
  if (labels_.size() > 0xFFFF) throw DataError("tag set too large");
}

std::optional<TagId> TagSet::find(std::string_view label) const {
  auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) return std::nullopt;
  return static_cast<TagId>(it - labels_.begin());
}

TagId TagSet::id(std::string_view label) const {
  if (auto id = find(label)) return *id;
  throw DataError("unknown tag label '" + std::string(label) + "'");
}

std::size_t Corpus::token_count() const {
  std::size_t n = 0;
  for (const auto& d : documents) n += d.size();
  return n;
}

namespace {

struct RawToken {
  std::string word;
  std::string label;
};

std::vector<RawToken> parse_lines(const SourceText& source) {
  std::vector<RawToken> out;
  std::istringstream in(source.text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos || line.find('\t', tab + 1) != std::string::npos) {
      throw ParseError(source.name, line_no, "expected exactly one tab in 'token<TAB>tag'");
    }
    RawToken tok{line.substr(0, tab), line.substr(tab + 1)};
    if (tok.word.empty()) throw ParseError(source.name, line_no, "empty token");
    if (tok.label.empty()) throw ParseError(source.name, line_no, "empty tag");
    out.push_back(std::move(tok));
  }
  if (out.empty()) throw DataError(source.name + ": empty document");
  return out;
}

}  // namespace

Corpus parse_corpus(const std::vector<SourceText>& sources) {
  if (sources.empty()) throw DataError("empty corpus: no documents");
  std::vector<std::vector<RawToken>> raw;
  raw.reserve(sources.size());
  std::set<std::string> labels;
  for (const auto& src : sources) {
    raw.push_back(parse_lines(src));
    for (const auto& t : raw.back()) {
      if (t.label != kNoGold) labels.insert(t.label);
    }
  }
  Corpus corpus;
  corpus.tagset = TagSet(std::vector<std::string>(labels.begin(), labels.end()));
  for (std::size_t d = 0; d < sources.size(); ++d) {
    Document doc{sources[d].name, {}};
    doc.tokens.reserve(raw[d].size());
    for (auto& t : raw[d]) {
      std::optional<TagId> gold;
      if (t.label != kNoGold) gold = corpus.tagset.id(t.label);
      doc.tokens.push_back(Token{t.word, t.word, gold});
    }
    corpus.documents.push_back(std::move(doc));
  }
  return corpus;
}

Corpus load_corpus(const std::vector<std::filesystem::path>& paths) {
  std::vector<SourceText> sources;
  sources.reserve(paths.size());
  for (const auto& p : paths) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw DataError("cannot read corpus file " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    sources.push_back({p.stem().string(), buf.str()});
  }
  return parse_corpus(sources);
}

void write_document(std::ostream& out, const Document& doc, const TagSet& tagset) {
  for (const auto& t : doc.tokens) {
    out << t.normalized << '\t';
    if (t.gold) {
      out << tagset.label(*t.gold);
    } else {
      out << kNoGold;
    }
    out << '\n';
  }
}

std::string serialize_document(const Document& doc, const TagSet& tagset) {
  std::ostringstream out;
  write_document(out, doc, tagset);
  return out.str();
}

Document remap_tags(const Document& doc, const TagSet& from, const TagSet& to) {
  Document out = doc;
  if (from == to) return out;
  for (auto& t : out.tokens) {
    if (t.gold) t.gold = to.find(from.label(*t.gold));
  }
  return out;
}

Document make_document(std::string name, const std::vector<std::string>& words,
                       const std::vector<std::string>& labels, const TagSet& tagset) {
  if (words.size() != labels.size()) throw DataError("word/label count mismatch");
  Document doc{std::move(name), {}};
  for (std::size_t i = 0; i < words.size(); ++i) {
    std::optional<TagId> gold;
    if (labels[i] != kNoGold) gold = tagset.id(labels[i]);
    doc.tokens.push_back(Token{words[i], words[i], gold});
  }
  return doc;
}

}  // namespace settag
