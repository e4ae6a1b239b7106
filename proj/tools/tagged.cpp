#include "tagged.hpp"

#include <cstdio>
#include <istream>
#include <ostream>

#include "settag/error.hpp"

namespace settag {

namespace {

constexpr std::string_view kDocumentPrefix = "# document: ";

bool is_number(std::string_view s) {
  std::size_t i = 0, digits = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++digits;
  if (digits == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '.') return false;
  ++i;
  std::size_t frac = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i, ++frac;
  return frac > 0 && i == s.size();
}

// Splits "tag:p,tag:p" where tags may themselves contain ':' or ','. An
// entry ends at the first ':' whose remainder up to the next ',' (or the end)
// is a number.
std::optional<std::vector<Candidate>> parse_candidates(std::string_view field) {
  std::vector<Candidate> out;
  std::size_t start = 0;
  while (start < field.size()) {
    bool found = false;
    for (std::size_t colon = field.find(':', start + 1); colon != std::string_view::npos;
         colon = field.find(':', colon + 1)) {
      auto end = field.find(',', colon + 1);
      if (end == std::string_view::npos) end = field.size();
      const auto number = field.substr(colon + 1, end - colon - 1);
      if (!is_number(number)) continue;
      out.push_back({std::string(field.substr(start, colon - start)), std::stod(std::string(number))});
      start = end + 1;
      found = true;
      break;
    }
    if (!found) return std::nullopt;
  }
  if (out.empty()) return std::nullopt;
  return out;
}

}  // namespace

void write_tagged(std::ostream& out, const Document& doc, const TagSet& corpus_tags, const TagSet& model_tags,
                  const std::vector<Posterior>& posteriors, const std::vector<PredictionSet>& sets) {
  out << kDocumentPrefix << doc.name << '\n';
  char buf[32];
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& tok = doc.tokens[i];
    out << tok.surface << '\t' << (tok.gold ? corpus_tags.label(*tok.gold) : std::string(kNoGold)) << '\t';
    bool first = true;
    for (auto t : sets[i].tags) {
      std::snprintf(buf, sizeof buf, "%.6f", posteriors[i][t]);
      out << (first ? "" : ",") << model_tags.label(t) << ':' << buf;
      first = false;
    }
    out << '\n';
  }
}

std::vector<TaggedDocument> parse_tagged(std::istream& in, const std::string& source) {
  std::vector<TaggedDocument> docs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line.rfind(kDocumentPrefix, 0) == 0) {
      docs.push_back({line.substr(kDocumentPrefix.size()), {}});
      continue;
    }
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
      throw ParseError(source, line_no, "expected 'token<TAB>gold<TAB>candidates'");
    }
    auto cands = parse_candidates(std::string_view(line).substr(t2 + 1));
    if (!cands) throw ParseError(source, line_no, "malformed candidate list");
    if (docs.empty()) docs.push_back({source, {}});
    TaggedToken tok{line.substr(0, t1), std::nullopt, std::move(*cands)};
    const auto gold = line.substr(t1 + 1, t2 - t1 - 1);
    if (gold != kNoGold) tok.gold = gold;
    docs.back().tokens.push_back(std::move(tok));
  }
  return docs;
}

}  // namespace settag
