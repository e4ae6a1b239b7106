#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "settag/annotation.hpp"
#include "settag/corpus.hpp"
#include "settag/setpred.hpp"

namespace settag {

// Output format of `settag tag`:
//
//   # document: <name>
//   token<TAB>gold-or-"-"<TAB>tag1:p1,tag2:p2,...
//
// Candidates are the prediction set in descending probability order, with
// probabilities printed to 6 decimals.
struct TaggedToken {
  std::string token;
  std::optional<std::string> gold;
  std::vector<Candidate> candidates;
};

struct TaggedDocument {
  std::string name;
  std::vector<TaggedToken> tokens;
};

void write_tagged(std::ostream& out, const Document& doc, const TagSet& corpus_tags, const TagSet& model_tags,
                  const std::vector<Posterior>& posteriors, const std::vector<PredictionSet>& sets);

// Throws ParseError on malformed lines.
std::vector<TaggedDocument> parse_tagged(std::istream& in, const std::string& source);

}  // namespace settag
