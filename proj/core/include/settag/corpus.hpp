#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace settag {

using TagId = std::uint16_t;

// Ordered inventory of tag labels. Labels are kept sorted so that ids are a
// deterministic function of the label set.
class TagSet {
 public:
  TagSet() = default;
  // Sorts and deduplicates. Throws DataError on an empty label.
  explicit TagSet(std::vector<std::string> labels);

  std::size_t size() const { return labels_.size(); }
  bool empty() const { return labels_.empty(); }
  const std::string& label(TagId id) const { return labels_.at(id); }
  const std::vector<std::string>& labels() const { return labels_; }
  std::optional<TagId> find(std::string_view label) const;
  // Throws DataError when the label is not in the set.
  TagId id(std::string_view label) const;

  friend bool operator==(const TagSet&, const TagSet&) = default;

 private:
  std::vector<std::string> labels_;
};

struct Token {
  std::string surface;
  std::string normalized;
  std::optional<TagId> gold;

  friend bool operator==(const Token&, const Token&) = default;
};

struct Document {
  std::string name;
  std::vector<Token> tokens;

  std::size_t size() const { return tokens.size(); }
  friend bool operator==(const Document&, const Document&) = default;
};

struct Corpus {
  std::vector<Document> documents;
  TagSet tagset;

  std::size_t token_count() const;
};

// One input file: its name (used as the document name) and its content.
struct SourceText {
  std::string name;
  std::string text;
};

// Gold field value marking a token without an annotation.
inline constexpr std::string_view kNoGold = "-";

// Parses one-token-per-line `token<TAB>tag` files, one document per source.
// Blank lines are skipped. The tag set is the union of all gold labels.
// Throws ParseError on malformed lines and DataError on empty documents.
Corpus parse_corpus(const std::vector<SourceText>& sources);

// Reads files from disk; document names are the file stems.
Corpus load_corpus(const std::vector<std::filesystem::path>& paths);

// Writes `normalized<TAB>gold` lines (gold label or "-").
void write_document(std::ostream& out, const Document& doc, const TagSet& tagset);
std::string serialize_document(const Document& doc, const TagSet& tagset);

// Re-expresses gold ids of `doc` (relative to `from`) in terms of `to`.
// Labels missing from `to` become std::nullopt.
Document remap_tags(const Document& doc, const TagSet& from, const TagSet& to);

// Builds a document from parallel word and label lists (test and API helper).
Document make_document(std::string name, const std::vector<std::string>& words,
                       const std::vector<std::string>& labels, const TagSet& tagset);

}  // namespace settag
