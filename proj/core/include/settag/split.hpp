#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "settag/corpus.hpp"

namespace settag {

// Exact rational in (0, 1), so that floor(fraction * l) has no rounding error.
struct Fraction {
  std::int64_t num = 1;
  std::int64_t den = 5;

  // Accepts "0.2", ".25" or "1/5". Throws std::invalid_argument unless the
  // value lies strictly between 0 and 1.
  static Fraction parse(std::string_view text);

  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  // floor(fraction * n)
  std::size_t floor_times(std::size_t n) const;
  // Reduced "num/den".
  std::string str() const;

  friend bool operator==(const Fraction&, const Fraction&) = default;
};

// Number of test tokens: floor(f * l).
std::size_t test_length(std::size_t length, Fraction fraction);
// Largest legal cut point: floor((1 - f) * l).
std::size_t max_cut(std::size_t length, Fraction fraction);

// Contiguous test window per document. Cut points are 0-based token indices
// with 1 <= cut <= max_cut; the test segment is [cut, cut + test_length).
struct SplitSpec {
  Fraction test_fraction;
  std::uint64_t seed = 42;
  std::vector<std::string> documents;
  std::vector<std::size_t> lengths;
  std::vector<std::size_t> cuts;

  friend bool operator==(const SplitSpec&, const SplitSpec&) = default;
};

// Draws one cut per document uniformly from [1, max_cut] using a
// mt19937_64 stream seeded with `seed`, consumed in document order.
// Throws DataError if a document is too short for a non-empty test segment.
SplitSpec draw_splits(const Corpus& corpus, Fraction fraction, std::uint64_t seed);

// Throws DataError unless the spec's document names and lengths match.
void check_splits(const SplitSpec& spec, const Corpus& corpus);

std::string serialize_splits(const SplitSpec& spec);
SplitSpec parse_splits(std::string_view text);

struct DocumentSplit {
  Document train;
  Document test;
  std::vector<std::size_t> train_indices;
  std::vector<std::size_t> test_indices;
};

// Throws DataError when the test segment would be empty or the cut is out of
// range.
DocumentSplit split_document(const Document& doc, Fraction fraction, std::size_t cut);

enum class Scenario : int { kInDomain = 1, kTransfer = 2, kWholeCorpus = 3 };

Scenario parse_scenario(int value);

// A run of tokens taken from one corpus document, with the source indices.
struct Segment {
  std::size_t document = 0;
  Document tokens;
  std::vector<std::size_t> indices;
};

struct ScenarioData {
  std::vector<Segment> train;
  // One entry per evaluated document.
  std::vector<Segment> test;

  std::vector<Document> train_documents() const;
};

// Scenario 1: train and test portions of document k.
// Scenario 2: train portions of all documents except k, test portion of k.
// Scenario 3: all train portions, every test portion separately.
// Throws std::invalid_argument if k is missing (scenarios 1, 2) or out of range.
ScenarioData assemble_scenario(const Corpus& corpus, const SplitSpec& splits, Scenario scenario,
                               std::optional<std::size_t> target = std::nullopt);

}  // namespace settag
