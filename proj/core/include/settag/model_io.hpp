#pragma once

#include <filesystem>
#include <iosfwd>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "settag/hmm.hpp"
#include "settag/memm.hpp"
#include "settag/tagger.hpp"

namespace settag {

enum class TaggerKind { kBaseline, kHmm, kMemm };

// Throws std::invalid_argument for names other than baseline, hmm, memm.
TaggerKind parse_tagger_kind(std::string_view name);
std::string_view to_string(TaggerKind kind);

struct TaggerSpec {
  TaggerKind kind = TaggerKind::kMemm;
  HmmOptions hmm;
  MemmOptions memm;
};

std::unique_ptr<Tagger> train_tagger(const TaggerSpec& spec, const std::vector<Document>& train,
                                     const TagSet& tagset);

// Throws FormatVersionError for files written by another format version and
// DataError for anything else that is malformed.
std::unique_ptr<Tagger> load_model(std::istream& in);
std::unique_ptr<Tagger> load_model(const std::filesystem::path& path);
void save_model(const Tagger& model, const std::filesystem::path& path);

}  // namespace settag
