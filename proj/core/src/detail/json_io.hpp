#pragma once

#include <nlohmann/json.hpp>

#include <string>

#include "settag/corpus.hpp"
#include "settag/error.hpp"

namespace settag::detail {

inline constexpr int kModelFormatVersion = 1;

using Json = nlohmann::ordered_json;

inline Json model_header(std::string_view kind, const TagSet& tagset) {
  Json j;
  j["format_version"] = kModelFormatVersion;
  j["kind"] = kind;
  j["tagset"] = tagset.labels();
  return j;
}

inline TagSet read_tagset(const Json& j) { return TagSet(j.at("tagset").get<std::vector<std::string>>()); }

}  // namespace settag::detail
