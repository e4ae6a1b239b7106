#pragma once

#include <cstddef>
#include <string_view>

namespace settag {

// Edit distance (unit-cost insert/delete/substitute) over Unicode scalar values.
std::size_t levenshtein(std::string_view a, std::string_view b);
std::size_t levenshtein(std::u32string_view a, std::u32string_view b);

// Same distance, but returns `limit + 1` as soon as the distance is known to
// exceed `limit`.
std::size_t levenshtein_bounded(std::u32string_view a, std::u32string_view b, std::size_t limit);

}  // namespace settag
