#pragma once

#include <string>
#include <string_view>

namespace settag::utf8 {

// Decodes UTF-8 into Unicode scalar values. Invalid sequences decode to
// U+FFFD one byte at a time.
std::u32string decode(std::string_view text);

std::string encode(std::u32string_view text);

// Simple case folding: ASCII, Latin-1 Supplement and Latin Extended-A.
char32_t fold(char32_t c);
std::u32string fold(std::u32string_view text);
std::string fold(std::string_view text);

bool is_digit(char32_t c);
bool is_punct(char32_t c);

}  // namespace settag::utf8
