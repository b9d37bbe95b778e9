#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace verdict::utf8 {

// Strict validation: true iff the bytes are well-formed UTF-8 (no overlongs,
// no surrogates, no codepoints above U+10FFFF).
bool validate(std::string_view bytes);

// Decode to codepoints. Invalid sequences become U+FFFD (one replacement per
// offending byte), so decoding is total.
std::vector<std::uint32_t> decode(std::string_view bytes);

std::string encode(const std::vector<std::uint32_t>& codepoints);

// ASCII + Latin-1 supplement lowercasing; other codepoints pass through.
std::uint32_t to_lower(std::uint32_t cp);

// Composes base letter + combining mark pairs (acute, grave, circumflex,
// tilde, diaeresis, cedilla over ASCII bases) into their precomposed Latin-1
// forms. This is the documented NFC subset the tokenizer applies; texts that
// are already composed pass through unchanged.
std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& codepoints);

}  // namespace verdict::utf8
