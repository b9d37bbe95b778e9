#pragma once

#include <string>
#include <string_view>

namespace verdict {

inline constexpr std::string_view kMentionToken = "__mention__";
inline constexpr std::string_view kUrlToken = "__URL__";

// Replaces @-handles with __mention__ and URLs with __URL__; everything else
// is copied through unchanged. Total and idempotent.
//
// Matcher rules, frozen and golden-tested:
//  - URL: "http://" or "https://" (case-insensitive, any position) or "www."
//    (case-insensitive, at start of string or after whitespace), consuming up
//    to the next whitespace character.
//  - Mention: '@' preceded by start of string or a non-alphanumeric byte,
//    followed by 1..30 ASCII word characters [A-Za-z0-9_]; runs longer than
//    30 leave the tail in place.
//  - Passes repeat until the string is stable, which makes the function
//    idempotent even when a replacement exposes a new match.
std::string mask_mentions_urls(std::string_view text);

}  // namespace verdict
