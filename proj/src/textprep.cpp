#include "verdict/textprep.hpp"

#include <cctype>

namespace verdict {

namespace {

bool is_ws(char c) {
    return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' || c == '\v';
}

bool is_word_char(char c) {
    unsigned char u = static_cast<unsigned char>(c);
    return std::isalnum(u) != 0 || c == '_';
}

bool iprefix(std::string_view text, std::size_t pos, std::string_view prefix) {
    if (text.size() - pos < prefix.size()) return false;
    for (std::size_t i = 0; i < prefix.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(text[pos + i])) != prefix[i]) return false;
    }
    return true;
}

// Length of the URL starting at pos, or 0.
std::size_t match_url(std::string_view text, std::size_t pos) {
    bool scheme = iprefix(text, pos, "http://") || iprefix(text, pos, "https://");
    bool bare_www = iprefix(text, pos, "www.") && (pos == 0 || is_ws(text[pos - 1]));
    if (!scheme && !bare_www) return 0;
    std::size_t end = pos;
    while (end < text.size() && !is_ws(text[end])) ++end;
    return end - pos;
}

// Length of the mention starting at pos, or 0.
std::size_t match_mention(std::string_view text, std::size_t pos) {
    if (text[pos] != '@') return 0;
    if (pos > 0 && std::isalnum(static_cast<unsigned char>(text[pos - 1])) != 0) return 0;
    std::size_t run = 0;
    while (pos + 1 + run < text.size() && run < 30 && is_word_char(text[pos + 1 + run])) ++run;
    return run == 0 ? 0 : run + 1;
}

}  // namespace

namespace {

std::string mask_once(std::string_view text) {
    std::string out;
    out.reserve(text.size());
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::size_t len = match_url(text, i); len > 0) {
            out += kUrlToken;
            i += len;
            continue;
        }
        if (std::size_t len = match_mention(text, i); len > 0) {
            out += kMentionToken;
            i += len;
            continue;
        }
        out.push_back(text[i]);
        ++i;
    }
    return out;
}

}  // namespace

std::string mask_mentions_urls(std::string_view text) {
    // A replacement can expose a new match (the tokens end in '_', which is a
    // word character), so run passes until stable. Each non-stable pass
    // consumes at least one '@' or URL start and introduces none, so this
    // terminates.
    std::string cur(text);
    while (true) {
        std::string next = mask_once(cur);
        if (next == cur) return cur;
        cur = std::move(next);
    }
}

}  // namespace verdict
