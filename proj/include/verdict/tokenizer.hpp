#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace verdict {

// WordPiece-style vocabulary. Ids are dense; the four specials always occupy
// ids 0..3 and continuation pieces carry the "##" prefix.
struct Vocabulary {
    static constexpr int kPad = 0;
    static constexpr int kUnk = 1;
    static constexpr int kCls = 2;
    static constexpr int kSep = 3;
    static constexpr const char* kContinuationPrefix = "##";

    std::vector<std::string> id_to_token;
    std::unordered_map<std::string, int> token_to_id;

    int size() const { return static_cast<int>(id_to_token.size()); }

    // -1 when absent.
    int lookup(const std::string& token) const {
        auto it = token_to_id.find(token);
        return it == token_to_id.end() ? -1 : it->second;
    }

    bool operator==(const Vocabulary& o) const { return id_to_token == o.id_to_token; }
};

// Fixed-length encoded input: ids[0] is CLS, ids[true_length-1] is SEP,
// everything at and beyond true_length is PAD, and mask[i] = 1 iff
// i < true_length.
struct TokenSequence {
    std::vector<std::int32_t> ids;
    std::vector<std::uint8_t> mask;
    int true_length = 0;

    int max_len() const { return static_cast<int>(ids.size()); }
};

// Deterministic frequency-based vocabulary builder. Always included: the
// specials, the mask tokens (in their post-normalization lowercase forms),
// and every single character seen in the corpus in both word-initial and
// continuation form. The remaining budget is filled with word prefixes and
// "##"-suffix pieces ranked by (frequency desc, token asc); candidates below
// min_frequency are dropped. Throws ConfigError when target_size cannot fit
// the always-included tokens.
Vocabulary build_vocab(const std::vector<std::string>& texts, int target_size,
                       int min_frequency);

// Normalization (compose + lowercase + whitespace split), then greedy
// longest-match WordPiece per word; a word with no matching piece becomes
// UNK. Output is CLS + pieces (truncated to max_len - 2) + SEP, padded.
TokenSequence encode(const Vocabulary& vocab, std::string_view text, int max_len);

// Shared normalization used by both the builder and encode: NFC-subset
// composition, lowercasing, whitespace splitting.
std::vector<std::string> normalize_and_split(std::string_view text);

// Vocabulary file format: UTF-8 text, one token per line, line number = id.
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path);

}  // namespace verdict
