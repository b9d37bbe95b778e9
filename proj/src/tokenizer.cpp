#include "verdict/tokenizer.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "verdict/errors.hpp"
#include "verdict/io.hpp"
#include "verdict/textprep.hpp"
#include "verdict/utf8.hpp"

namespace verdict {

namespace {

const char* kSpecials[4] = {"[PAD]", "[UNK]", "[CLS]", "[SEP]"};

bool is_space_cp(std::uint32_t cp) {
    return cp == ' ' || cp == '\t' || cp == '\n' || cp == '\r' || cp == '\f' || cp == '\v' ||
           cp == 0xA0;
}

std::string normalize_word_lower(const std::vector<std::uint32_t>& cps) {
    std::vector<std::uint32_t> lowered;
    lowered.reserve(cps.size());
    for (std::uint32_t cp : cps) lowered.push_back(utf8::to_lower(cp));
    return utf8::encode(lowered);
}

// Splits a word into codepoint boundaries so pieces never cut a multibyte
// character in half.
std::vector<std::string> codepoint_units(const std::string& word) {
    std::vector<std::string> units;
    for (std::uint32_t cp : utf8::decode(word)) {
        units.push_back(utf8::encode({cp}));
    }
    return units;
}

}  // namespace

std::vector<std::string> normalize_and_split(std::string_view text) {
    std::vector<std::uint32_t> cps = utf8::compose(utf8::decode(text));
    std::vector<std::string> words;
    std::vector<std::uint32_t> cur;
    for (std::uint32_t cp : cps) {
        if (is_space_cp(cp)) {
            if (!cur.empty()) {
                words.push_back(normalize_word_lower(cur));
                cur.clear();
            }
        } else {
            cur.push_back(cp);
        }
    }
    if (!cur.empty()) words.push_back(normalize_word_lower(cur));
    return words;
}

Vocabulary build_vocab(const std::vector<std::string>& texts, int target_size,
                       int min_frequency) {
    if (texts.empty()) throw ConfigError("build_vocab: no input texts");
    if (target_size < 5) throw ConfigError("build_vocab: target_size must be at least 5");

    // Word frequencies over the normalized corpus.
    std::map<std::string, std::size_t> word_freq;
    for (const std::string& t : texts) {
        for (const std::string& w : normalize_and_split(t)) ++word_freq[w];
    }

    // Candidate weights: a word of frequency f adds f to each of its distinct
    // prefixes (word-initial pieces) and f to each of its distinct proper
    // suffixes in "##" form (continuation pieces).
    std::map<std::string, std::size_t> weight;
    std::set<std::string> alphabet;  // single codepoints seen anywhere
    for (const auto& [word, freq] : word_freq) {
        std::vector<std::string> units = codepoint_units(word);
        for (const std::string& u : units) alphabet.insert(u);
        std::set<std::string> distinct;
        std::string prefix;
        for (std::size_t j = 0; j < units.size(); ++j) {
            prefix += units[j];
            distinct.insert(prefix);
        }
        std::string suffix;
        for (std::size_t i = units.size(); i > 1; --i) {
            suffix = units[i - 1] + suffix;
            distinct.insert(std::string(Vocabulary::kContinuationPrefix) + suffix);
        }
        for (const std::string& piece : distinct) weight[piece] += freq;
    }

    Vocabulary vocab;
    auto add = [&vocab](const std::string& token) {
        if (vocab.token_to_id.count(token)) return;
        vocab.token_to_id.emplace(token, vocab.size());
        vocab.id_to_token.push_back(token);
    };

    for (const char* s : kSpecials) add(s);
    // The encoder lowercases, so the injected whole tokens are the lowercase
    // forms; this is what keeps masked texts from fragmenting.
    std::string mention(kMentionToken);
    std::string url(kUrlToken);
    for (char& c : url) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    add(mention);
    add(url);
    for (const std::string& u : alphabet) add(u);
    for (const std::string& u : alphabet) add(std::string(Vocabulary::kContinuationPrefix) + u);

    if (vocab.size() > target_size) {
        throw ConfigError("build_vocab: target_size " + std::to_string(target_size) +
                          " cannot fit specials plus alphabet (" +
                          std::to_string(vocab.size()) + " tokens)");
    }

    // Fill the remaining budget by (weight desc, token asc).
    std::vector<std::pair<std::size_t, std::string>> ranked;
    for (const auto& [piece, w] : weight) {
        if (static_cast<long long>(w) < min_frequency) continue;
        if (vocab.token_to_id.count(piece)) continue;
        ranked.emplace_back(w, piece);
    }
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first > b.first;
        return a.second < b.second;
    });
    for (const auto& [w, piece] : ranked) {
        if (vocab.size() >= target_size) break;
        add(piece);
    }
    return vocab;
}

TokenSequence encode(const Vocabulary& vocab, std::string_view text, int max_len) {
    if (max_len < 3) throw ConfigError("encode: max_len must be at least 3");

    std::vector<int> pieces;
    for (const std::string& word : normalize_and_split(text)) {
        std::vector<std::string> units = codepoint_units(word);
        std::vector<int> word_pieces;
        std::size_t start = 0;
        bool bad = false;
        while (start < units.size()) {
            // Greedy longest match: widest piece first, "##" form when not
            // word-initial.
            int found = -1;
            std::size_t found_end = start;
            for (std::size_t end = units.size(); end > start; --end) {
                std::string piece;
                if (start > 0) piece = Vocabulary::kContinuationPrefix;
                for (std::size_t i = start; i < end; ++i) piece += units[i];
                int id = vocab.lookup(piece);
                if (id >= 0) {
                    found = id;
                    found_end = end;
                    break;
                }
            }
            if (found < 0) {
                bad = true;
                break;
            }
            word_pieces.push_back(found);
            start = found_end;
        }
        if (bad) {
            pieces.push_back(Vocabulary::kUnk);
        } else {
            pieces.insert(pieces.end(), word_pieces.begin(), word_pieces.end());
        }
    }

    std::size_t body = std::min<std::size_t>(pieces.size(), static_cast<std::size_t>(max_len - 2));
    TokenSequence seq;
    seq.ids.assign(static_cast<std::size_t>(max_len), Vocabulary::kPad);
    seq.mask.assign(static_cast<std::size_t>(max_len), 0);
    seq.ids[0] = Vocabulary::kCls;
    for (std::size_t i = 0; i < body; ++i) seq.ids[i + 1] = pieces[i];
    seq.ids[body + 1] = Vocabulary::kSep;
    seq.true_length = static_cast<int>(body) + 2;
    for (int i = 0; i < seq.true_length; ++i) seq.mask[static_cast<std::size_t>(i)] = 1;
    return seq;
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
    std::string out;
    for (const std::string& token : vocab.id_to_token) {
        out += token;
        out += '\n';
    }
    atomic_write_file(path, out);
}

Vocabulary load_vocab(const std::string& path) {
    std::string content = read_file(path);
    Vocabulary vocab;
    std::size_t pos = 0;
    while (pos < content.size()) {
        std::size_t nl = content.find('\n', pos);
        std::string line = (nl == std::string::npos) ? content.substr(pos)
                                                     : content.substr(pos, nl - pos);
        pos = (nl == std::string::npos) ? content.size() : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            throw ParseError(path + ": empty token at line " +
                             std::to_string(vocab.size() + 1));
        }
        if (vocab.token_to_id.count(line)) {
            throw ParseError(path + ": duplicate token '" + line + "'");
        }
        vocab.token_to_id.emplace(line, vocab.size());
        vocab.id_to_token.push_back(line);
    }
    if (vocab.size() < 4) throw ParseError(path + ": vocabulary too small");
    for (int i = 0; i < 4; ++i) {
        if (vocab.id_to_token[static_cast<std::size_t>(i)] != kSpecials[i]) {
            throw ParseError(path + ": line " + std::to_string(i + 1) + " must be " +
                             kSpecials[i]);
        }
    }
    return vocab;
}

}  // namespace verdict
