#include "doctest.h"

#include <numeric>
#include <set>

#include "testutil.hpp"
#include "verdict/errors.hpp"
#include "verdict/rng.hpp"
#include "verdict/tokenizer.hpp"

using namespace verdict;

namespace {

Vocabulary vocab_from_tokens(const std::vector<std::string>& extra) {
    Vocabulary v;
    for (const std::string& t : {std::string("[PAD]"), std::string("[UNK]"),
                                 std::string("[CLS]"), std::string("[SEP]")}) {
        v.token_to_id.emplace(t, v.size());
        v.id_to_token.push_back(t);
    }
    for (const std::string& t : extra) {
        v.token_to_id.emplace(t, v.size());
        v.id_to_token.push_back(t);
    }
    return v;
}

// All ways to segment `word` into vocabulary pieces (first piece plain, rest
// "##"-prefixed); used as the independent oracle for the greedy matcher.
void all_segmentations(const Vocabulary& v, const std::string& word, std::size_t start,
                       std::vector<int>& current, std::vector<std::vector<int>>& out) {
    if (start == word.size()) {
        out.push_back(current);
        return;
    }
    for (std::size_t end = start + 1; end <= word.size(); ++end) {
        std::string piece = word.substr(start, end - start);
        if (start > 0) piece = "##" + piece;
        int id = v.lookup(piece);
        if (id < 0) continue;
        current.push_back(id);
        all_segmentations(v, word, end, current, out);
        current.pop_back();
    }
}

}  // namespace

TEST_SUITE_BEGIN("tokenizer");

TEST_CASE("build_vocab keeps a dominant whole word") {
    Vocabulary v = build_vocab({"aa aa aa"}, 10, 1);
    CHECK(v.lookup("aa") >= 0);
    CHECK(v.id_to_token[0] == "[PAD]");
    CHECK(v.id_to_token[1] == "[UNK]");
    CHECK(v.id_to_token[2] == "[CLS]");
    CHECK(v.id_to_token[3] == "[SEP]");
}

TEST_CASE("build_vocab is deterministic") {
    std::vector<std::string> texts = {"unhappy unfair", "unfit unfair", "so unhappy"};
    Vocabulary a = build_vocab(texts, 40, 1);
    Vocabulary b = build_vocab(texts, 40, 1);
    CHECK(a.id_to_token == b.id_to_token);
}

TEST_CASE("build_vocab golden: un- corpus with a small budget") {
    // Mandatory tokens: 4 specials + 2 mask tokens + alphabet {a f h i n p r
    // t u y} in plain and "##" form = 26. A budget of 30 leaves 4 seats,
    // filled by weight then lexicographic order: "un" (3), "unf" (2), then
    // the weight-1 candidates "##air" and "##appy".
    Vocabulary v = build_vocab({"unhappy unfair unfit"}, 30, 1);
    REQUIRE(v.size() == 30);
    std::vector<std::string> expected = {
        "[PAD]", "[UNK]", "[CLS]", "[SEP]", "__mention__", "__url__",
        "a", "f", "h", "i", "n", "p", "r", "t", "u", "y",
        "##a", "##f", "##h", "##i", "##n", "##p", "##r", "##t", "##u", "##y",
        "un", "unf", "##air", "##appy"};
    CHECK(v.id_to_token == expected);

    // Greedy segmentation over this vocabulary.
    TokenSequence seq = encode(v, "unhappy", 16);
    std::vector<int> body(seq.ids.begin() + 1, seq.ids.begin() + seq.true_length - 1);
    CHECK(body == std::vector<int>{v.lookup("un"), v.lookup("##h"), v.lookup("##appy")});
}

TEST_CASE("build_vocab honors min_frequency") {
    Vocabulary v = build_vocab({"unhappy unfair unfit"}, 40, 2);
    CHECK(v.lookup("un") >= 0);    // weight 3
    CHECK(v.lookup("unf") >= 0);   // weight 2
    CHECK(v.lookup("##air") < 0);  // weight 1, filtered
    CHECK(v.size() == 28);
}

TEST_CASE("build_vocab rejects impossible budgets") {
    CHECK_THROWS_AS(build_vocab({"abcdefghij"}, 5, 1), ConfigError);
    CHECK_THROWS_AS(build_vocab({"x"}, 4, 1), ConfigError);
    CHECK_THROWS_AS(build_vocab({}, 100, 1), ConfigError);
}

TEST_CASE("mask tokens are whole vocabulary entries and never fragment") {
    Vocabulary v = build_vocab({"just some words"}, 60, 1);
    CHECK(v.lookup("__mention__") >= 0);
    CHECK(v.lookup("__url__") >= 0);
    TokenSequence seq = encode(v, "__mention__ words __URL__", 16);
    CHECK(seq.ids[1] == v.lookup("__mention__"));
    CHECK(seq.ids[3] == v.lookup("__url__"));
    CHECK(seq.true_length == 5);  // CLS + 3 words + SEP
}

TEST_CASE("encode handles the empty text") {
    Vocabulary v = vocab_from_tokens({"hi"});
    TokenSequence seq = encode(v, "", 8);
    CHECK(seq.true_length == 2);
    CHECK(seq.ids[0] == Vocabulary::kCls);
    CHECK(seq.ids[1] == Vocabulary::kSep);
    for (int i = 2; i < 8; ++i) CHECK(seq.ids[static_cast<std::size_t>(i)] == Vocabulary::kPad);
    CHECK(seq.mask == std::vector<std::uint8_t>{1, 1, 0, 0, 0, 0, 0, 0});
}

TEST_CASE("encode emits exact ids for in-vocabulary words") {
    Vocabulary v = vocab_from_tokens({"alpha", "bravo", "charlie"});
    TokenSequence seq = encode(v, "alpha charlie bravo", 10);
    std::vector<std::int32_t> expect = {Vocabulary::kCls, v.lookup("alpha"),
                                        v.lookup("charlie"), v.lookup("bravo"),
                                        Vocabulary::kSep, 0, 0, 0, 0, 0};
    CHECK(seq.ids == expect);
    CHECK(seq.true_length == 5);
}

TEST_CASE("encode greedy longest match verified by exhaustive segmentation") {
    Vocabulary v = vocab_from_tokens({"un", "##happy"});
    TokenSequence seq = encode(v, "unhappy", 8);
    CHECK(seq.ids[1] == v.lookup("un"));
    CHECK(seq.ids[2] == v.lookup("##happy"));
    CHECK(seq.true_length == 4);

    std::vector<std::vector<int>> segs;
    std::vector<int> cur;
    all_segmentations(v, "unhappy", 0, cur, segs);
    REQUIRE(segs.size() == 1);  // only one valid segmentation over this vocab
    CHECK(segs[0] == std::vector<int>{v.lookup("un"), v.lookup("##happy")});
}

TEST_CASE("greedy property: first piece is the longest vocabulary prefix") {
    Vocabulary v = build_vocab({"unhappy unfair unfit interests interesting"}, 64, 1);
    for (std::string word : {"unhappy", "unfair", "interesting", "interests", "unfit"}) {
        TokenSequence seq = encode(v, word, 32);
        int first = seq.ids[1];
        // brute force: longest prefix of the word present in the vocabulary
        std::string best;
        for (std::size_t len = 1; len <= word.size(); ++len) {
            if (v.lookup(word.substr(0, len)) >= 0) best = word.substr(0, len);
        }
        REQUIRE_FALSE(best.empty());
        CHECK(v.id_to_token[static_cast<std::size_t>(first)] == best);
    }
}

TEST_CASE("encode maps unknown words to UNK") {
    Vocabulary v = vocab_from_tokens({"known"});
    TokenSequence seq = encode(v, "known zebra known", 10);
    CHECK(seq.ids[1] == v.lookup("known"));
    CHECK(seq.ids[2] == Vocabulary::kUnk);
    CHECK(seq.ids[3] == v.lookup("known"));
}

TEST_CASE("encode truncates to max_len and pads exactly") {
    Vocabulary v = vocab_from_tokens({"w"});
    std::string text;
    for (int i = 0; i < 20; ++i) text += "w ";
    TokenSequence seq = encode(v, text, 8);
    CHECK(seq.true_length == 8);
    CHECK(seq.ids[0] == Vocabulary::kCls);
    CHECK(seq.ids[7] == Vocabulary::kSep);
    for (int i = 1; i < 7; ++i) CHECK(seq.ids[static_cast<std::size_t>(i)] == v.lookup("w"));
    CHECK_THROWS_AS(encode(v, text, 2), ConfigError);
}

TEST_CASE("encode at the minimum max_len keeps only CLS and SEP") {
    Vocabulary v = vocab_from_tokens({"w"});
    TokenSequence seq = encode(v, "w w w", 3);
    CHECK(seq.true_length == 3);
    CHECK(seq.ids == std::vector<std::int32_t>{Vocabulary::kCls, v.lookup("w"),
                                               Vocabulary::kSep});
}

TEST_CASE("encode lowercases and composes accents") {
    Vocabulary v = vocab_from_tokens({"ma\xc3\xb1" "ana"});  // mañana
    // uppercase + decomposed tilde input
    TokenSequence a = encode(v, "MA\xc3\x91" "ANA", 8);
    TokenSequence b = encode(v, "man\xcc\x83" "ana", 8);
    CHECK(a.ids[1] == v.lookup("ma\xc3\xb1" "ana"));
    CHECK(b.ids[1] == a.ids[1]);
}

TEST_CASE("encode is total and mask always sums to true_length") {
    Vocabulary v = build_vocab({"some seed corpus with words"}, 64, 1);
    Rng rng(5);
    static const char* pieces[] = {"a", "zz", "ñ", "✓", " ", "@", "__URL__", "q", "."};
    for (int i = 0; i < 300; ++i) {
        std::string text;
        std::size_t n = rng.bounded(12);
        for (std::size_t p = 0; p < n; ++p) text += pieces[rng.bounded(9)];
        TokenSequence seq = encode(v, text, 16);
        CHECK(seq.true_length >= 2);
        CHECK(seq.true_length <= 16);
        int mask_sum = std::accumulate(seq.mask.begin(), seq.mask.end(), 0);
        CHECK(mask_sum == seq.true_length);
        CHECK(seq.ids[0] == Vocabulary::kCls);
        CHECK(seq.ids[static_cast<std::size_t>(seq.true_length) - 1] == Vocabulary::kSep);
    }
}

TEST_CASE("vocabulary file round trip is bit exact") {
    Vocabulary v = build_vocab({"unhappy unfair unfit aa bb"}, 48, 1);
    std::string dir = testutil::temp_dir("tokenizer_vocab");
    std::string path = dir + "/vocab.txt";
    save_vocab(v, path);
    Vocabulary loaded = load_vocab(path);
    CHECK(loaded == v);

    // file layout: one token per line, line number = id
    std::string content = testutil::slurp(path);
    std::string expected;
    for (const std::string& t : v.id_to_token) expected += t + "\n";
    CHECK(content == expected);
}

TEST_CASE("load_vocab rejects malformed files") {
    std::string dir = testutil::temp_dir("tokenizer_badvocab");
    testutil::spit(dir + "/missing_special.txt", "[PAD]\n[UNK]\nhello\n[SEP]\n");
    CHECK_THROWS_AS(load_vocab(dir + "/missing_special.txt"), ParseError);
    testutil::spit(dir + "/dup.txt", "[PAD]\n[UNK]\n[CLS]\n[SEP]\nx\nx\n");
    CHECK_THROWS_AS(load_vocab(dir + "/dup.txt"), ParseError);
    testutil::spit(dir + "/empty_line.txt", "[PAD]\n[UNK]\n[CLS]\n[SEP]\n\nx\n");
    CHECK_THROWS_AS(load_vocab(dir + "/empty_line.txt"), ParseError);
}

TEST_SUITE_END();
