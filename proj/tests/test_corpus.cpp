#include "doctest.h"

#include <algorithm>
#include <set>

#include "testutil.hpp"
#include "verdict/corpus.hpp"
#include "verdict/errors.hpp"

using namespace verdict;
using testutil::make_record;

namespace {

std::string tsv_path(const std::string& name, const std::string& content) {
    std::string dir = testutil::temp_dir("corpus_" + name);
    std::string path = dir + "/data.tsv";
    testutil::spit(path, content);
    return path;
}

const char* kHeader = "test_case\tid\tsource\tlanguage\ttext\ttask1\ttask2\n";

}  // namespace

TEST_SUITE_BEGIN("corpus");

TEST_CASE("load_tsv reads rows in order with labels") {
    std::string path = tsv_path("basic",
        std::string(kHeader) +
        "EXIST2021\t1\ttwitter\ten\thello there\tnon-sexist\tnon-sexist\n"
        "EXIST2021\t2\tgab\tes\thola amiga\tsexist\tobjectification\n"
        "EXIST2021\t3\ttwitter\ten\tthird row\tnon-sexist\tnon-sexist\n");
    auto records = load_tsv(path, true);
    REQUIRE(records.size() == 3);
    CHECK(records[0].id == "1");
    CHECK(records[1].id == "2");
    CHECK(records[2].id == "3");
    CHECK(records[1].source == Source::gab);
    CHECK(records[1].language == Language::es);
    CHECK(records[1].text == "hola amiga");
    REQUIRE(records[1].task1.has_value());
    CHECK(*records[1].task1 == Task1Label::sexist);
    CHECK(*records[1].task2 == Task2Label::objectification);
}

TEST_CASE("load_tsv accepts case and separator variants of labels") {
    std::string path = tsv_path("case",
        std::string(kHeader) +
        "EXIST2021\t1\tTwitter\tEN\tsome text\tSEXIST\tOBJECTIFICATION\n"
        "EXIST2021\t2\ttwitter\tes\totro texto\tsexist\tideological_inequality\n"
        "EXIST2021\t3\ttwitter\tes\tmas texto\tsexist\tMisogyny Non_Sexual Violence\n");
    auto records = load_tsv(path, true);
    REQUIRE(records.size() == 3);
    CHECK(*records[0].task2 == Task2Label::objectification);
    CHECK(*records[1].task2 == Task2Label::ideological_inequality);
    CHECK(*records[2].task2 == Task2Label::misogyny_non_sexual_violence);
}

TEST_CASE("load_tsv errors name the problem") {
    SUBCASE("missing column") {
        std::string path = tsv_path("nocol",
            "test_case\tid\tsource\ttext\ttask1\ttask2\n");
        CHECK_THROWS_WITH_AS(load_tsv(path, true), doctest::Contains("language"), SchemaError);
    }
    SUBCASE("labels required but absent") {
        std::string path = tsv_path("nolabel",
            "test_case\tid\tsource\tlanguage\ttext\n"
            "EXIST2021\t1\ttwitter\ten\thello\n");
        CHECK_THROWS_WITH_AS(load_tsv(path, true), doctest::Contains("task1"), SchemaError);
        CHECK_NOTHROW(load_tsv(path, false));
    }
    SUBCASE("unknown label reports row number") {
        std::string path = tsv_path("badlabel",
            std::string(kHeader) +
            "EXIST2021\t1\ttwitter\ten\thello\tnon-sexist\tnon-sexist\n"
            "EXIST2021\t2\ttwitter\ten\tworld\tmaybe\tnon-sexist\n");
        CHECK_THROWS_WITH_AS(load_tsv(path, true), doctest::Contains("row 3"), ParseError);
    }
    SUBCASE("malformed utf-8") {
        std::string path = tsv_path("badutf8",
            std::string(kHeader) +
            "EXIST2021\t1\ttwitter\ten\tbad \xFF\xFE bytes\tnon-sexist\tnon-sexist\n");
        CHECK_THROWS_AS(load_tsv(path, true), EncodingError);
    }
    SUBCASE("inconsistent task labels") {
        std::string path = tsv_path("inconsistent",
            std::string(kHeader) +
            "EXIST2021\t1\ttwitter\ten\thello\tnon-sexist\tobjectification\n");
        CHECK_THROWS_AS(load_tsv(path, true), ParseError);
    }
    SUBCASE("empty text") {
        std::string path = tsv_path("emptytext",
            std::string(kHeader) +
            "EXIST2021\t1\ttwitter\ten\t  \tnon-sexist\tnon-sexist\n");
        CHECK_THROWS_AS(load_tsv(path, true), ParseError);
    }
    SUBCASE("wrong column count") {
        std::string path = tsv_path("shortrow",
            std::string(kHeader) +
            "EXIST2021\t1\ttwitter\ten\thello\tnon-sexist\n");
        CHECK_THROWS_WITH_AS(load_tsv(path, true), doctest::Contains("columns"), ParseError);
    }
}

TEST_CASE("load_tsv tolerates CRLF line endings and a UTF-8 BOM") {
    std::string path = tsv_path("crlf",
        "\xEF\xBB\xBFtest_case\tid\tsource\tlanguage\ttext\ttask1\ttask2\r\n"
        "EXIST2021\t1\ttwitter\ten\thello there\tnon-sexist\tnon-sexist\r\n"
        "EXIST2021\t2\ttwitter\tes\thola\tsexist\tobjectification\r\n");
    auto records = load_tsv(path, true);
    REQUIRE(records.size() == 2);
    CHECK(records[0].text == "hello there");
    CHECK(*records[1].task2 == Task2Label::objectification);
}

TEST_CASE("labels ignored when expect_labels is false") {
    std::string path = tsv_path("ignore",
        std::string(kHeader) +
        "EXIST2021\t1\ttwitter\ten\thello\tsexist\tobjectification\n");
    auto records = load_tsv(path, false);
    REQUIRE(records.size() == 1);
    CHECK_FALSE(records[0].task1.has_value());
    CHECK_FALSE(records[0].task2.has_value());
}

TEST_CASE("write_tsv then load_tsv round-trips text fields byte-exactly") {
    std::vector<TextRecord> records;
    records.push_back(make_record("1", Language::en, "plain text", Task1Label::non_sexist,
                                  Task2Label::non_sexist));
    records.push_back(make_record("2", Language::es, "tildes áéíóú ñ and ✓ emoji 😀",
                                  Task1Label::sexist, Task2Label::sexual_violence));
    records.push_back(make_record("3", Language::en, "punct!! @user #tag … \"quotes\"",
                                  Task1Label::sexist, Task2Label::objectification));
    std::string dir = testutil::temp_dir("corpus_roundtrip");
    write_tsv(records, dir + "/out.tsv", true);
    auto loaded = load_tsv(dir + "/out.tsv", true);
    REQUIRE(loaded.size() == records.size());
    for (std::size_t i = 0; i < records.size(); ++i) {
        CHECK(loaded[i].text == records[i].text);
        CHECK(loaded[i].id == records[i].id);
        CHECK(loaded[i].task1 == records[i].task1);
        CHECK(loaded[i].task2 == records[i].task2);
    }
}

TEST_CASE("filter_language keeps order and partitions") {
    std::vector<TextRecord> records = {
        make_record("1", Language::en, "one"),
        make_record("2", Language::es, "dos"),
        make_record("3", Language::en, "three"),
    };
    auto en = filter_language(records, Language::en);
    REQUIRE(en.size() == 2);
    CHECK(en[0].id == "1");
    CHECK(en[1].id == "3");

    auto es = filter_language(records, Language::es);
    CHECK(es.size() == 1);
    CHECK(filter_language({}, Language::en).empty());

    // en + es partition the input
    CHECK(en.size() + es.size() == records.size());
    std::set<std::string> ids;
    for (const auto& r : en) ids.insert(r.id);
    for (const auto& r : es) ids.insert(r.id);
    CHECK(ids.size() == records.size());
}

TEST_CASE("filter_sexist keeps flagged records in order") {
    std::vector<TextRecord> records = {
        make_record("1", Language::en, "a", Task1Label::non_sexist),
        make_record("2", Language::en, "b", Task1Label::sexist),
        make_record("3", Language::en, "c", Task1Label::non_sexist),
        make_record("4", Language::en, "d", Task1Label::sexist),
        make_record("5", Language::en, "e", Task1Label::non_sexist),
    };
    auto sexist = filter_sexist(records);
    REQUIRE(sexist.size() == 2);
    CHECK(sexist[0].id == "2");
    CHECK(sexist[1].id == "4");

    std::vector<TextRecord> all_non = {make_record("1", Language::en, "a", Task1Label::non_sexist)};
    CHECK(filter_sexist(all_non).empty());

    std::vector<TextRecord> unlabeled = {make_record("1", Language::en, "a")};
    CHECK_THROWS_AS(filter_sexist(unlabeled), InputError);
}

TEST_CASE("stratified_split honors exact proportions") {
    std::vector<TextRecord> records;
    for (int i = 0; i < 50; ++i) {
        records.push_back(make_record("s" + std::to_string(i), Language::en, "x",
                                      Task1Label::sexist));
        records.push_back(make_record("n" + std::to_string(i), Language::en, "y",
                                      Task1Label::non_sexist));
    }
    auto [train, dev] = stratified_split(records, 0.8, Task::task1, 7);
    CHECK(train.size() == 80);
    CHECK(dev.size() == 20);
    auto count_sexist = [](const std::vector<TextRecord>& v) {
        return std::count_if(v.begin(), v.end(),
                             [](const TextRecord& r) { return *r.task1 == Task1Label::sexist; });
    };
    CHECK(count_sexist(train) == 40);
    CHECK(count_sexist(dev) == 10);
}

TEST_CASE("stratified_split is deterministic and partitions the input") {
    auto records = testutil::keyword_corpus(20, Language::en, 3);
    auto [train1, dev1] = stratified_split(records, 0.8, Task::task1, 5);
    auto [train2, dev2] = stratified_split(records, 0.8, Task::task1, 5);
    REQUIRE(train1.size() == train2.size());
    for (std::size_t i = 0; i < train1.size(); ++i) CHECK(train1[i].id == train2[i].id);
    for (std::size_t i = 0; i < dev1.size(); ++i) CHECK(dev1[i].id == dev2[i].id);

    CHECK(train1.size() + dev1.size() == records.size());
    std::set<std::string> ids;
    for (const auto& r : train1) ids.insert(r.id);
    for (const auto& r : dev1) ids.insert(r.id);
    CHECK(ids.size() == records.size());

    auto [train3, dev3] = stratified_split(records, 0.8, Task::task1, 6);
    bool same = train3.size() == train1.size();
    if (same) {
        same = std::equal(train1.begin(), train1.end(), train3.begin(),
                          [](const TextRecord& a, const TextRecord& b) { return a.id == b.id; });
    }
    CHECK_FALSE(same);  // different seed, different split
}

TEST_CASE("stratified_split rounding: counts {7,3} at 0.8 give 6+2") {
    // exact shares are 5.6 and 2.4; floors 5+2 leave one leftover seat that
    // goes to the larger remainder (0.6), i.e. train sizes 6 and 2.
    std::vector<TextRecord> records;
    for (int i = 0; i < 7; ++i) {
        records.push_back(make_record("s" + std::to_string(i), Language::en, "x",
                                      Task1Label::sexist));
    }
    for (int i = 0; i < 3; ++i) {
        records.push_back(make_record("n" + std::to_string(i), Language::en, "y",
                                      Task1Label::non_sexist));
    }
    auto [train, dev] = stratified_split(records, 0.8, Task::task1, 11);
    auto sexist_train = std::count_if(train.begin(), train.end(), [](const TextRecord& r) {
        return *r.task1 == Task1Label::sexist;
    });
    CHECK(train.size() == 8);
    CHECK(sexist_train == 6);
    CHECK(dev.size() == 2);
}

TEST_CASE("stratified_split places tiny classes in train with a warning") {
    std::vector<TextRecord> records;
    for (int i = 0; i < 10; ++i) {
        records.push_back(make_record("n" + std::to_string(i), Language::en, "y",
                                      Task1Label::non_sexist));
    }
    records.push_back(make_record("lonely", Language::en, "x", Task1Label::sexist));
    std::vector<std::string> warnings;
    auto [train, dev] = stratified_split(records, 0.8, Task::task1, 1, &warnings);
    REQUIRE(warnings.size() == 1);
    CHECK(warnings[0].find("sexist") != std::string::npos);
    bool lonely_in_train = std::any_of(train.begin(), train.end(),
                                       [](const TextRecord& r) { return r.id == "lonely"; });
    CHECK(lonely_in_train);
}

TEST_CASE("stratified_split rejects bad fractions") {
    auto records = testutil::keyword_corpus(4, Language::en, 1);
    CHECK_THROWS_AS(stratified_split(records, 0.0, Task::task1, 1), ConfigError);
    CHECK_THROWS_AS(stratified_split(records, 1.0, Task::task1, 1), ConfigError);
}

TEST_CASE("class_counts matches populations and covers empty input") {
    auto empty1 = class_counts({}, Task::task1);
    REQUIRE(empty1.size() == 2);
    CHECK(empty1.at("sexist") == 0);
    CHECK(empty1.at("non-sexist") == 0);

    auto empty2 = class_counts({}, Task::task2);
    CHECK(empty2.size() == 6);

    auto records = testutil::keyword_corpus(25, Language::en, 2);
    auto counts = class_counts(records, Task::task1);
    CHECK(counts.at("sexist") == 25);
    CHECK(counts.at("non-sexist") == 25);

    std::size_t total = 0;
    for (const auto& [label, n] : class_counts(records, Task::task2)) total += n;
    CHECK(total == records.size());
}

TEST_SUITE_END();
