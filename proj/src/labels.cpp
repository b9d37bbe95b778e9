#include "verdict/labels.hpp"

#include <array>
#include <cctype>

#include "verdict/errors.hpp"

namespace verdict {

namespace {

// Canonical key: lowercase, every separator run folded to '-'.
std::string canonical(std::string_view s) {
    std::string out;
    out.reserve(s.size());
    for (char ch : s) {
        unsigned char c = static_cast<unsigned char>(ch);
        if (c == '-' || c == '_' || c == ' ') {
            if (!out.empty() && out.back() != '-') out.push_back('-');
        } else {
            out.push_back(static_cast<char>(std::tolower(c)));
        }
    }
    while (!out.empty() && out.back() == '-') out.pop_back();
    return out;
}

}  // namespace

std::string to_string(Source s) {
    return s == Source::twitter ? "twitter" : "gab";
}

std::string to_string(Language l) {
    return l == Language::en ? "en" : "es";
}

std::string to_string(Task1Label l) {
    return l == Task1Label::sexist ? "sexist" : "non-sexist";
}

std::string to_string(Task2Label l) {
    switch (l) {
        case Task2Label::non_sexist: return "non-sexist";
        case Task2Label::ideological_inequality: return "ideological-inequality";
        case Task2Label::stereotyping_dominance: return "stereotyping-dominance";
        case Task2Label::objectification: return "objectification";
        case Task2Label::sexual_violence: return "sexual-violence";
        case Task2Label::misogyny_non_sexual_violence: return "misogyny-non-sexual-violence";
    }
    throw Error("unreachable task2 label");
}

std::string to_string(Task t) {
    return t == Task::task1 ? "task1" : "task2";
}

Source parse_source(std::string_view s) {
    std::string c = canonical(s);
    if (c == "twitter") return Source::twitter;
    if (c == "gab") return Source::gab;
    throw ParseError("unknown source '" + std::string(s) + "'");
}

Language parse_language(std::string_view s) {
    std::string c = canonical(s);
    if (c == "en") return Language::en;
    if (c == "es") return Language::es;
    throw ParseError("unknown language '" + std::string(s) + "'");
}

Task1Label parse_task1_label(std::string_view s) {
    std::string c = canonical(s);
    if (c == "sexist") return Task1Label::sexist;
    if (c == "non-sexist") return Task1Label::non_sexist;
    throw ParseError("unknown task1 label '" + std::string(s) + "'");
}

Task2Label parse_task2_label(std::string_view s) {
    std::string c = canonical(s);
    if (c == "non-sexist") return Task2Label::non_sexist;
    if (c == "ideological-inequality") return Task2Label::ideological_inequality;
    if (c == "stereotyping-dominance") return Task2Label::stereotyping_dominance;
    if (c == "objectification") return Task2Label::objectification;
    if (c == "sexual-violence") return Task2Label::sexual_violence;
    if (c == "misogyny-non-sexual-violence") return Task2Label::misogyny_non_sexual_violence;
    throw ParseError("unknown task2 label '" + std::string(s) + "'");
}

const std::vector<std::string>& task1_label_set() {
    static const std::vector<std::string> set = {"sexist", "non-sexist"};
    return set;
}

const std::vector<std::string>& task2_label_set() {
    static const std::vector<std::string> set = {
        "non-sexist",
        "ideological-inequality",
        "stereotyping-dominance",
        "objectification",
        "sexual-violence",
        "misogyny-non-sexual-violence",
    };
    return set;
}

const std::vector<Task2Label>& task2_categories() {
    static const std::vector<Task2Label> cats = {
        Task2Label::ideological_inequality,
        Task2Label::stereotyping_dominance,
        Task2Label::objectification,
        Task2Label::sexual_violence,
        Task2Label::misogyny_non_sexual_violence,
    };
    return cats;
}

int task1_index(Task1Label l) {
    return l == Task1Label::sexist ? 0 : 1;
}

Task1Label task1_from_index(int idx) {
    if (idx == 0) return Task1Label::sexist;
    if (idx == 1) return Task1Label::non_sexist;
    throw InputError("task1 label index out of range: " + std::to_string(idx));
}

int task2_category_index(Task2Label l) {
    const auto& cats = task2_categories();
    for (std::size_t i = 0; i < cats.size(); ++i) {
        if (cats[i] == l) return static_cast<int>(i);
    }
    throw InputError("non-sexist has no task2 category index");
}

Task2Label task2_category_from_index(int idx) {
    const auto& cats = task2_categories();
    if (idx < 0 || static_cast<std::size_t>(idx) >= cats.size()) {
        throw InputError("task2 category index out of range: " + std::to_string(idx));
    }
    return cats[static_cast<std::size_t>(idx)];
}

}  // namespace verdict
