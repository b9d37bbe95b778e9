#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace verdict {

enum class Source { twitter, gab };
enum class Language { en, es };

enum class Task1Label { sexist, non_sexist };

enum class Task2Label {
    non_sexist,
    ideological_inequality,
    stereotyping_dominance,
    objectification,
    sexual_violence,
    misogyny_non_sexual_violence,
};

enum class Task { task1, task2 };

// Canonical label strings are lowercase-hyphenated. Parsing is
// case-insensitive and treats '-', '_' and ' ' as the same separator.
std::string to_string(Source s);
std::string to_string(Language l);
std::string to_string(Task1Label l);
std::string to_string(Task2Label l);
std::string to_string(Task t);

Source parse_source(std::string_view s);
Language parse_language(std::string_view s);
Task1Label parse_task1_label(std::string_view s);
Task2Label parse_task2_label(std::string_view s);

// Ordered label sets used for classifier outputs and report layout.
const std::vector<std::string>& task1_label_set();
const std::vector<std::string>& task2_label_set();
// The five sexist categories (task2 set minus non-sexist), in declared order.
// These are the class indices of the five-way stage-two classifier.
const std::vector<Task2Label>& task2_categories();

int task1_index(Task1Label l);
Task1Label task1_from_index(int idx);
int task2_category_index(Task2Label l);  // error on non-sexist
Task2Label task2_category_from_index(int idx);

}  // namespace verdict
