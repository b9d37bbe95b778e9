#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "verdict/labels.hpp"

namespace verdict {

// One dataset row. Immutable after load; safe to share across threads.
struct TextRecord {
    std::string id;
    Source source = Source::twitter;
    Language language = Language::en;
    std::string text;
    std::optional<Task1Label> task1;
    std::optional<Task2Label> task2;
};

// Reads a UTF-8, tab-separated file with a header row naming columns
// {test_case, id, source, language, text[, task1, task2]}. No quoting: tabs
// and newlines are forbidden inside fields. Label columns are parsed only
// when expect_labels is true.
std::vector<TextRecord> load_tsv(const std::string& path, bool expect_labels);

// Inverse of load_tsv for test fixtures and corpus snapshots; text fields
// round-trip byte-exactly. Label columns are written when include_labels.
void write_tsv(const std::vector<TextRecord>& records, const std::string& path,
               bool include_labels);

std::vector<TextRecord> filter_language(const std::vector<TextRecord>& records, Language lang);

// Keeps records whose task1 label is sexist. Every record must carry task1.
std::vector<TextRecord> filter_sexist(const std::vector<TextRecord>& records);

// Per-class proportional split, deterministic for a fixed seed. Train sizes
// use the largest-remainder rule: floor(count * fraction) per class, leftover
// seats to the classes with the largest fractional remainders (ties by label
// string). Classes with fewer than 2 members go entirely to train and a
// warning is reported via the optional sink.
std::pair<std::vector<TextRecord>, std::vector<TextRecord>> stratified_split(
    const std::vector<TextRecord>& records, double train_fraction, Task task,
    std::uint64_t seed, std::vector<std::string>* warnings = nullptr);

// Exact histogram over the task's full label set (absent labels count 0).
std::map<std::string, std::size_t> class_counts(const std::vector<TextRecord>& records,
                                                Task task);

// Canonical label string of a record for the given task; throws if missing.
std::string record_label(const TextRecord& r, Task task);

}  // namespace verdict
