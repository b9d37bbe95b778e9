#pragma once

#include <map>
#include <string>
#include <vector>

#include "verdict/corpus.hpp"

namespace verdict {

struct ConfusionMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<std::size_t>> counts;  // rows = gold, columns = predicted

    std::size_t total() const;
    std::size_t trace() const;
};

struct ClassMetrics {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
    std::size_t support = 0;
};

struct EvaluationReport {
    double accuracy = 0.0;
    double macro_f1 = 0.0;
    std::map<std::string, ClassMetrics> per_class;
    ConfusionMatrix confusion;
    std::map<std::string, EvaluationReport> slices;  // per language, top level only
};

enum class ReportFormat { text, json };

// Precision/recall/F1 with the 0/0 -> 0 convention; macro-F1 averages over
// the full label_set, zero-support classes included.
EvaluationReport score(const std::vector<std::string>& gold,
                       const std::vector<std::string>& pred,
                       const std::vector<std::string>& label_set);

// Per-language reports over the language-filtered subsets; languages with no
// records are omitted.
std::map<Language, EvaluationReport> slice_by_language(
    const std::vector<TextRecord>& records, const std::vector<std::string>& gold,
    const std::vector<std::string>& pred, const std::vector<std::string>& label_set);

// Text: aligned confusion grid plus metric lines. Json: stable serialization
// with 6-decimal fixed formatting.
std::string render_report(const EvaluationReport& report, ReportFormat format);

}  // namespace verdict
