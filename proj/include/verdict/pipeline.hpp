#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "verdict/corpus.hpp"
#include "verdict/ensemble.hpp"

namespace verdict {

// The deployed two-stage system: per-language task1 voting ensembles and one
// per-language five-way task2 classifier, entered only for texts the first
// stage flags as sexist.
struct PipelineModel {
    struct LanguageSlot {
        Vocabulary vocab;
        EnsembleModel task1;
        ClassifierModel task2;
    };
    std::map<Language, LanguageSlot> slots;

    const LanguageSlot& slot(Language lang) const;  // ConfigError when missing
};

// Optional observability for tests and debugging.
struct PredictTrace {
    Language language = Language::en;
    bool task2_invoked = false;
    std::vector<int> task1_votes;
    int task1_margin = 0;
};

struct BatchPrediction {
    std::string id;
    Task1Label task1;
    Task2Label task2;
};

std::pair<Task1Label, Task2Label> predict_record(const PipelineModel& pipeline,
                                                 const TextRecord& record,
                                                 PredictTrace* trace = nullptr);

// Order-preserving application of predict_record; per-record failures are
// aggregated into one InputError listing the offending ids.
std::vector<BatchPrediction> predict_batch(const PipelineModel& pipeline,
                                           const std::vector<TextRecord>& records);

// Prediction TSV: header then `id <TAB> task1 <TAB> task2` rows, labels in
// canonical lowercase-hyphenated form.
void write_predictions_tsv(const std::vector<BatchPrediction>& predictions,
                           const std::string& path);
std::vector<BatchPrediction> load_predictions_tsv(const std::string& path);

// Writes vocabularies, member checkpoints and `manifest.txt` under dir. The
// manifest is plain text, one `key value` pair per line with per-language
// sections; checkpoint and vocabulary paths are relative to the manifest
// location. The format accepts several task2 entries per language but the
// loader requires exactly one.
void save_pipeline(const PipelineModel& pipeline, const std::string& dir);
PipelineModel load_pipeline(const std::string& manifest_path);

}  // namespace verdict
