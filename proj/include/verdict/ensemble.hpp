#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "verdict/corpus.hpp"
#include "verdict/encoder.hpp"
#include "verdict/tokenizer.hpp"
#include "verdict/trainer.hpp"

namespace verdict {

// K seed-varied classifiers over identical data, combined by majority vote.
struct EnsembleModel {
    std::vector<ClassifierModel> members;
    Task task = Task::task1;
    Language language = Language::en;
    Vocabulary vocab;
};

struct EnsemblePrediction {
    int label_index = 0;
    std::vector<int> votes;  // per member
    int margin = 0;          // top vote count minus runner-up count
};

// Label with the most votes; ties broken by the highest probability summed
// over all members, then by the lowest label index. Confidence vectors are
// per member, aligned with votes.
int majority_vote(const std::vector<int>& votes,
                  const std::vector<std::vector<double>>& member_confidences);

// One train_one run per seed in config.seeds, identical data and split for
// every member. config.threads > 1 trains members concurrently; per-member
// progress is buffered and emitted in member order so output is stable.
EnsembleModel train_ensemble(const std::vector<TextRecord>& records, Task task,
                             Language language, const Vocabulary& vocab,
                             const TrainConfig& config, std::ostream* progress = nullptr);

EnsemblePrediction predict_ensemble(const EnsembleModel& ensemble, const std::string& text);

// Monte-Carlo estimate of majority-vote accuracy for k members of given
// accuracy. With probability `correlation` a trial draws one shared outcome
// for all members; otherwise members err independently. k must be odd.
double simulate_vote_accuracy(int k, double member_accuracy, double pairwise_error_correlation,
                              std::int64_t trials, std::uint64_t seed);

}  // namespace verdict
