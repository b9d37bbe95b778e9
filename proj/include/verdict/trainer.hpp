#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "verdict/corpus.hpp"
#include "verdict/encoder.hpp"
#include "verdict/tokenizer.hpp"

namespace verdict {

struct TrainConfig {
    int epochs = 10;
    double train_fraction = 0.8;
    int batch_size = 16;
    double learning_rate = 1e-3;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_epsilon = 1e-8;
    std::vector<std::int64_t> seeds = {1, 2, 3};
    std::uint64_t split_seed = 1;
    int max_len = 64;
    int d_model = 64;
    int n_heads = 4;
    int n_layers = 2;
    int d_ff = 128;
    double dropout_rate = 0.1;
    int threads = 1;  // parallel ensemble members; results identical either way

    void validate() const;  // throws ConfigError
};

struct AdamState {
    ParamSet first_moment;
    ParamSet second_moment;
    std::int64_t step_count = 0;

    static AdamState zeros_like(const ModelConfig& cfg);
};

struct EpochStats {
    double train_loss = 0.0;
    double train_accuracy = 0.0;
    double dev_accuracy = 0.0;
};

struct TrainResult {
    ClassifierModel model;  // checkpoint from the best-dev-accuracy epoch
    double best_dev_accuracy = 0.0;
    std::vector<EpochStats> history;  // one entry per epoch
};

// Bias-corrected Adam update applied in place. Throws NumericalError when
// grads contain non-finite values.
void adam_step(ClassifierModel& model, const ParamSet& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps);

// Trains one classifier: stratified 80-20 split (split_seed shared across
// ensemble members so they see identical data), `epochs` passes of shuffled
// mini-batches keyed by `seed`, per-epoch dev evaluation in inference mode,
// and best-dev-epoch checkpoint selection with ties going to the earliest
// epoch. Records must already be language-filtered and labeled for `task`.
// Progress lines go to `progress` when non-null.
TrainResult train_one(const std::vector<TextRecord>& records, Task task,
                      const Vocabulary& vocab, const TrainConfig& config, std::int64_t seed,
                      std::ostream* progress = nullptr);

}  // namespace verdict
