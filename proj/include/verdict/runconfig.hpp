#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "verdict/trainer.hpp"

namespace verdict {

// Everything a command needs, assembled from a `key = value` config file and
// then overridden by command-line flags. All randomness flows from the seeds
// recorded here; nothing is wall-clock seeded.
struct RunConfig {
    // paths
    std::string train_tsv;
    std::string input_tsv;   // records to predict
    std::string gold_tsv;    // labeled reference for evaluate
    std::string pred_tsv;    // predictions file (output of predict, input of evaluate)
    std::string model_dir;   // where train writes and predict reads
    std::string out_dir;     // command output directory (--out)

    // master seed: defaults member seeds to {seed, seed+1, seed+2} and
    // split_seed to seed when those are not given explicitly
    std::int64_t seed = 1;
    bool seeds_explicit = false;
    bool split_seed_explicit = false;

    TrainConfig train;
    std::int64_t task2_seed = 0;  // defaults to the first member seed
    bool task2_seed_explicit = false;

    // vocabulary
    int vocab_size = 4000;
    int min_frequency = 1;

    // simulator
    std::vector<int> sim_k = {1, 3, 5, 7};
    double sim_p = 0.76;
    double sim_correlation = 0.0;
    std::int64_t sim_trials = 100000;

    // Applies seed-derived defaults; call after all overrides.
    void finalize();
};

// Parses a config file into cfg. Unknown keys are errors; '#' starts a
// comment; values may be lists ("seeds = 1,2,3").
void parse_config_file(const std::string& path, RunConfig* cfg);

// Applies one key/value override (same keys as the file).
void apply_config_value(const std::string& key, const std::string& value, RunConfig* cfg);

}  // namespace verdict
