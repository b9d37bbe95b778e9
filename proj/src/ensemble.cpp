#include "verdict/ensemble.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <thread>

#include "verdict/errors.hpp"
#include "verdict/textprep.hpp"

namespace verdict {

int majority_vote(const std::vector<int>& votes,
                  const std::vector<std::vector<double>>& member_confidences) {
    if (votes.empty()) throw InputError("majority_vote: no votes");
    if (member_confidences.size() != votes.size()) {
        throw InputError("majority_vote: " + std::to_string(votes.size()) + " votes but " +
                         std::to_string(member_confidences.size()) + " confidence vectors");
    }
    std::size_t n_labels = member_confidences[0].size();
    for (std::size_t m = 0; m < votes.size(); ++m) {
        if (member_confidences[m].size() != n_labels) {
            throw InputError("majority_vote: ragged confidence vectors");
        }
        if (votes[m] < 0 || static_cast<std::size_t>(votes[m]) >= n_labels) {
            throw InputError("majority_vote: vote " + std::to_string(votes[m]) +
                             " out of range");
        }
    }

    std::vector<int> counts(n_labels, 0);
    for (int v : votes) ++counts[static_cast<std::size_t>(v)];
    int top = *std::max_element(counts.begin(), counts.end());

    int best = -1;
    double best_sum = 0.0;
    for (std::size_t l = 0; l < n_labels; ++l) {
        if (counts[l] != top) continue;
        double sum = 0.0;
        for (const auto& conf : member_confidences) sum += conf[l];
        if (best < 0 || sum > best_sum) {
            best = static_cast<int>(l);
            best_sum = sum;
        }
    }
    return best;
}

EnsembleModel train_ensemble(const std::vector<TextRecord>& records, Task task,
                             Language language, const Vocabulary& vocab,
                             const TrainConfig& config, std::ostream* progress) {
    config.validate();
    std::size_t k = config.seeds.size();
    std::vector<TrainResult> results(k);
    std::vector<std::string> logs(k);

    auto run_member = [&](std::size_t idx) {
        std::ostringstream buf;
        results[idx] =
            train_one(records, task, vocab, config, config.seeds[idx], progress ? &buf : nullptr);
        logs[idx] = buf.str();
    };

    int threads = std::min<int>(config.threads, static_cast<int>(k));
    if (threads <= 1) {
        for (std::size_t i = 0; i < k; ++i) run_member(i);
    } else {
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&run_member, k, t, threads]() {
                // Static stride schedule keeps member work independent of timing.
                for (std::size_t i = static_cast<std::size_t>(t); i < k;
                     i += static_cast<std::size_t>(threads)) {
                    run_member(i);
                }
            });
        }
        for (std::thread& th : pool) th.join();
    }

    EnsembleModel ensemble;
    ensemble.task = task;
    ensemble.language = language;
    ensemble.vocab = vocab;
    for (std::size_t i = 0; i < k; ++i) {
        if (progress) {
            (*progress) << "member seed=" << config.seeds[i]
                        << " best_dev_acc=" << results[i].best_dev_accuracy << "\n"
                        << logs[i];
        }
        ensemble.members.push_back(std::move(results[i].model));
    }
    return ensemble;
}

EnsemblePrediction predict_ensemble(const EnsembleModel& ensemble, const std::string& text) {
    if (ensemble.members.empty()) throw InputError("predict_ensemble: no members");
    TokenSequence seq =
        encode(ensemble.vocab, mask_mentions_urls(text), ensemble.members[0].config.max_len);

    EnsemblePrediction out;
    std::vector<std::vector<double>> confidences;
    for (const ClassifierModel& m : ensemble.members) {
        Prediction p = predict(m, seq);
        out.votes.push_back(p.label_index);
        confidences.push_back(std::move(p.probabilities));
    }
    out.label_index = majority_vote(out.votes, confidences);

    std::vector<int> counts(confidences[0].size(), 0);
    for (int v : out.votes) ++counts[static_cast<std::size_t>(v)];
    std::sort(counts.begin(), counts.end(), std::greater<int>());
    out.margin = counts.size() > 1 ? counts[0] - counts[1] : counts[0];
    return out;
}

double simulate_vote_accuracy(int k, double member_accuracy, double pairwise_error_correlation,
                              std::int64_t trials, std::uint64_t seed) {
    if (k < 1 || k % 2 == 0) throw ConfigError("simulator requires odd k >= 1");
    if (member_accuracy < 0.0 || member_accuracy > 1.0) {
        throw ConfigError("member_accuracy must be in [0, 1]");
    }
    if (pairwise_error_correlation < 0.0 || pairwise_error_correlation > 1.0) {
        throw ConfigError("correlation must be in [0, 1]");
    }
    if (trials < 1) throw ConfigError("trials must be at least 1");

    Rng rng(seed);
    std::int64_t correct_trials = 0;
    for (std::int64_t t = 0; t < trials; ++t) {
        bool shared = rng.uniform() < pairwise_error_correlation;
        if (shared) {
            if (rng.uniform() < member_accuracy) ++correct_trials;
        } else {
            int correct_members = 0;
            for (int m = 0; m < k; ++m) {
                if (rng.uniform() < member_accuracy) ++correct_members;
            }
            if (correct_members * 2 > k) ++correct_trials;
        }
    }
    return static_cast<double>(correct_trials) / static_cast<double>(trials);
}

}  // namespace verdict
