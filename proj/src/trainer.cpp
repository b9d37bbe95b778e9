#include "verdict/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <set>

#include "verdict/errors.hpp"
#include "verdict/textprep.hpp"

namespace verdict {

namespace {

int label_index_for(const TextRecord& r, Task task) {
    if (task == Task::task1) return task1_index(*r.task1);
    return task2_category_index(*r.task2);
}

int n_classes_for(Task task) { return task == Task::task1 ? 2 : 5; }

double accuracy_on(const ClassifierModel& model,
                   const std::vector<std::pair<TokenSequence, int>>& data) {
    if (data.empty()) return 0.0;
    std::size_t correct = 0;
    for (const auto& [seq, label] : data) {
        if (predict(model, seq).label_index == label) ++correct;
    }
    return static_cast<double>(correct) / static_cast<double>(data.size());
}

std::vector<std::pair<TokenSequence, int>> encode_records(
    const std::vector<TextRecord>& records, Task task, const Vocabulary& vocab, int max_len) {
    std::vector<std::pair<TokenSequence, int>> out;
    out.reserve(records.size());
    for (const TextRecord& r : records) {
        out.emplace_back(encode(vocab, mask_mentions_urls(r.text), max_len),
                         label_index_for(r, task));
    }
    return out;
}

}  // namespace

void TrainConfig::validate() const {
    if (epochs < 1) throw ConfigError("epochs must be at least 1");
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must be in (0, 1)");
    }
    if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
    if (!(learning_rate > 0.0)) throw ConfigError("learning_rate must be positive");
    if (seeds.empty()) throw ConfigError("seeds must not be empty");
    std::set<std::int64_t> distinct(seeds.begin(), seeds.end());
    if (distinct.size() != seeds.size()) throw ConfigError("seeds must be pairwise distinct");
    if (threads < 1) throw ConfigError("threads must be at least 1");
}

AdamState AdamState::zeros_like(const ModelConfig& cfg) {
    AdamState s;
    s.first_moment = ParamSet::zeros_like(cfg);
    s.second_moment = ParamSet::zeros_like(cfg);
    return s;
}

void adam_step(ClassifierModel& model, const ParamSet& grads, AdamState& state, double lr,
               double beta1, double beta2, double eps) {
    std::vector<Matrix*> params = tensor_list(model.params);
    std::vector<const Matrix*> g = tensor_list(grads);
    std::vector<Matrix*> m = tensor_list(state.first_moment);
    std::vector<Matrix*> v = tensor_list(state.second_moment);

    state.step_count += 1;
    double t = static_cast<double>(state.step_count);
    double bc1 = 1.0 - std::pow(beta1, t);
    double bc2 = 1.0 - std::pow(beta2, t);

    for (std::size_t ti = 0; ti < params.size(); ++ti) {
        if (!params[ti]->same_shape(*g[ti])) {
            throw InputError("adam_step: gradient shape mismatch at tensor " +
                             std::to_string(ti));
        }
        for (std::size_t i = 0; i < params[ti]->size(); ++i) {
            double gi = g[ti]->data[i];
            if (!std::isfinite(gi)) {
                throw NumericalError("adam_step: non-finite gradient at tensor " +
                                     std::to_string(ti));
            }
            double& mi = m[ti]->data[i];
            double& vi = v[ti]->data[i];
            mi = beta1 * mi + (1.0 - beta1) * gi;
            vi = beta2 * vi + (1.0 - beta2) * gi * gi;
            double mhat = mi / bc1;
            double vhat = vi / bc2;
            params[ti]->data[i] -= lr * mhat / (std::sqrt(vhat) + eps);
        }
    }
}

TrainResult train_one(const std::vector<TextRecord>& records, Task task,
                      const Vocabulary& vocab, const TrainConfig& config, std::int64_t seed,
                      std::ostream* progress) {
    config.validate();
    if (records.empty()) throw TrainingError("no training records");

    auto [train_recs, dev_recs] =
        stratified_split(records, config.train_fraction, task, config.split_seed);
    if (dev_recs.empty()) throw TrainingError("dev split is empty");

    // Every class must survive into the training split.
    int n_classes = n_classes_for(task);
    {
        std::vector<std::size_t> per_class(static_cast<std::size_t>(n_classes), 0);
        for (const TextRecord& r : train_recs) {
            ++per_class[static_cast<std::size_t>(label_index_for(r, task))];
        }
        for (int c = 0; c < n_classes; ++c) {
            if (per_class[static_cast<std::size_t>(c)] == 0) {
                std::string label = task == Task::task1
                                        ? task1_label_set()[static_cast<std::size_t>(c)]
                                        : to_string(task2_category_from_index(c));
                throw TrainingError("class '" + label + "' is empty in the training split");
            }
        }
    }

    auto train_data = encode_records(train_recs, task, vocab, config.max_len);
    auto dev_data = encode_records(dev_recs, task, vocab, config.max_len);

    ModelConfig mc;
    mc.vocab_size = vocab.size();
    mc.max_len = config.max_len;
    mc.d_model = config.d_model;
    mc.n_heads = config.n_heads;
    mc.n_layers = config.n_layers;
    mc.d_ff = config.d_ff;
    mc.n_classes = n_classes;
    mc.dropout_rate = config.dropout_rate;

    ClassifierModel model = init_model(mc, seed);
    AdamState adam = AdamState::zeros_like(mc);
    Rng shuffle_rng(static_cast<std::uint64_t>(seed), /*stream_tag=*/0x73687566);

    TrainResult result;
    result.history.reserve(static_cast<std::size_t>(config.epochs));
    ParamSet best_params;
    double best_acc = -1.0;

    std::vector<std::size_t> order(train_data.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    for (int epoch = 1; epoch <= config.epochs; ++epoch) {
        shuffle_rng.shuffle(order);
        double epoch_loss = 0.0;
        std::size_t seen = 0;
        ParamSet grads;
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(config.batch_size)) {
            std::size_t end =
                std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
            std::vector<std::pair<TokenSequence, int>> batch;
            batch.reserve(end - start);
            for (std::size_t i = start; i < end; ++i) batch.push_back(train_data[order[i]]);
            double loss = loss_and_grad(model, batch, &grads);
            adam_step(model, grads, adam, config.learning_rate, config.adam_beta1,
                      config.adam_beta2, config.adam_epsilon);
            epoch_loss += loss * static_cast<double>(batch.size());
            seen += batch.size();
        }

        EpochStats stats;
        stats.train_loss = epoch_loss / static_cast<double>(seen);
        stats.train_accuracy = accuracy_on(model, train_data);
        stats.dev_accuracy = accuracy_on(model, dev_data);
        result.history.push_back(stats);
        if (progress) {
            (*progress) << "epoch=" << epoch << " train_loss=" << stats.train_loss
                        << " dev_acc=" << stats.dev_accuracy << "\n";
        }
        if (stats.dev_accuracy > best_acc) {
            best_acc = stats.dev_accuracy;
            best_params = model.params;
        }
    }

    result.best_dev_accuracy = best_acc;
    result.model = std::move(model);
    result.model.params = std::move(best_params);
    return result;
}

}  // namespace verdict
