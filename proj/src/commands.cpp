#include "verdict/commands.hpp"

#include <iomanip>
#include <map>
#include <ostream>
#include <set>
#include <sstream>
#include <string>

#include "verdict/corpus.hpp"
#include "verdict/ensemble.hpp"
#include "verdict/errors.hpp"
#include "verdict/eval.hpp"
#include "verdict/io.hpp"
#include "verdict/pipeline.hpp"
#include "verdict/textprep.hpp"

namespace verdict {

namespace {

std::string require_path(const std::string& value, const char* key) {
    if (value.empty()) throw ConfigError(std::string("missing required config key '") + key + "'");
    return value;
}

}  // namespace

void run_train(const RunConfig& cfg, std::ostream& out) {
    std::string train_tsv = require_path(cfg.train_tsv, "train_tsv");
    std::string dir = !cfg.out_dir.empty() ? cfg.out_dir : cfg.model_dir;
    if (dir.empty()) throw ConfigError("missing output directory (model_dir or --out)");
    cfg.train.validate();

    std::vector<TextRecord> records = load_tsv(train_tsv, /*expect_labels=*/true);
    out << "loaded " << records.size() << " labeled records from " << train_tsv << "\n";

    PipelineModel pipeline;
    for (Language lang : {Language::en, Language::es}) {
        std::vector<TextRecord> lang_records = filter_language(records, lang);
        if (lang_records.empty()) {
            throw TrainingError("no records for language '" + to_string(lang) + "'");
        }
        out << "[" << to_string(lang) << "] " << lang_records.size() << " records\n";

        std::vector<std::string> masked;
        masked.reserve(lang_records.size());
        for (const TextRecord& r : lang_records) masked.push_back(mask_mentions_urls(r.text));
        Vocabulary vocab = build_vocab(masked, cfg.vocab_size, cfg.min_frequency);
        out << "[" << to_string(lang) << "] vocabulary: " << vocab.size() << " tokens\n";

        out << "[" << to_string(lang) << "] training task1 ensemble ("
            << cfg.train.seeds.size() << " members)\n";
        PipelineModel::LanguageSlot slot;
        slot.vocab = vocab;
        slot.task1 = train_ensemble(lang_records, Task::task1, lang, vocab, cfg.train, &out);

        std::vector<TextRecord> sexist = filter_sexist(lang_records);
        out << "[" << to_string(lang) << "] training task2 model on " << sexist.size()
            << " sexist records\n";
        TrainResult task2 =
            train_one(sexist, Task::task2, vocab, cfg.train, cfg.task2_seed, &out);
        out << "task2 seed=" << cfg.task2_seed << " best_dev_acc=" << task2.best_dev_accuracy
            << "\n";
        slot.task2 = std::move(task2.model);

        pipeline.slots.emplace(lang, std::move(slot));
    }

    save_pipeline(pipeline, dir);
    out << "wrote pipeline to " << dir << "/manifest.txt\n";
}

void run_predict(const RunConfig& cfg, std::ostream& out) {
    std::string model_dir = require_path(cfg.model_dir, "model_dir");
    std::string input_tsv = require_path(cfg.input_tsv, "input_tsv");
    std::string pred_path = cfg.pred_tsv;
    if (pred_path.empty()) {
        if (cfg.out_dir.empty()) {
            throw ConfigError("missing prediction output (pred_tsv or --out)");
        }
        pred_path = cfg.out_dir + "/predictions.tsv";
    }

    PipelineModel pipeline = load_pipeline(model_dir + "/manifest.txt");
    std::vector<TextRecord> records = load_tsv(input_tsv, /*expect_labels=*/false);
    std::vector<BatchPrediction> predictions = predict_batch(pipeline, records);
    write_predictions_tsv(predictions, pred_path);
    out << "wrote " << predictions.size() << " predictions to " << pred_path << "\n";
}

void run_evaluate(const RunConfig& cfg, std::ostream& out) {
    std::string gold_tsv = require_path(cfg.gold_tsv, "gold_tsv");
    std::string pred_tsv = require_path(cfg.pred_tsv, "pred_tsv");

    std::vector<TextRecord> gold = load_tsv(gold_tsv, /*expect_labels=*/true);
    std::vector<BatchPrediction> preds = load_predictions_tsv(pred_tsv);
    if (gold.size() != preds.size()) {
        throw InputError("gold has " + std::to_string(gold.size()) + " rows but predictions have " +
                         std::to_string(preds.size()));
    }

    std::map<std::string, const BatchPrediction*> by_id;
    for (const BatchPrediction& p : preds) {
        if (!by_id.emplace(p.id, &p).second) {
            throw InputError("duplicate id in predictions: " + p.id);
        }
    }

    std::vector<std::string> gold1, pred1, gold2, pred2;
    std::set<std::string> gold_ids;
    for (const TextRecord& r : gold) {
        if (!gold_ids.insert(r.id).second) throw InputError("duplicate id in gold: " + r.id);
        auto it = by_id.find(r.id);
        if (it == by_id.end()) throw InputError("no prediction for id " + r.id);
        gold1.push_back(to_string(*r.task1));
        pred1.push_back(to_string(it->second->task1));
        gold2.push_back(to_string(*r.task2));
        pred2.push_back(to_string(it->second->task2));
    }

    EvaluationReport r1 = score(gold1, pred1, task1_label_set());
    EvaluationReport r2 = score(gold2, pred2, task2_label_set());
    {
        auto s1 = slice_by_language(gold, gold1, pred1, task1_label_set());
        auto s2 = slice_by_language(gold, gold2, pred2, task2_label_set());
        for (auto& [lang, rep] : s1) r1.slices.emplace(to_string(lang), std::move(rep));
        for (auto& [lang, rep] : s2) r2.slices.emplace(to_string(lang), std::move(rep));
    }

    out << "== task1 ==\n" << render_report(r1, ReportFormat::text) << "\n";
    out << "== task2 ==\n" << render_report(r2, ReportFormat::text);

    if (!cfg.out_dir.empty()) {
        atomic_write_file(cfg.out_dir + "/report_task1.json",
                          render_report(r1, ReportFormat::json) + "\n");
        atomic_write_file(cfg.out_dir + "/report_task2.json",
                          render_report(r2, ReportFormat::json) + "\n");
        out << "wrote JSON reports to " << cfg.out_dir << "\n";
    }
}

void run_simulate(const RunConfig& cfg, std::ostream& out) {
    out << "k  accuracy\n";
    for (int k : cfg.sim_k) {
        double est = simulate_vote_accuracy(k, cfg.sim_p, cfg.sim_correlation, cfg.sim_trials,
                                            static_cast<std::uint64_t>(cfg.seed));
        std::ostringstream line;
        line << k << "  " << std::fixed << std::setprecision(6) << est << "\n";
        out << line.str();
    }
}

}  // namespace verdict
