#include "verdict/pipeline.hpp"

#include <filesystem>
#include <set>
#include <sstream>

#include "verdict/errors.hpp"
#include "verdict/io.hpp"
#include "verdict/textprep.hpp"

namespace verdict {

namespace fs = std::filesystem;

const PipelineModel::LanguageSlot& PipelineModel::slot(Language lang) const {
    auto it = slots.find(lang);
    if (it == slots.end()) {
        throw ConfigError("pipeline has no models for language '" + to_string(lang) + "'");
    }
    return it->second;
}

std::pair<Task1Label, Task2Label> predict_record(const PipelineModel& pipeline,
                                                 const TextRecord& record,
                                                 PredictTrace* trace) {
    const PipelineModel::LanguageSlot& slot = pipeline.slot(record.language);
    if (trace) {
        *trace = PredictTrace{};
        trace->language = record.language;
    }

    EnsemblePrediction stage1 = predict_ensemble(slot.task1, record.text);
    if (trace) {
        trace->task1_votes = stage1.votes;
        trace->task1_margin = stage1.margin;
    }
    Task1Label t1 = task1_from_index(stage1.label_index);
    if (t1 == Task1Label::non_sexist) {
        return {Task1Label::non_sexist, Task2Label::non_sexist};
    }

    if (trace) trace->task2_invoked = true;
    TokenSequence seq =
        encode(slot.vocab, mask_mentions_urls(record.text), slot.task2.config.max_len);
    Prediction p = predict(slot.task2, seq);
    return {Task1Label::sexist, task2_category_from_index(p.label_index)};
}

std::vector<BatchPrediction> predict_batch(const PipelineModel& pipeline,
                                           const std::vector<TextRecord>& records) {
    std::vector<BatchPrediction> out;
    out.reserve(records.size());
    std::string failures;
    for (const TextRecord& r : records) {
        try {
            auto [t1, t2] = predict_record(pipeline, r);
            out.push_back({r.id, t1, t2});
        } catch (const Error& e) {
            failures += (failures.empty() ? "" : "; ") + ("id " + r.id + ": " + e.what());
        }
    }
    if (!failures.empty()) throw InputError("prediction failed for: " + failures);
    return out;
}

void write_predictions_tsv(const std::vector<BatchPrediction>& predictions,
                           const std::string& path) {
    std::string out = "id\ttask1\ttask2\n";
    for (const BatchPrediction& p : predictions) {
        out += p.id + "\t" + to_string(p.task1) + "\t" + to_string(p.task2) + "\n";
    }
    atomic_write_file(path, out);
}

std::vector<BatchPrediction> load_predictions_tsv(const std::string& path) {
    std::string content = read_file(path);
    std::vector<BatchPrediction> out;
    std::istringstream in(content);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row;
        if (row == 1) {
            if (line != "id\ttask1\ttask2") {
                throw SchemaError(path + ": expected header 'id\\ttask1\\ttask2'");
            }
            continue;
        }
        if (line.empty()) continue;
        std::size_t t1 = line.find('\t');
        std::size_t t2 = t1 == std::string::npos ? std::string::npos : line.find('\t', t1 + 1);
        if (t2 == std::string::npos || line.find('\t', t2 + 1) != std::string::npos) {
            throw ParseError(path + ": row " + std::to_string(row) + ": expected 3 columns");
        }
        BatchPrediction p;
        p.id = line.substr(0, t1);
        try {
            p.task1 = parse_task1_label(line.substr(t1 + 1, t2 - t1 - 1));
            p.task2 = parse_task2_label(line.substr(t2 + 1));
        } catch (const ParseError& e) {
            throw ParseError(path + ": row " + std::to_string(row) + ": " + e.what());
        }
        out.push_back(std::move(p));
    }
    return out;
}

void save_pipeline(const PipelineModel& pipeline, const std::string& dir) {
    std::string manifest = "version 1\n";
    for (const auto& [lang, slot] : pipeline.slots) {
        std::string lang_s = to_string(lang);
        manifest += "language " + lang_s + "\n";
        std::string vocab_rel = lang_s + "/vocab.txt";
        save_vocab(slot.vocab, dir + "/" + vocab_rel);
        manifest += "vocab " + vocab_rel + "\n";
        for (const ClassifierModel& m : slot.task1.members) {
            std::string rel = lang_s + "/task1_seed" + std::to_string(m.seed) + ".ckpt";
            save_checkpoint(m, dir + "/" + rel);
            manifest += "task1_member " + rel + "\n";
        }
        std::string rel = lang_s + "/task2_seed" + std::to_string(slot.task2.seed) + ".ckpt";
        save_checkpoint(slot.task2, dir + "/" + rel);
        manifest += "task2_model " + rel + "\n";
    }
    atomic_write_file(dir + "/manifest.txt", manifest);
}

PipelineModel load_pipeline(const std::string& manifest_path) {
    std::string content = read_file(manifest_path);
    fs::path base = fs::path(manifest_path).parent_path();

    PipelineModel pipeline;
    std::optional<Language> current;
    std::map<Language, std::string> vocab_paths;
    std::map<Language, std::vector<std::string>> member_paths;
    std::map<Language, std::vector<std::string>> task2_paths;

    std::istringstream in(content);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row;
        if (line.empty() || line[0] == '#') continue;
        std::size_t sp = line.find(' ');
        if (sp == std::string::npos) {
            throw ParseError(manifest_path + ": line " + std::to_string(row) +
                             ": expected 'key value'");
        }
        std::string key = line.substr(0, sp);
        std::string value = line.substr(sp + 1);
        if (key == "version") {
            if (value != "1") {
                throw ParseError(manifest_path + ": unsupported manifest version " + value);
            }
        } else if (key == "language") {
            current = parse_language(value);
        } else if (key == "vocab" || key == "task1_member" || key == "task2_model") {
            if (!current) {
                throw ParseError(manifest_path + ": line " + std::to_string(row) + ": '" + key +
                                 "' before any 'language'");
            }
            if (key == "vocab") vocab_paths[*current] = value;
            if (key == "task1_member") member_paths[*current].push_back(value);
            if (key == "task2_model") task2_paths[*current].push_back(value);
        } else {
            throw ParseError(manifest_path + ": line " + std::to_string(row) +
                             ": unknown key '" + key + "'");
        }
    }

    for (Language lang : {Language::en, Language::es}) {
        if (!vocab_paths.count(lang)) {
            throw ConfigError(manifest_path + ": no section for language '" + to_string(lang) +
                              "'");
        }
        if (member_paths[lang].empty()) {
            throw ConfigError(manifest_path + ": no task1 members for language '" +
                              to_string(lang) + "'");
        }
        if (task2_paths[lang].size() != 1) {
            throw ConfigError(manifest_path + ": expected exactly one task2 model for '" +
                              to_string(lang) + "', found " +
                              std::to_string(task2_paths[lang].size()));
        }
        PipelineModel::LanguageSlot slot;
        slot.vocab = load_vocab((base / vocab_paths[lang]).string());
        slot.task1.task = Task::task1;
        slot.task1.language = lang;
        slot.task1.vocab = slot.vocab;
        for (const std::string& rel : member_paths[lang]) {
            slot.task1.members.push_back(load_checkpoint((base / rel).string()));
        }
        slot.task2 = load_checkpoint((base / task2_paths[lang][0]).string());
        if (slot.task2.config.n_classes != 5) {
            throw ConfigError(manifest_path + ": task2 model for '" + to_string(lang) +
                              "' must have 5 classes");
        }
        if (slot.task2.config.vocab_size != slot.vocab.size()) {
            throw ConfigError(manifest_path + ": task2 checkpoint vocab size does not match '" +
                              vocab_paths[lang] + "'");
        }
        std::set<std::int64_t> seeds;
        const ModelConfig& first = slot.task1.members[0].config;
        for (const ClassifierModel& m : slot.task1.members) {
            if (m.config.n_classes != 2) {
                throw ConfigError(manifest_path + ": task1 member for '" + to_string(lang) +
                                  "' must have 2 classes");
            }
            if (m.config.vocab_size != slot.vocab.size()) {
                throw ConfigError(manifest_path + ": checkpoint vocab size does not match '" +
                                  vocab_paths[lang] + "'");
            }
            if (m.config.max_len != first.max_len || m.config.d_model != first.d_model) {
                throw ConfigError(manifest_path + ": task1 members for '" + to_string(lang) +
                                  "' disagree on model shape");
            }
            if (!seeds.insert(m.seed).second) {
                throw ConfigError(manifest_path + ": duplicate member seed " +
                                  std::to_string(m.seed) + " for '" + to_string(lang) + "'");
            }
        }
        pipeline.slots.emplace(lang, std::move(slot));
    }
    return pipeline;
}

}  // namespace verdict
