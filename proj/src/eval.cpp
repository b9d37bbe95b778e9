#include "verdict/eval.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

#include "verdict/errors.hpp"

namespace verdict {

namespace {

std::string fixed6(double v) {
    std::ostringstream out;
    out << std::fixed << std::setprecision(6) << v;
    return out.str();
}

std::string json_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string report_json(const EvaluationReport& r, bool with_slices) {
    std::string out = "{";
    out += "\"accuracy\": " + fixed6(r.accuracy) + ", ";
    out += "\"macro_f1\": " + fixed6(r.macro_f1) + ", ";
    out += "\"per_class\": {";
    bool first = true;
    for (const std::string& label : r.confusion.labels) {
        const ClassMetrics& m = r.per_class.at(label);
        if (!first) out += ", ";
        first = false;
        out += "\"" + json_escape(label) + "\": {\"precision\": " + fixed6(m.precision) +
               ", \"recall\": " + fixed6(m.recall) + ", \"f1\": " + fixed6(m.f1) +
               ", \"support\": " + std::to_string(m.support) + "}";
    }
    out += "}, \"confusion\": {\"labels\": [";
    first = true;
    for (const std::string& label : r.confusion.labels) {
        if (!first) out += ", ";
        first = false;
        out += "\"" + json_escape(label) + "\"";
    }
    out += "], \"counts\": [";
    for (std::size_t i = 0; i < r.confusion.counts.size(); ++i) {
        if (i) out += ", ";
        out += "[";
        for (std::size_t j = 0; j < r.confusion.counts[i].size(); ++j) {
            if (j) out += ", ";
            out += std::to_string(r.confusion.counts[i][j]);
        }
        out += "]";
    }
    out += "]}";
    if (with_slices) {
        out += ", \"slices\": {";
        first = true;
        for (const auto& [lang, slice] : r.slices) {
            if (!first) out += ", ";
            first = false;
            out += "\"" + json_escape(lang) + "\": " + report_json(slice, false);
        }
        out += "}";
    }
    out += "}";
    return out;
}

std::string report_text(const EvaluationReport& r) {
    std::ostringstream out;
    std::size_t width = 4;
    for (const std::string& l : r.confusion.labels) width = std::max(width, l.size());
    for (const auto& row : r.confusion.counts) {
        for (std::size_t c : row) width = std::max(width, std::to_string(c).size());
    }

    out << "confusion matrix (rows = gold, columns = predicted)\n";
    out << std::setw(static_cast<int>(width) + 2) << "";
    for (const std::string& l : r.confusion.labels) {
        out << std::setw(static_cast<int>(width) + 2) << l;
    }
    out << "\n";
    for (std::size_t i = 0; i < r.confusion.labels.size(); ++i) {
        out << std::setw(static_cast<int>(width) + 2) << r.confusion.labels[i];
        for (std::size_t j = 0; j < r.confusion.labels.size(); ++j) {
            out << std::setw(static_cast<int>(width) + 2) << r.confusion.counts[i][j];
        }
        out << "\n";
    }
    out << "accuracy=" << fixed6(r.accuracy) << "\n";
    out << "macro_f1=" << fixed6(r.macro_f1) << "\n";
    for (const std::string& label : r.confusion.labels) {
        const ClassMetrics& m = r.per_class.at(label);
        out << label << ": precision=" << fixed6(m.precision) << " recall=" << fixed6(m.recall)
            << " f1=" << fixed6(m.f1) << " support=" << m.support << "\n";
    }
    for (const auto& [lang, slice] : r.slices) {
        out << "\n[" << lang << "]\n" << report_text(slice);
    }
    return out.str();
}

}  // namespace

std::size_t ConfusionMatrix::total() const {
    std::size_t t = 0;
    for (const auto& row : counts) {
        for (std::size_t c : row) t += c;
    }
    return t;
}

std::size_t ConfusionMatrix::trace() const {
    std::size_t t = 0;
    for (std::size_t i = 0; i < counts.size(); ++i) t += counts[i][i];
    return t;
}

EvaluationReport score(const std::vector<std::string>& gold,
                       const std::vector<std::string>& pred,
                       const std::vector<std::string>& label_set) {
    if (gold.size() != pred.size()) {
        throw InputError("score: " + std::to_string(gold.size()) + " gold labels vs " +
                         std::to_string(pred.size()) + " predictions");
    }
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < label_set.size(); ++i) index[label_set[i]] = i;
    if (index.size() != label_set.size()) throw InputError("score: duplicate label in label_set");

    EvaluationReport r;
    r.confusion.labels = label_set;
    r.confusion.counts.assign(label_set.size(),
                              std::vector<std::size_t>(label_set.size(), 0));
    for (std::size_t i = 0; i < gold.size(); ++i) {
        auto gi = index.find(gold[i]);
        auto pi = index.find(pred[i]);
        if (gi == index.end()) throw InputError("score: unknown gold label '" + gold[i] + "'");
        if (pi == index.end()) throw InputError("score: unknown predicted label '" + pred[i] + "'");
        ++r.confusion.counts[gi->second][pi->second];
    }

    std::size_t total = gold.size();
    r.accuracy = total == 0 ? 0.0
                            : static_cast<double>(r.confusion.trace()) / static_cast<double>(total);

    double f1_sum = 0.0;
    for (std::size_t c = 0; c < label_set.size(); ++c) {
        std::size_t tp = r.confusion.counts[c][c];
        std::size_t fp = 0, fn = 0;
        for (std::size_t o = 0; o < label_set.size(); ++o) {
            if (o == c) continue;
            fp += r.confusion.counts[o][c];
            fn += r.confusion.counts[c][o];
        }
        ClassMetrics m;
        m.support = tp + fn;
        m.precision = (tp + fp) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
        m.recall = (tp + fn) == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
        m.f1 = (m.precision + m.recall) == 0.0
                   ? 0.0
                   : 2.0 * m.precision * m.recall / (m.precision + m.recall);
        f1_sum += m.f1;
        r.per_class[label_set[c]] = m;
    }
    r.macro_f1 = label_set.empty() ? 0.0 : f1_sum / static_cast<double>(label_set.size());
    return r;
}

std::map<Language, EvaluationReport> slice_by_language(
    const std::vector<TextRecord>& records, const std::vector<std::string>& gold,
    const std::vector<std::string>& pred, const std::vector<std::string>& label_set) {
    if (records.size() != gold.size() || records.size() != pred.size()) {
        throw InputError("slice_by_language: misaligned inputs");
    }
    std::map<Language, EvaluationReport> out;
    for (Language lang : {Language::en, Language::es}) {
        std::vector<std::string> g, p;
        for (std::size_t i = 0; i < records.size(); ++i) {
            if (records[i].language != lang) continue;
            g.push_back(gold[i]);
            p.push_back(pred[i]);
        }
        if (g.empty()) continue;
        out.emplace(lang, score(g, p, label_set));
    }
    return out;
}

std::string render_report(const EvaluationReport& report, ReportFormat format) {
    if (format == ReportFormat::json) return report_json(report, true);
    return report_text(report);
}

}  // namespace verdict
