#include "verdict/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "verdict/errors.hpp"
#include "verdict/io.hpp"
#include "verdict/rng.hpp"
#include "verdict/utf8.hpp"

namespace verdict {

namespace {

std::vector<std::string> split_tabs(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t tab = line.find('\t', start);
        if (tab == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
    return out;
}

bool is_blank(const std::string& s) {
    return s.find_first_not_of(" \t\r\n\f\v") == std::string::npos;
}

struct ColumnIndex {
    int test_case = -1;
    int id = -1;
    int source = -1;
    int language = -1;
    int text = -1;
    int task1 = -1;
    int task2 = -1;
    int count = 0;
};

ColumnIndex parse_header(const std::string& header_line, bool expect_labels,
                         const std::string& path) {
    ColumnIndex idx;
    std::vector<std::string> names = split_tabs(header_line);
    idx.count = static_cast<int>(names.size());
    for (int i = 0; i < idx.count; ++i) {
        const std::string& n = names[static_cast<std::size_t>(i)];
        int* slot = nullptr;
        if (n == "test_case") slot = &idx.test_case;
        else if (n == "id") slot = &idx.id;
        else if (n == "source") slot = &idx.source;
        else if (n == "language") slot = &idx.language;
        else if (n == "text") slot = &idx.text;
        else if (n == "task1") slot = &idx.task1;
        else if (n == "task2") slot = &idx.task2;
        else throw SchemaError(path + ": unknown column '" + n + "'");
        if (*slot != -1) throw SchemaError(path + ": duplicate column '" + n + "'");
        *slot = i;
    }
    auto require = [&](int got, const char* name) {
        if (got == -1) throw SchemaError(path + ": missing column '" + std::string(name) + "'");
    };
    require(idx.test_case, "test_case");
    require(idx.id, "id");
    require(idx.source, "source");
    require(idx.language, "language");
    require(idx.text, "text");
    if (expect_labels) {
        require(idx.task1, "task1");
        require(idx.task2, "task2");
    }
    return idx;
}

}  // namespace

std::vector<TextRecord> load_tsv(const std::string& path, bool expect_labels) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw InputError("cannot open dataset file: " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    std::string content = buf.str();

    // Tolerate a UTF-8 BOM on the first line.
    if (content.size() >= 3 && content.compare(0, 3, "\xEF\xBB\xBF") == 0) {
        content.erase(0, 3);
    }

    std::vector<TextRecord> records;
    std::size_t pos = 0;
    std::size_t row = 0;  // header row is 1
    ColumnIndex cols;
    while (pos <= content.size()) {
        std::size_t nl = content.find('\n', pos);
        std::string line = (nl == std::string::npos) ? content.substr(pos)
                                                     : content.substr(pos, nl - pos);
        pos = (nl == std::string::npos) ? content.size() + 1 : nl + 1;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        ++row;
        if (row == 1) {
            cols = parse_header(line, expect_labels, path);
            continue;
        }
        if (line.empty() && pos > content.size()) break;  // trailing newline
        if (is_blank(line)) {
            throw ParseError(path + ": row " + std::to_string(row) + ": blank line");
        }
        std::vector<std::string> fields = split_tabs(line);
        if (static_cast<int>(fields.size()) != cols.count) {
            throw ParseError(path + ": row " + std::to_string(row) + ": expected " +
                             std::to_string(cols.count) + " columns, got " +
                             std::to_string(fields.size()));
        }
        auto field = [&](int i) -> const std::string& {
            return fields[static_cast<std::size_t>(i)];
        };
        if (!utf8::validate(field(cols.text))) {
            throw EncodingError(path + ": row " + std::to_string(row) +
                                ": text is not valid UTF-8");
        }
        TextRecord rec;
        rec.id = field(cols.id);
        rec.text = field(cols.text);
        if (is_blank(rec.text)) {
            throw ParseError(path + ": row " + std::to_string(row) + ": empty text");
        }
        try {
            rec.source = parse_source(field(cols.source));
            rec.language = parse_language(field(cols.language));
            if (expect_labels) {
                rec.task1 = parse_task1_label(field(cols.task1));
                rec.task2 = parse_task2_label(field(cols.task2));
            }
        } catch (const ParseError& e) {
            throw ParseError(path + ": row " + std::to_string(row) + ": " + e.what());
        }
        if (rec.task1 && rec.task2) {
            bool t1_non = *rec.task1 == Task1Label::non_sexist;
            bool t2_non = *rec.task2 == Task2Label::non_sexist;
            if (t1_non != t2_non) {
                throw ParseError(path + ": row " + std::to_string(row) +
                                 ": task1/task2 labels are inconsistent");
            }
        }
        records.push_back(std::move(rec));
    }
    return records;
}

void write_tsv(const std::vector<TextRecord>& records, const std::string& path,
               bool include_labels) {
    std::string out = "test_case\tid\tsource\tlanguage\ttext";
    if (include_labels) out += "\ttask1\ttask2";
    out += "\n";
    for (const TextRecord& r : records) {
        if (r.text.find('\t') != std::string::npos || r.text.find('\n') != std::string::npos) {
            throw InputError("record " + r.id + ": text contains a tab or newline");
        }
        out += "EXIST2021\t" + r.id + "\t" + to_string(r.source) + "\t" +
               to_string(r.language) + "\t" + r.text;
        if (include_labels) {
            if (!r.task1 || !r.task2) {
                throw InputError("record " + r.id + ": missing labels for labeled output");
            }
            out += "\t" + to_string(*r.task1) + "\t" + to_string(*r.task2);
        }
        out += "\n";
    }
    atomic_write_file(path, out);
}

std::vector<TextRecord> filter_language(const std::vector<TextRecord>& records, Language lang) {
    std::vector<TextRecord> out;
    for (const TextRecord& r : records) {
        if (r.language == lang) out.push_back(r);
    }
    return out;
}

std::vector<TextRecord> filter_sexist(const std::vector<TextRecord>& records) {
    std::vector<TextRecord> out;
    for (std::size_t i = 0; i < records.size(); ++i) {
        if (!records[i].task1) {
            throw InputError("record " + records[i].id + " (index " + std::to_string(i) +
                             ") has no task1 label");
        }
        if (*records[i].task1 == Task1Label::sexist) out.push_back(records[i]);
    }
    return out;
}

std::string record_label(const TextRecord& r, Task task) {
    if (task == Task::task1) {
        if (!r.task1) throw InputError("record " + r.id + " has no task1 label");
        return to_string(*r.task1);
    }
    if (!r.task2) throw InputError("record " + r.id + " has no task2 label");
    return to_string(*r.task2);
}

std::pair<std::vector<TextRecord>, std::vector<TextRecord>> stratified_split(
    const std::vector<TextRecord>& records, double train_fraction, Task task,
    std::uint64_t seed, std::vector<std::string>* warnings) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw ConfigError("train_fraction must be in (0, 1)");
    }

    // Group indices by class, keyed by canonical label string so iteration
    // order (and therefore the RNG consumption order) is reproducible.
    std::map<std::string, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < records.size(); ++i) {
        by_class[record_label(records[i], task)].push_back(i);
    }

    std::vector<bool> in_train(records.size(), false);
    std::vector<const std::string*> splittable;
    std::size_t splittable_total = 0;
    for (auto& [label, idxs] : by_class) {
        if (idxs.size() < 2) {
            if (warnings) {
                warnings->push_back("class '" + label + "' has " +
                                    std::to_string(idxs.size()) +
                                    " record(s); placed entirely in train");
            }
            for (std::size_t i : idxs) in_train[i] = true;
        } else {
            splittable.push_back(&label);
            splittable_total += idxs.size();
        }
    }

    // Largest-remainder seat allocation. The epsilon guards against values
    // like 0.7 * 10 evaluating to 6.999... before floor.
    auto floor_guarded = [](double x) {
        return static_cast<std::size_t>(std::floor(x + 1e-9));
    };
    std::size_t train_target = floor_guarded(train_fraction * static_cast<double>(splittable_total));
    std::size_t floor_sum = 0;
    std::vector<std::pair<double, const std::string*>> remainders;  // (-remainder, label)
    std::map<std::string, std::size_t> take;
    for (const std::string* label : splittable) {
        double exact = train_fraction * static_cast<double>(by_class[*label].size());
        std::size_t base = floor_guarded(exact);
        take[*label] = base;
        floor_sum += base;
        remainders.emplace_back(-(exact - static_cast<double>(base)), label);
    }
    std::sort(remainders.begin(), remainders.end(),
              [](const auto& a, const auto& b) {
                  if (a.first != b.first) return a.first < b.first;
                  return *a.second < *b.second;
              });
    std::size_t leftover = train_target > floor_sum ? train_target - floor_sum : 0;
    for (std::size_t i = 0; i < remainders.size() && leftover > 0; ++i, --leftover) {
        ++take[*remainders[i].second];
    }

    Rng rng(seed);
    for (const std::string* label : splittable) {
        std::vector<std::size_t> idxs = by_class[*label];
        rng.shuffle(idxs);
        std::size_t k = std::min(take[*label], idxs.size());
        for (std::size_t i = 0; i < k; ++i) in_train[idxs[i]] = true;
    }

    // Both sides keep the input ordering.
    std::vector<TextRecord> train, dev;
    for (std::size_t i = 0; i < records.size(); ++i) {
        (in_train[i] ? train : dev).push_back(records[i]);
    }
    return {std::move(train), std::move(dev)};
}

std::map<std::string, std::size_t> class_counts(const std::vector<TextRecord>& records,
                                                Task task) {
    std::map<std::string, std::size_t> counts;
    const auto& labels = task == Task::task1 ? task1_label_set() : task2_label_set();
    for (const std::string& l : labels) counts[l] = 0;
    for (const TextRecord& r : records) ++counts[record_label(r, task)];
    return counts;
}

}  // namespace verdict
