#include "verdict/runconfig.hpp"

#include <sstream>

#include "verdict/errors.hpp"
#include "verdict/io.hpp"

namespace verdict {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t");
    if (a == std::string::npos) return "";
    std::size_t b = s.find_last_not_of(" \t");
    return s.substr(a, b - a + 1);
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        std::int64_t v = std::stoll(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not an integer: '" + value + "'");
    }
}

double parse_double(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw ConfigError("config key '" + key + "': not a number: '" + value + "'");
    }
}

std::vector<std::int64_t> parse_int_list(const std::string& key, const std::string& value) {
    std::vector<std::int64_t> out;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (item.empty()) throw ConfigError("config key '" + key + "': empty list item");
        out.push_back(parse_int(key, item));
    }
    if (out.empty()) throw ConfigError("config key '" + key + "': empty list");
    return out;
}

}  // namespace

void apply_config_value(const std::string& key, const std::string& value, RunConfig* cfg) {
    if (key == "train_tsv") cfg->train_tsv = value;
    else if (key == "input_tsv") cfg->input_tsv = value;
    else if (key == "gold_tsv") cfg->gold_tsv = value;
    else if (key == "pred_tsv") cfg->pred_tsv = value;
    else if (key == "model_dir") cfg->model_dir = value;
    else if (key == "out_dir") cfg->out_dir = value;
    else if (key == "seed") cfg->seed = parse_int(key, value);
    else if (key == "seeds") {
        cfg->train.seeds = parse_int_list(key, value);
        cfg->seeds_explicit = true;
    } else if (key == "split_seed") {
        cfg->train.split_seed = static_cast<std::uint64_t>(parse_int(key, value));
        cfg->split_seed_explicit = true;
    } else if (key == "task2_seed") {
        cfg->task2_seed = parse_int(key, value);
        cfg->task2_seed_explicit = true;
    } else if (key == "epochs") cfg->train.epochs = static_cast<int>(parse_int(key, value));
    else if (key == "train_fraction") cfg->train.train_fraction = parse_double(key, value);
    else if (key == "batch_size") cfg->train.batch_size = static_cast<int>(parse_int(key, value));
    else if (key == "learning_rate") cfg->train.learning_rate = parse_double(key, value);
    else if (key == "adam_beta1") cfg->train.adam_beta1 = parse_double(key, value);
    else if (key == "adam_beta2") cfg->train.adam_beta2 = parse_double(key, value);
    else if (key == "adam_epsilon") cfg->train.adam_epsilon = parse_double(key, value);
    else if (key == "max_len") cfg->train.max_len = static_cast<int>(parse_int(key, value));
    else if (key == "d_model") cfg->train.d_model = static_cast<int>(parse_int(key, value));
    else if (key == "n_heads") cfg->train.n_heads = static_cast<int>(parse_int(key, value));
    else if (key == "n_layers") cfg->train.n_layers = static_cast<int>(parse_int(key, value));
    else if (key == "d_ff") cfg->train.d_ff = static_cast<int>(parse_int(key, value));
    else if (key == "dropout") cfg->train.dropout_rate = parse_double(key, value);
    else if (key == "threads") cfg->train.threads = static_cast<int>(parse_int(key, value));
    else if (key == "vocab_size") cfg->vocab_size = static_cast<int>(parse_int(key, value));
    else if (key == "min_frequency") cfg->min_frequency = static_cast<int>(parse_int(key, value));
    else if (key == "sim_k") {
        cfg->sim_k.clear();
        for (std::int64_t v : parse_int_list(key, value)) cfg->sim_k.push_back(static_cast<int>(v));
    } else if (key == "sim_p") cfg->sim_p = parse_double(key, value);
    else if (key == "sim_correlation") cfg->sim_correlation = parse_double(key, value);
    else if (key == "sim_trials") cfg->sim_trials = parse_int(key, value);
    else throw ConfigError("unknown config key '" + key + "'");
}

void parse_config_file(const std::string& path, RunConfig* cfg) {
    std::string content = read_file(path);
    std::istringstream in(content);
    std::string line;
    std::size_t row = 0;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        std::size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError(path + ": line " + std::to_string(row) +
                              ": expected 'key = value'");
        }
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty()) {
            throw ConfigError(path + ": line " + std::to_string(row) + ": empty key");
        }
        try {
            apply_config_value(key, value, cfg);
        } catch (const ConfigError& e) {
            throw ConfigError(path + ": line " + std::to_string(row) + ": " + e.what());
        }
    }
}

void RunConfig::finalize() {
    if (!seeds_explicit) {
        train.seeds = {seed, seed + 1, seed + 2};
    }
    if (!split_seed_explicit) {
        train.split_seed = static_cast<std::uint64_t>(seed);
    }
    if (!task2_seed_explicit) {
        task2_seed = train.seeds.empty() ? seed : train.seeds[0];
    }
}

}  // namespace verdict
