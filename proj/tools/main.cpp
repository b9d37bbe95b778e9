#include <iostream>
#include <string>

#include "verdict/commands.hpp"
#include "verdict/errors.hpp"

namespace {

void print_usage(std::ostream& out) {
    out << "Usage: verdict <command> [options]\n"
        << "\n"
        << "Commands:\n"
        << "  train      build vocabularies, train per-language task1 ensembles and\n"
        << "             task2 models, write checkpoints and a manifest\n"
        << "  predict    run the two-stage pipeline over a TSV of records\n"
        << "  evaluate   score a prediction file against labeled gold data\n"
        << "  simulate   estimate majority-vote accuracy for various ensemble sizes\n"
        << "\n"
        << "Options:\n"
        << "  --config <path>   key = value config file (see README)\n"
        << "  --seed <int>      master seed; overrides the config file\n"
        << "  --out <dir>       output directory; overrides the config file\n"
        << "  -h, --help        this message\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace verdict;

    if (argc < 2) {
        print_usage(std::cerr);
        return 1;
    }
    std::string command = argv[1];
    if (command == "-h" || command == "--help") {
        print_usage(std::cout);
        return 0;
    }

    try {
        RunConfig cfg;
        std::string config_path;
        std::string seed_override;
        std::string out_override;
        for (int i = 2; i < argc; ++i) {
            std::string arg = argv[i];
            if (arg == "--config" && i + 1 < argc) {
                config_path = argv[++i];
            } else if (arg == "--seed" && i + 1 < argc) {
                seed_override = argv[++i];
            } else if (arg == "--out" && i + 1 < argc) {
                out_override = argv[++i];
            } else if (arg == "-h" || arg == "--help") {
                print_usage(std::cout);
                return 0;
            } else {
                throw InputError("unknown option '" + arg + "'");
            }
        }
        if (!config_path.empty()) parse_config_file(config_path, &cfg);
        if (!seed_override.empty()) apply_config_value("seed", seed_override, &cfg);
        if (!out_override.empty()) apply_config_value("out_dir", out_override, &cfg);
        cfg.finalize();

        if (command == "train") {
            run_train(cfg, std::cout);
        } else if (command == "predict") {
            run_predict(cfg, std::cout);
        } else if (command == "evaluate") {
            run_evaluate(cfg, std::cout);
        } else if (command == "simulate") {
            run_simulate(cfg, std::cout);
        } else {
            throw InputError("unknown command '" + command + "'");
        }
        return 0;
    } catch (const InputError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
}
