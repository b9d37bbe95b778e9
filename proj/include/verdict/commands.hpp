#pragma once

#include <iosfwd>

#include "verdict/runconfig.hpp"

namespace verdict {

// Command bodies behind the CLI; they throw on failure and the binary maps
// exceptions to exit codes (InputError -> 1, anything else -> 2).
void run_train(const RunConfig& cfg, std::ostream& out);
void run_predict(const RunConfig& cfg, std::ostream& out);
void run_evaluate(const RunConfig& cfg, std::ostream& out);
void run_simulate(const RunConfig& cfg, std::ostream& out);

}  // namespace verdict
