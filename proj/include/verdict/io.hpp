#pragma once

#include <string>

namespace verdict {

// Write-temp-then-rename so a failure never leaves a partial file behind.
void atomic_write_file(const std::string& path, const std::string& content);

std::string read_file(const std::string& path);

}  // namespace verdict
