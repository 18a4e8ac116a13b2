#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "msi/config.hpp"

namespace msi {

inline constexpr const char* kToolVersion = "1.0.0";

const std::vector<std::string>& commands();

/// Run one command and write its CSV and JSON summary into `out_dir`.
/// Returns 0 on success, 2 when verification fails and 1 on configuration or
/// domain errors, which are reported on `err`.
int run(const std::string& command, const ModelConfig& config,
        const std::filesystem::path& out_dir, std::ostream& err);

/// Write through a temporary file in the same directory and rename.
void write_atomic(const std::filesystem::path& path, const std::string& content);

}  // namespace msi
