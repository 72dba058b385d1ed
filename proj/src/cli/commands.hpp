#pragma once

#include <ostream>
#include <string>

namespace ptkit::cli {

enum class Format { csv, json };

enum ExitCode : int { kOk = 0, kConfigError = 2, kNumericError = 3 };

/// Runs one command: reads the JSON config, writes the result table to
/// `out_path` and a `<out_path>.meta.json` sidecar. Diagnostics go to `err`.
int run(const std::string& command, const std::string& config_path, const std::string& out_path, Format format,
        std::ostream& err);

/// Names accepted by run().
const char* const* command_names();

}  // namespace ptkit::cli
