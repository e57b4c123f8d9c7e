#pragma once

#include <optional>
#include <string>

#include "gconn/serialization.hpp"

namespace gconn {

/// Command-line values that take precedence over scenario fields.
struct RunOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<std::uint64_t> samples;
    std::optional<unsigned> workers;
    std::optional<std::string> out_path;
};

struct RunOutcome {
    int exit_code; // 0 pass, 1 failed check
    Json report;
    std::optional<std::string> out_path; // file destination, when one was given
};

/// Dispatches on the scenario's "command" field. Throws ParseError (and other
/// gconn errors) for malformed input; those map to exit code 2 at the CLI.
RunOutcome run_scenario(const Json& scenario, const RunOverrides& overrides = {});

RunOutcome run_scenario_file(const std::string& path, const RunOverrides& overrides = {});

/// Writes via a temp file and rename so readers never observe partial reports.
void write_report_atomically(const Json& report, const std::string& path);

} // namespace gconn
