#pragma once

// Command-line verbs, kept out of main() so tests can drive them with
// captured streams. Exit codes: 0 ok, 1 an exact invariant failed, 2 usage.

#include <iosfwd>
#include <string>
#include <vector>

#include "primepairs/asymptotic.hpp"
#include "primepairs/trace.hpp"

namespace primepairs::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvariant = 1;
inline constexpr int kExitUsage = 2;

/// args excludes the program name.
int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Self-contained gnuplot script: data and fitted curve are inlined, x on a
/// log axis.
std::string plot_script(const SumTrace& trace, const FitResult& fit);

/// Reads a trace CSV, fits it and writes the script to `script_path`.
/// Malformed or empty traces throw UsageError.
FitResult emit_plot_script(const std::string& trace_file, FitModel model, const std::string& script_path);

}  // namespace primepairs::cli
