#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qreading/sweep.hpp"

namespace qreading::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitNumerical = 3;

/// Runs the qreading command line. `args` excludes the program name.
/// Results go to `out` (or --out), diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

void write_json(std::ostream& out, const sweep::Report& report);

/// Parses "N" or "NxM".
std::vector<int> parse_grid(const std::string& text);

/// --threads fallback: QREADING_THREADS if set, else hardware concurrency.
int default_threads();

}  // namespace qreading::cli
