#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace pzx {

inline constexpr int kExitOk = 0;
inline constexpr int kExitParse = 2;
inline constexpr int kExitNumeric = 3;

/// Command-line front end. `args` excludes the program name.
/// Subcommands: parse, bode, nyquist, step, margins, pzmap, export, serve.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace pzx
