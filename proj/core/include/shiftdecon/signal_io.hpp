#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>

#include "shiftdecon/signal.hpp"

namespace shiftdecon {

/// Shortest decimal representation that parses back to the same double.
std::string format_real(double v);

/// Parses a decimal floating-point token; throws Error(Format) on junk.
double parse_real(std::string_view token);

// Signal CSV: a `# offset=<int>` header line followed by one value per line.
void write_signal(std::ostream& out, const Signal1D& s);
Signal1D read_signal(std::istream& in);

void write_signal_file(const std::filesystem::path& path, const Signal1D& s);
Signal1D read_signal_file(const std::filesystem::path& path);

}  // namespace shiftdecon
