#include "shiftdecon/signal_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

#include "shiftdecon/error.hpp"

namespace shiftdecon {

namespace {

constexpr std::string_view kOffsetPrefix = "# offset=";

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string format_real(double v) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error(ErrorKind::Format, "cannot format value");
  return std::string(buf.data(), ptr);
}

double parse_real(std::string_view token) {
  token = trim(token);
  if (!token.empty() && token.front() == '+') token.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (token.empty() || ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw Error(ErrorKind::Format, "not a finite decimal number: '" + std::string(token) + "'");
  }
  return v;
}

void write_signal(std::ostream& out, const Signal1D& s) {
  out << kOffsetPrefix << s.offset() << '\n';
  for (double v : s.values()) out << format_real(v) << '\n';
}

Signal1D read_signal(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorKind::Format, "missing '# offset=' header");
  std::string_view header = trim(line);
  if (header.substr(0, kOffsetPrefix.size()) != kOffsetPrefix) {
    throw Error(ErrorKind::Format, "malformed header: expected '# offset=<int>'");
  }
  header.remove_prefix(kOffsetPrefix.size());
  Index offset = 0;
  const auto [ptr, ec] = std::from_chars(header.data(), header.data() + header.size(), offset);
  if (header.empty() || ec != std::errc{} || ptr != header.data() + header.size()) {
    throw Error(ErrorKind::Format, "malformed header: bad offset '" + std::string(header) + "'");
  }

  std::vector<double> values;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view tok = trim(line);
    if (tok.empty()) continue;
    try {
      values.push_back(parse_real(tok));
    } catch (const Error& e) {
      throw Error(ErrorKind::Format, "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  if (values.empty()) throw Error(ErrorKind::Format, "signal file holds no values");
  return Signal1D(offset, std::move(values));
}

void write_signal_file(const std::filesystem::path& path, const Signal1D& s) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "' for writing");
  write_signal(out, s);
  if (!out) throw Error(ErrorKind::Io, "write failed for '" + path.string() + "'");
}

Signal1D read_signal_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open '" + path.string() + "'");
  return read_signal(in);
}

}  // namespace shiftdecon
