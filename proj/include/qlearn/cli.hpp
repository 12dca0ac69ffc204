#pragma once

// Command-line front end. Kept in the library so tests can drive it with
// in-memory streams.

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

#include "qlearn/spectrum.hpp"

namespace qlearn::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitVerificationFailed = 1;
inline constexpr int kExitUsage = 2;

/// Largest n accepted by the spectrum command.
inline constexpr int kSpectrumCommandCap = 40;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct NRange {
  int start = 1;
  int end = 1;
  int step = 1;
  std::vector<int> values() const;
};

/// "a", "a:b" or "a:b:step" with 1 <= a <= b and step >= 1.
NRange parse_n_range(const std::string& text);

/// Decimal number or a rational multiple of pi: "pi", "pi/3", "2pi/3",
/// "2*pi/3", "0.25*pi", "-pi/4".
double parse_angle(const std::string& text);

/// Twelve significant digits, shortest form.
std::string format_number(double value);

/// CSV for the perr command, header included.
std::string perr_csv(const std::vector<ErrorReport>& rows);

/// Runs the CLI. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qlearn::cli
