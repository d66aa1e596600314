#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace herbrand {

// Error raised by the text frontends (theory files, lambda-c programs,
// valuation files). Carries a 1-based source position.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string& message)
      : std::runtime_error("line " + std::to_string(line) + ", column " +
                           std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}

  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// Counting enumerations can outgrow 64 bits on rich signatures; every
// count above this cap behaves like "effectively infinite". Ranks that
// are actually queried stay far below it.
inline constexpr std::uint64_t kCountCap = std::uint64_t(1) << 62;

inline std::uint64_t sat_add(std::uint64_t a, std::uint64_t b) {
  if (a >= kCountCap || b >= kCountCap || a + b >= kCountCap) return kCountCap;
  return a + b;
}

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  if (a == 0 || b == 0) return 0;
  if (a >= kCountCap || b >= kCountCap || a > kCountCap / b) return kCountCap;
  return a * b;
}

}  // namespace herbrand
