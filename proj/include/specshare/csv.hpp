#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace specshare::csv {

/// 12 significant digits, '.' separator, no locale dependence.
std::string number(double x);

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes);
std::string hex64(std::uint64_t x);

/// Comma-separated rows terminated by '\n'. Fields are written verbatim, so
/// callers must not pass commas or newlines inside a field.
class Writer {
 public:
  explicit Writer(std::ostream& out) : out_(out) {}

  void comment(std::string_view text);
  void row(const std::vector<std::string>& fields);

 private:
  std::ostream& out_;
};

}  // namespace specshare::csv
