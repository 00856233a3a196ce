#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rdpp::csv {

/// Shortest round-trip decimal form; identical bytes for identical doubles.
std::string num(double x);
std::string num(std::optional<double> x);  // empty cell when absent

class Writer {
 public:
  Writer(std::ostream& os, std::initializer_list<std::string_view> header);
  Writer& cell(std::string_view s);
  Writer& cell(double x) { return cell(num(x)); }
  Writer& cell(std::optional<double> x) { return cell(num(x)); }
  Writer& cell(long long x) { return cell(std::to_string(x)); }
  Writer& cell(int x) { return cell(std::to_string(x)); }
  Writer& cell(unsigned long long x) { return cell(std::to_string(x)); }
  Writer& cell(unsigned long x) { return cell(std::to_string(x)); }
  Writer& cell(bool b) { return cell(std::string_view(b ? "1" : "0")); }
  void end_row();

 private:
  std::ostream& os_;
  std::size_t columns_;
  std::size_t filled_ = 0;
};

}  // namespace rdpp::csv
