#include "rdpp/csv.hpp"

#include <charconv>
#include <cmath>
#include <ostream>
#include <stdexcept>

namespace rdpp::csv {

std::string num(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc()) throw std::runtime_error("csv: number formatting failed");
  return std::string(buf, end);
}

std::string num(std::optional<double> x) { return x ? num(*x) : std::string(); }

Writer::Writer(std::ostream& os, std::initializer_list<std::string_view> header)
    : os_(os), columns_(header.size()) {
  bool first = true;
  for (auto h : header) {
    if (!first) os_ << ',';
    os_ << h;
    first = false;
  }
  os_ << '\n';
}

Writer& Writer::cell(std::string_view s) {
  if (filled_ == columns_) throw std::logic_error("csv: too many cells in row");
  if (filled_ > 0) os_ << ',';
  os_ << s;
  ++filled_;
  return *this;
}

void Writer::end_row() {
  if (filled_ != columns_) throw std::logic_error("csv: row has too few cells");
  os_ << '\n';
  filled_ = 0;
}

}  // namespace rdpp::csv
