#include "slsito/csv.hpp"

#include <cmath>
#include <cstdio>

namespace slsito::csv {

std::string number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_header(std::ostream& os, std::initializer_list<std::string_view> names) {
  bool first = true;
  for (auto n : names) {
    if (!first) os << ',';
    os << n;
    first = false;
  }
  os << '\n';
}

void write_header(std::ostream& os, const std::vector<std::string>& names) { write_row(os, names); }

void write_row(std::ostream& os, const std::vector<std::string>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) os << ',';
    os << fields[i];
  }
  os << '\n';
}

}  // namespace slsito::csv
