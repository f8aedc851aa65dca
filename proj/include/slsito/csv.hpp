#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace slsito::csv {

/// Shortest round-trippable text for a double ("%.17g"); identical across runs.
std::string number(double v);

void write_header(std::ostream& os, std::initializer_list<std::string_view> names);
void write_header(std::ostream& os, const std::vector<std::string>& names);
void write_row(std::ostream& os, const std::vector<std::string>& fields);

}  // namespace slsito::csv
