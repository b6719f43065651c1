#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

namespace chainlight::io {

// Fixed 12-significant-digit formatting; every number the CLI emits goes
// through here so identical runs produce byte-identical files.
std::string format_number(double value);

// Angle expressions: a bare number is a fraction of pi ("0.5" = pi/2);
// "pi", "pi/4", "0.3pi", "0.3*pi" and "arcsin(0.6)" (or asin) are accepted,
// with an optional leading minus. Returns radians.
double parse_angle(const std::string& text);

// Wavenumber-times-a expressions: same grammar with an optional trailing
// "a" or "/a" ("pi/2a" = pi/2). Returns k*a.
double parse_wavenumber(const std::string& text);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::variant<double, std::string>>> rows;
  std::vector<std::pair<std::string, std::string>> meta;

  void add_meta(const std::string& key, const std::string& value);
  void write_csv(std::ostream& os) const;
  void write_json(std::ostream& os) const;
};

std::string json_escape(const std::string& text);

}  // namespace chainlight::io
