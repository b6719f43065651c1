#include "chainlight/io.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "chainlight/params.hpp"

namespace chainlight::io {

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // normalize -0
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.12g", value);
  return buf;
}

namespace {

std::string strip(const std::string& text) {
  std::string out;
  for (const char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

double parse_float(const std::string& text) {
  std::size_t used = 0;
  const double v = std::stod(text, &used);
  if (used != text.size()) {
    throw std::invalid_argument("trailing characters in number '" + text + "'");
  }
  return v;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = strip(text);
  if (s.empty()) throw std::invalid_argument("empty angle expression");
  double sign = 1.0;
  if (s.front() == '-') {
    sign = -1.0;
    s.erase(0, 1);
  } else if (s.front() == '+') {
    s.erase(0, 1);
  }
  for (const std::string fn : {"arcsin(", "asin("}) {
    if (s.rfind(fn, 0) == 0 && s.back() == ')') {
      const double x = parse_float(s.substr(fn.size(), s.size() - fn.size() - 1));
      if (x < -1.0 || x > 1.0) {
        throw std::invalid_argument("arcsin argument out of [-1, 1]");
      }
      return sign * std::asin(x);
    }
  }
  // general form: [factor][*]pi[/divisor], e.g. "pi", "pi/6", "0.3pi",
  // "51pi/101"; bare numbers are fractions of pi
  if (const std::size_t at = s.find("pi"); at != std::string::npos) {
    double factor = 1.0;
    std::string head = s.substr(0, at);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (!head.empty()) factor = parse_float(head);
    const std::string tail = s.substr(at + 2);
    double divisor = 1.0;
    if (!tail.empty()) {
      if (tail.front() != '/') {
        throw std::invalid_argument("malformed angle expression '" + s + "'");
      }
      divisor = parse_float(tail.substr(1));
    }
    return sign * factor * pi / divisor;
  }
  return sign * pi * parse_float(s);  // bare numbers are fractions of pi
}

double parse_wavenumber(const std::string& text) {
  std::string s = strip(text);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "/a") == 0) {
    s.erase(s.size() - 2);
  } else if (!s.empty() && s.back() == 'a' && s != "a") {
    s.pop_back();
  }
  return parse_angle(s);
}

void Table::add_meta(const std::string& key, const std::string& value) {
  meta.emplace_back(key, value);
}

void Table::write_csv(std::ostream& os) const {
  for (const auto& [key, value] : meta) {
    os << "# " << key << ": " << value << "\n";
  }
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << columns[i] << (i + 1 < columns.size() ? "," : "");
  }
  os << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (const double* d = std::get_if<double>(&row[i])) {
        os << format_number(*d);
      } else {
        os << std::get<std::string>(row[i]);
      }
      os << (i + 1 < row.size() ? "," : "");
    }
    os << "\n";
  }
}

std::string json_escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out.push_back(c);
    }
  }
  return out;
}

void Table::write_json(std::ostream& os) const {
  os << "{\n  \"meta\": {";
  for (std::size_t i = 0; i < meta.size(); ++i) {
    os << (i ? ",\n    " : "\n    ") << '"' << json_escape(meta[i].first)
       << "\": \"" << json_escape(meta[i].second) << '"';
  }
  os << "\n  },\n  \"columns\": [";
  for (std::size_t i = 0; i < columns.size(); ++i) {
    os << (i ? ", " : "") << '"' << json_escape(columns[i]) << '"';
  }
  os << "],\n  \"rows\": [";
  for (std::size_t r = 0; r < rows.size(); ++r) {
    os << (r ? ",\n    " : "\n    ") << '[';
    for (std::size_t i = 0; i < rows[r].size(); ++i) {
      os << (i ? ", " : "");
      if (const double* d = std::get_if<double>(&rows[r][i])) {
        os << format_number(*d);
      } else {
        os << '"' << json_escape(std::get<std::string>(rows[r][i])) << '"';
      }
    }
    os << ']';
  }
  os << "\n  ]\n}\n";
}

}  // namespace chainlight::io
