#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "chainlight/io.hpp"
#include "chainlight/params.hpp"

using namespace chainlight;

TEST_CASE("numbers are printed with 12 significant digits") {
  CHECK(io::format_number(1.0 / 3.0) == "0.333333333333");
  CHECK(io::format_number(-0.0) == "0");
  CHECK(io::format_number(2.0) == "2");
  CHECK(io::format_number(1.23456789012345e-7) == "1.23456789012e-07");
}

TEST_CASE("angle expressions") {
  CHECK(io::parse_angle("0.5") == doctest::Approx(pi / 2));
  CHECK(io::parse_angle("pi/6") == doctest::Approx(pi / 6));
  CHECK(io::parse_angle("-0.3pi") == doctest::Approx(-0.3 * pi));
  CHECK(io::parse_angle("0.3*pi") == doctest::Approx(0.3 * pi));
  CHECK(io::parse_angle("arcsin(0.5)") == doctest::Approx(std::asin(0.5)));
  CHECK(io::parse_angle("asin(-1)") == doctest::Approx(-pi / 2));
  CHECK(io::parse_angle("pi") == doctest::Approx(pi));
  CHECK_THROWS_AS(io::parse_angle("arcsin(2)"), std::invalid_argument);
  CHECK_THROWS_AS(io::parse_angle("bogus"), std::exception);
}

TEST_CASE("wavenumber expressions accept the /a suffix") {
  CHECK(io::parse_wavenumber("pi/2a") == doctest::Approx(pi / 2));
  CHECK(io::parse_wavenumber("pi/2") == doctest::Approx(pi / 2));
  CHECK(io::parse_wavenumber("0") == 0.0);
  CHECK(io::parse_wavenumber("-0.25pi/a") == doctest::Approx(-0.25 * pi));
}

TEST_CASE("CSV and JSON emission are stable") {
  io::Table table;
  table.columns = {"x", "name"};
  table.add_meta("tool", "demo");
  table.rows.push_back({1.5, std::string("a,b")});
  std::ostringstream csv;
  table.write_csv(csv);
  CHECK(csv.str() == "# tool: demo\nx,name\n1.5,a,b\n");
  std::ostringstream json;
  table.write_json(json);
  CHECK(json.str().find("\"columns\": [\"x\", \"name\"]") != std::string::npos);
  CHECK(json.str().find("[1.5, \"a,b\"]") != std::string::npos);
}
