#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "abflux/common.hpp"
#include "abflux/config.hpp"
#include "abflux/sweep.hpp"

using namespace abf;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::vector<std::string> row;
  std::string field;
  bool quoted = false;
  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (quoted) {
      if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
        field += '"';
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        field += c;
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      row.push_back(field);
      field.clear();
    } else if (c == '\n') {
      row.push_back(field);
      field.clear();
      rows.push_back(row);
      row.clear();
    } else {
      field += c;
    }
  }
  return rows;
}

SweepConfig config(const std::string& text) {
  return SweepConfig::from_map(ConfigMap::parse(text));
}

}  // namespace

TEST_SUITE("sweep") {

TEST_CASE("twelve significant digits") {
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(1e-20) == "1e-20");
  CHECK(format_double(2.0) == "2");
  CHECK(format_double(NAN) == "nan");
  CHECK(format_cell(Cell{}) == "");
  CHECK(format_cell(Cell{true}) == "true");
  CHECK(format_cell(Cell{42LL}) == "42");
}

TEST_CASE("empty row set gives a header-only CSV") {
  Table t;
  t.columns = {"x", "y"};
  CHECK(to_csv(t) == "x,y\n");
  CHECK(to_json(t) == "[]\n");
}

TEST_CASE("CSV quoting") {
  Table t;
  t.columns = {"a", "b"};
  t.rows = {{std::string("x,y"), std::string("say \"hi\"")}};
  const auto rows = parse_csv(to_csv(t));
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][0] == "x,y");
  CHECK(rows[1][1] == "say \"hi\"");
}

TEST_CASE("CSV and JSON carry the same fields") {
  const SweepResult r = run_sweep(config("subcommand = constants\na = 0, 0.25, 0.5\np = 4, 1.5\n"));
  const auto csv = parse_csv(to_csv(r.table));
  const auto js = nlohmann::json::parse(to_json(r.table));
  REQUIRE(csv.size() == js.size() + 1);
  for (std::size_t i = 0; i < js.size(); ++i) {
    for (std::size_t j = 0; j < csv[0].size(); ++j) {
      const auto& v = js[i][csv[0][j]];
      const std::string& text = csv[i + 1][j];
      if (v.is_null()) {
        CHECK((text.empty() || text == "nan"));
      } else if (v.is_number()) {
        CHECK(v.get<double>() == std::stod(text));
      } else if (v.is_boolean()) {
        CHECK(text == (v.get<bool>() ? "true" : "false"));
      } else {
        CHECK(v.get<std::string>() == text);
      }
    }
  }
}

TEST_CASE("constants sweep over three fluxes") {
  const SweepResult r = run_sweep(config("a = 0, 0.25, 0.5\np = 4\n"));
  REQUIRE(r.table.rows.size() == 3);
  const auto& cols = r.table.columns;
  const auto col = [&](const std::string& name) {
    return std::find(cols.begin(), cols.end(), name) - cols.begin();
  };
  const auto& row = r.table.rows[1];
  CHECK(std::get<double>(row[col("ring_threshold")]) == doctest::Approx((1 - 0.0625 * 6) / 2));
  CHECK(std::get<double>(row[col("sphere_ground")]) == doctest::Approx(0.3125));
  CHECK(std::get<double>(row[col("lambda_star")]) <= std::get<double>(row[col("lambda_bullet")]));
  CHECK(std::get<std::string>(row[col("status")]) == "ok");
  CHECK(r.error_rows == 0);
}

TEST_CASE("ring-opt sweep across the subquadratic threshold") {
  const SweepResult r =
      run_sweep(config("subcommand = ring-opt\na = 0.3\np = 1.5\nmu = 1.0, 1.28, 1.5\nresolution = 64\n"));
  REQUIRE(r.table.rows.size() == 3);
  const auto value = [&](int i) { return std::get<double>(r.table.rows[i][4]); };
  const auto sym = [&](int i) { return std::get<bool>(r.table.rows[i][5]); };
  CHECK(value(0) == doctest::Approx(1.09).epsilon(1e-8));
  CHECK(sym(0));
  CHECK(value(1) == doctest::Approx(1.37).epsilon(1e-4));
  CHECK(value(2) < 1.59 - 1e-4);
  CHECK_FALSE(sym(2));
}

TEST_CASE("failed grid points become error rows and the sweep continues") {
  const SweepResult r = run_sweep(config("a = 0.1\np = 2, 4\n"));
  REQUIRE(r.table.rows.size() == 2);
  CHECK(std::get<std::string>(r.table.rows[0].back()) == "error");
  CHECK(std::get<std::string>(r.table.rows[1].back()) == "ok");
  CHECK(r.error_rows == 1);
  CHECK(r.hard_failure());
  REQUIRE(r.table.diagnostics.size() == 1);
  CHECK(r.table.diagnostics[0].rfind("row 0: ", 0) == 0);
}

TEST_CASE("output does not depend on the worker count") {
  const std::string base = "subcommand = sweep\ntask = ring-opt\na = 0, 0.2\np = 1.5, 4\nparam = 0.3\nresolution = 32\n";
  const auto one = to_csv(run_sweep(config(base + "workers = 1\n")).table);
  const auto four = to_csv(run_sweep(config(base + "workers = 4\n")).table);
  CHECK(one == four);
}

TEST_CASE("config parsing and round trip") {
  const ConfigMap m = ConfigMap::parse("# header\n a = 0, 0.1 # trailing\n\np=4\nseed = 9\n");
  CHECK(m.get("a") == "0, 0.1");
  CHECK(m.get("p") == "4");
  const ConfigMap again = ConfigMap::parse(m.serialize());
  CHECK(again == m);
  CHECK(again.serialize() == m.serialize());
  CHECK_THROWS_AS(ConfigMap::parse("novalue\n"), Error);
  CHECK_THROWS_AS(config("bogus = 1\n"), Error);
  CHECK_THROWS_AS(config("a =\n"), Error);
  CHECK_THROWS_AS(config("format = xml\n"), Error);
}

TEST_CASE("later values and merged maps override") {
  ConfigMap m = ConfigMap::parse("a = 0.1\na = 0.2\n");
  CHECK(m.get("a") == "0.2");
  m.merge(ConfigMap::parse("a = 0.3\n"));
  CHECK(m.get("a") == "0.3");
}

TEST_CASE("list syntax") {
  const auto v = parse_double_list("0:0.5:0.1");
  REQUIRE(v.size() == 6);
  CHECK(v[5] == doctest::Approx(0.5));
  CHECK(parse_double_list("1, 2,3").size() == 3);
  CHECK_THROWS_AS(parse_double_list("1:2"), Error);
  CHECK_THROWS_AS(parse_double_list("x"), Error);
}

TEST_CASE("write_table reports the path on failure") {
  Table t;
  t.columns = {"x"};
  try {
    write_table(t, OutputFormat::Csv, "/nonexistent-dir/table.csv");
    FAIL("expected an Io error");
  } catch (const Error& e) {
    CHECK(e.code() == Status::Io);
    CHECK(std::string(e.what()).find("/nonexistent-dir/table.csv") != std::string::npos);
  }
  const std::string path = "sweep_test_table.csv";
  t.rows = {{1.5}};
  write_table(t, OutputFormat::Csv, path);
  std::ifstream f(path, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  CHECK(ss.str() == "x\n1.5\n");
  std::remove(path.c_str());
}

TEST_CASE("fixed headers") {
  CHECK(sweep_columns("certify") ==
        std::vector<std::string>{"id", "a", "p", "q", "seed", "lhs", "rhs", "margin",
                                 "quad_error", "verdict", "constant_source"});
  CHECK(sweep_columns("flow") == std::vector<std::string>{"t", "functional", "lp_norm", "drift"});
  CHECK_THROWS_AS(sweep_columns("sweep"), Error);
}

}  // TEST_SUITE
