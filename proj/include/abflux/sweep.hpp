#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "abflux/config.hpp"

namespace abf {

// One table cell. Empty prints as "" in CSV and null in JSON.
using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

// "%.12g"; nan and inf print as "nan", "inf", "-inf".
std::string format_double(double v);
std::string format_cell(const Cell& c);

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Error text per failed row, in row order: "row <i>: <message>".
  std::vector<std::string> diagnostics;
};

// Header row, LF line endings. Fields containing ',', '"' or a newline are
// quoted.
std::string to_csv(const Table& t);
// Array of objects keyed by column name. Doubles carry the same 12 digits as
// the CSV text; non-finite doubles become null.
std::string to_json(const Table& t);

// path "-" writes to stdout. Io errors name the path.
void write_table(const Table& t, OutputFormat f, const std::string& path);

// Fixed column tuple of each subcommand ("sweep" uses the task's columns).
std::vector<std::string> sweep_columns(const std::string& subcommand);
std::vector<std::string> subcommand_names();

struct SweepResult {
  Table table;
  int error_rows = 0;
  int violated = 0;

  bool hard_failure() const { return error_rows > 0 || violated > 0; }
};

// Evaluates the grid in lexicographic order (a, p, then lambda/mu/param).
// Failures become status=error rows, except configuration errors, which
// throw InvalidArgument.
SweepResult run_sweep(const SweepConfig& cfg);

// Runs task(i) for i in [0, n) on up to `workers` threads. Results land in
// slot i, so the output order never depends on scheduling.
template <class T>
std::vector<T> ordered_map(std::size_t n, int workers,
                           const std::function<T(std::size_t)>& task);

}  // namespace abf

#include "abflux/sweep_impl.hpp"
