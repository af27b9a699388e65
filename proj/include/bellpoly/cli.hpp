#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "bellpoly/combinatorics.hpp"

namespace bellpoly::cli {

inline constexpr std::string_view kSchemaLine = "# bellpoly-schema v1";

enum class Format { Csv, Json };
Format parse_format(std::string_view name);  // "csv" | "json"

using Cell = std::variant<std::monostate, long long, double, bool, std::string>;

struct Table {
  std::string command;
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
  // Printed as trailing "# key: value" lines in CSV, top-level fields in JSON.
  nlohmann::ordered_json summary = nlohmann::ordered_json::object();
};

// 12 significant digits, locale independent.
std::string format_double(double value);

void write_csv(std::ostream& os, const Table& table);
void write_json(std::ostream& os, const Table& table);
void write_table(std::ostream& os, const Table& table, Format format);

struct CommandOutput {
  Table table;
  bool pass = true;
};

CommandOutput cmd_table1(int k_max, bool with_fit);
CommandOutput cmd_table2(int K_max, BoundKind kind);
CommandOutput cmd_fig1(int n_min, int n_max, const std::vector<int>& k_set);
CommandOutput cmd_verify_n2(double phi1, double phi2, double tolerance);

struct OracleSuiteOptions {
  int n_max = 6;
  bool force = false;
  double tolerance = 1e-9;
  bool inject_fault = false;  // perturbs one closed-form coefficient
};
CommandOutput cmd_oracle_suite(const OracleSuiteOptions& options);

// Full command-line entry point. Exit codes: 0 all checks passed, 1 a golden
// or oracle comparison failed, 2 usage, I/O or runtime error.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace bellpoly::cli
