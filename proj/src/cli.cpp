#include "bellpoly/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string>

#include "bellpoly/classical_bounds.hpp"
#include "bellpoly/dense_oracle.hpp"
#include "bellpoly/errors.hpp"
#include "bellpoly/golden.hpp"
#include "bellpoly/hyper_optimizer.hpp"
#include "bellpoly/mabk_analysis.hpp"
#include "bellpoly/parallel.hpp"

namespace bellpoly::cli {

namespace {

constexpr auto kEmpty = std::monostate{};

std::string csv_cell(const Cell& c) {
  struct Visitor {
    std::string operator()(std::monostate) const { return ""; }
    std::string operator()(long long v) const { return std::to_string(v); }
    std::string operator()(double v) const { return format_double(v); }
    std::string operator()(bool v) const { return v ? "true" : "false"; }
    std::string operator()(const std::string& v) const {
      if (v.find_first_of(",\"\n") == std::string::npos) return v;
      std::string quoted = "\"";
      for (char ch : v) {
        if (ch == '"') quoted += '"';
        quoted += ch;
      }
      return quoted + "\"";
    }
  };
  return std::visit(Visitor{}, c);
}

// Doubles go through the 12-digit text form so JSON and CSV agree.
double rounded(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(format_double(v));
}

nlohmann::ordered_json json_cell(const Cell& c) {
  struct Visitor {
    nlohmann::ordered_json operator()(std::monostate) const { return nullptr; }
    nlohmann::ordered_json operator()(long long v) const { return v; }
    nlohmann::ordered_json operator()(double v) const {
      if (!std::isfinite(v)) return nullptr;
      return rounded(v);
    }
    nlohmann::ordered_json operator()(bool v) const { return v; }
    nlohmann::ordered_json operator()(const std::string& v) const { return v; }
  };
  return std::visit(Visitor{}, c);
}

Cell integer(long long v) { return Cell{v}; }

std::vector<double> rounded_all(const std::vector<double>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(rounded(x));
  return out;
}

// -------- oracle suite helpers --------

SymmetricState random_state(int N, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Complex> amps(static_cast<std::size_t>(N + 1));
  for (auto& a : amps) a = {g(rng), g(rng)};
  return SymmetricState(N, std::move(amps));
}

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace

Format parse_format(std::string_view name) {
  if (name == "csv") return Format::Csv;
  if (name == "json") return Format::Json;
  throw DomainError("unknown format '" + std::string(name) + "' (expected csv|json)");
}

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_csv(std::ostream& os, const Table& t) {
  os << kSchemaLine << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
  for (const auto& [key, value] : t.summary.items()) {
    os << "# " << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump())
       << '\n';
  }
}

void write_json(std::ostream& os, const Table& t) {
  nlohmann::ordered_json j;
  j["schema"] = std::string(kSchemaLine.substr(2));
  j["command"] = t.command;
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json r;
    for (std::size_t i = 0; i < row.size(); ++i) r[t.columns[i]] = json_cell(row[i]);
    rows.push_back(r);
  }
  j["rows"] = rows;
  for (const auto& [key, value] : t.summary.items()) j[key] = value;
  os << j.dump(2) << '\n';
}

void write_table(std::ostream& os, const Table& t, Format f) {
  if (f == Format::Csv) {
    write_csv(os, t);
  } else {
    write_json(os, t);
  }
}

CommandOutput cmd_table1(int k_max, bool with_fit) {
  if (k_max < 1) throw DomainError("table1: --kmax must be >= 1");
  CommandOutput out;
  out.table.command = "table1";
  out.table.columns = {"k", "N_k", "golden", "match"};
  if (with_fit) {
    out.table.columns.insert(out.table.columns.end(), {"fit", "fit_rounded", "fit_mismatch"});
  }
  FitReport fit;
  if (with_fit) fit = fit_check(k_max);
  std::vector<int> values(static_cast<std::size_t>(k_max));
  parallel_for(values.size(), [&](std::size_t i) {
    values[i] = minimal_Nk(static_cast<int>(i) + 1, BoundKind::MabkRotated);
  });
  for (int k = 1; k <= k_max; ++k) {
    const int nk = values[static_cast<std::size_t>(k - 1)];
    std::vector<Cell> row = {integer(k), integer(nk)};
    if (k <= golden::kTable1MaxK) {
      const bool match = nk == golden::table1(k);
      out.pass = out.pass && match;
      row.push_back(integer(golden::table1(k)));
      row.push_back(match);
    } else {
      row.push_back(kEmpty);
      row.push_back(kEmpty);
    }
    if (with_fit) {
      const auto& f = fit.rows[static_cast<std::size_t>(k - 1)];
      row.push_back(f.fit);
      row.push_back(integer(f.rounded));
      row.push_back(f.mismatch);
    }
    out.table.rows.push_back(std::move(row));
  }
  out.table.summary["golden_pass"] = out.pass;
  if (with_fit) out.table.summary["fit_mismatches"] = fit.mismatches;
  return out;
}

CommandOutput cmd_table2(int K_max, BoundKind kind) {
  if (K_max < golden::kTable2MinK || K_max > golden::kTable2MaxK) {
    throw DomainError("table2: --Kmax must lie in [2, 12]");
  }
  struct RowData {
    int N_K = 0;
    double t_at = 0.0;
    double t_below = 0.0;
    double upper_below = 0.0;
    double pure_at = 0.0;
    std::string error;
  };
  const std::size_t count = static_cast<std::size_t>(K_max - 1);
  std::vector<RowData> data(count);
  parallel_for(count, [&](std::size_t i) {
    const int K = static_cast<int>(i) + golden::kTable2MinK;
    RowData& d = data[i];
    try {
      const MinimalNKResult r = minimal_NK_scan(K, kind);
      d.N_K = r.N_K;
      d.t_at = r.scan.back().t_star;
      if (r.scan.size() >= 2) {
        const auto& below = r.scan[r.scan.size() - 2];
        d.t_below = below.t_star;
        d.upper_below = below.certificate.upper_bound;
      } else {
        d.t_below = std::nan("");
        d.upper_below = std::nan("");
      }
      d.pure_at = pure_family_search(r.N_K, K, kind).min_ratio;
    } catch (const std::exception& e) {
      d.error = e.what();
    }
  });

  CommandOutput out;
  out.table.command = "table2";
  out.table.columns = {"K",           "N_K",         "golden",       "match",
                       "t_star",      "margin",      "t_star_below", "upper_below",
                       "pure_t_star", "text_value",  "text_match",   "error"};
  int text_mismatches = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const int K = static_cast<int>(i) + golden::kTable2MinK;
    const RowData& d = data[i];
    const int gold = kind == BoundKind::MabkRotated ? golden::table2(K) : golden::table3(K);
    std::vector<Cell> row = {integer(K)};
    if (!d.error.empty()) {
      out.pass = false;
      row.insert(row.end(), {kEmpty, integer(gold), false, kEmpty, kEmpty, kEmpty, kEmpty,
                             kEmpty, kEmpty, kEmpty, d.error});
      out.table.rows.push_back(std::move(row));
      continue;
    }
    const bool match = d.N_K == gold;
    out.pass = out.pass && match;
    row.insert(row.end(), {integer(d.N_K), integer(gold), match, d.t_at, d.t_at - 1.0, d.t_below,
                           d.upper_below, d.pure_at});
    const auto text = golden::kTable2TextValues.find(K);
    if (kind == BoundKind::MabkRotated && text != golden::kTable2TextValues.end()) {
      const bool tm = text->second == d.N_K;
      if (!tm) ++text_mismatches;
      row.push_back(integer(text->second));
      row.push_back(tm);
    } else {
      row.push_back(kEmpty);
      row.push_back(kEmpty);
    }
    row.push_back(std::string{});
    out.table.rows.push_back(std::move(row));
  }
  out.table.summary["kind"] = std::string(to_string(kind));
  out.table.summary["golden_pass"] = out.pass;
  out.table.summary["text_value_mismatches"] = text_mismatches;
  return out;
}

CommandOutput cmd_fig1(int n_min, int n_max, const std::vector<int>& k_set) {
  if (n_min < 2 || n_max < n_min) throw DomainError("fig1: need 2 <= nmin <= nmax");
  if (n_max > 64) throw DomainError("fig1: nmax must be <= 64");
  if (k_set.empty()) throw DomainError("fig1: empty k set");
  for (int k : k_set) {
    if (k < 1) throw DomainError("fig1: every k must be >= 1");
  }
  CommandOutput out;
  out.table.command = "fig1";
  out.table.columns = {"N", "k", "S_polygamous", "S_GHZ", "advantage", "k1_equal"};
  for (int N = n_min; N <= n_max; ++N) {
    for (int k : k_set) {
      if (2 * k >= N) continue;
      const double s_poly = nonlocality_sum(optimal_polygamous(N, k), k);
      const double s_ghz = ghz_nonlocality_sum(N, k);
      Cell equal = kEmpty;
      if (k == 1) {
        const double expect = std::ldexp(1.0, N - 2);
        const bool eq = std::abs(s_poly - expect) <= 1e-12 * expect && s_ghz == expect;
        out.pass = out.pass && eq;
        equal = eq;
      }
      out.table.rows.push_back({integer(N), integer(k), s_poly, s_ghz, s_poly / s_ghz, equal});
    }
  }
  out.table.summary["k1_exact"] = out.pass;
  return out;
}

CommandOutput cmd_verify_n2(double phi1, double phi2, double tolerance) {
  const dense::N2Verification v = dense::verify_n2(phi1, phi2);
  CommandOutput out;
  out.table.command = "verify-n2";
  out.table.columns = {"subset", "value", "within_tol"};
  bool pass = v.local_bound > 0.0;
  for (std::size_t i = 0; i < v.values.size(); ++i) {
    std::string label;
    for (int p : v.subsets[i]) label += static_cast<char>('A' + p);
    const bool ok = std::abs(v.values[i] - dense::kN2ReferenceValue) <= tolerance;
    pass = pass && ok;
    out.table.rows.push_back({label, v.values[i], ok});
  }
  out.pass = pass;
  out.table.summary["phi"] = rounded_all({v.phi1, v.phi2});
  out.table.summary["values"] = rounded_all(v.values);
  out.table.summary["bound"] = rounded(v.local_bound);
  out.table.summary["reference"] = dense::kN2ReferenceValue;
  out.table.summary["tolerance"] = tolerance;
  out.table.summary["spread"] = rounded(v.spread);
  out.table.summary["pass"] = pass;
  return out;
}

CommandOutput cmd_oracle_suite(const OracleSuiteOptions& opt) {
  if (opt.n_max < 2) throw DomainError("oracle-suite: --nmax must be >= 2");
  if (opt.n_max > 8 && !opt.force) {
    throw ResourceError("oracle-suite: --nmax above 8 needs --force");
  }
  if (opt.n_max > dense::kMaxParties) {
    throw ResourceError("oracle-suite: --nmax above " + std::to_string(dense::kMaxParties) +
                        " is not supported");
  }
  CommandOutput out;
  out.table.command = "oracle-suite";
  out.table.columns = {"check", "N", "k", "max_error", "pass"};
  auto record = [&](const std::string& name, int N, int k, double err) {
    const bool ok = err <= opt.tolerance;
    out.pass = out.pass && ok;
    out.table.rows.push_back({name, integer(N), integer(k), err, ok});
  };

  std::mt19937_64 rng(20251014);
  for (int N = 2; N <= opt.n_max; ++N) {
    for (int k = 0; 2 * k < N; ++k) {
      const int m = N - k;
      std::vector<int> first(static_cast<std::size_t>(m));
      for (int i = 0; i < m; ++i) first[static_cast<std::size_t>(i)] = i;
      const auto op = dense::embed_on_subset(dense::mermin_operator_dense(m), N, first);
      SectorOperator sector = sector_operator(N, k);
      if (opt.inject_fault) sector.matrix(0, N - k) *= 1.001;
      double err = 0.0;
      for (int trial = 0; trial < 5; ++trial) {
        const SymmetricState st = random_state(N, rng);
        err = std::max(err, std::abs(sector.expectation(st) - op.expectation(dense::lift(st))));
      }
      record("closed_form_vs_dense", N, k, err);
      const auto sym = dense::symmetrized_operator_dense(N, k);
      const auto ladder = dense::ladder_sum_operator(N, k);
      record("ladder_identity", N, k, max_abs_diff(sym.matrix, ladder.matrix));
    }
    const auto reference = dense::mermin_operator_dense(N);
    for (auto variant : {dense::MabkVariant::Rotated, dense::MabkVariant::XY}) {
      const auto expr = dense::mabk_bell_expression(N, variant);
      const auto op = dense::expression_operator(expr.expression, expr.settings);
      const std::string tag = variant == dense::MabkVariant::Rotated ? "mabk" : "mermin";
      record("expression_vs_operator_" + tag, N, 0, max_abs_diff(op.matrix, reference.matrix));
      const BoundKind kind =
          variant == dense::MabkVariant::Rotated ? BoundKind::MabkRotated : BoundKind::MerminXY;
      const double enumerated = local_bound_enumerate(expr.expression).bound;
      record("bound_enumeration_" + tag, N, 0, std::abs(enumerated - local_bound(N, kind)));
    }
  }
  out.table.summary["checks"] = out.table.rows.size();
  out.table.summary["pass"] = out.pass;
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Polygamous Bell nonlocality calculator"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string out_path;
  std::optional<double> tol;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "Write output to PATH instead of stdout");
  app.add_option("--tol", tol, "Override the comparison tolerance");

  int kmax = 12;
  bool fit = false;
  auto* table1 = app.add_subcommand("table1", "Minimal N for k-polygamy (rotated MABK)");
  table1->add_option("--kmax", kmax, "Largest k")->check(CLI::Range(1, 100000));
  table1->add_flag("--fit", fit, "Compare with the linear fit");

  int Kmax = 12;
  std::string kind_name = "mabk";
  auto* table2 = app.add_subcommand("table2", "Minimal N for K-hyper-polygamy");
  table2->add_option("--Kmax", Kmax, "Largest K (2..12)")->check(CLI::Range(2, 12));
  table2->add_option("--kind", kind_name, "Local bound")->check(CLI::IsMember({"mabk", "mermin"}));

  int nmin = 3;
  int nmax = 30;
  std::vector<int> kset = {1, 2, 3};
  auto* fig1 = app.add_subcommand("fig1", "Sum of squared violation factors vs GHZ");
  fig1->add_option("--nmin", nmin, "Smallest N");
  fig1->add_option("--nmax", nmax, "Largest N");
  fig1->add_option("--k", kset, "Values of k")->expected(1, -1);

  std::vector<double> angles = {dense::kN2Phi1, dense::kN2Phi2};
  bool as_json = false;
  auto* n2 = app.add_subcommand("verify-n2", "Six-party, four-party-subset violation check");
  n2->add_option("--angles", angles, "phi1 phi2")->expected(2);
  n2->add_flag("--json", as_json, "Same as --format json");

  OracleSuiteOptions suite;
  auto* oracle = app.add_subcommand("oracle-suite", "Dense brute-force cross-checks");
  oracle->add_option("--nmax", suite.n_max, "Largest party count (<= 8)");
  oracle->add_flag("--force", suite.force, "Allow --nmax above 8");
  oracle->add_flag("--inject-fault", suite.inject_fault)->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    Format fmt = parse_format(format);
    CommandOutput result;
    if (*table1) {
      result = cmd_table1(kmax, fit);
    } else if (*table2) {
      result = cmd_table2(Kmax, parse_bound_kind(kind_name));
    } else if (*fig1) {
      result = cmd_fig1(nmin, nmax, kset);
    } else if (*n2) {
      if (as_json) fmt = Format::Json;
      result = cmd_verify_n2(angles[0], angles[1], tol.value_or(dense::kN2Tolerance));
    } else {
      if (tol) suite.tolerance = *tol;
      result = cmd_oracle_suite(suite);
    }

    if (out_path.empty()) {
      write_table(out, result.table, fmt);
    } else {
      std::ofstream file(out_path, std::ios::binary);
      if (!file) throw std::runtime_error("cannot open output file '" + out_path + "'");
      write_table(file, result.table, fmt);
      file.close();
      if (!file) throw std::runtime_error("failed writing output file '" + out_path + "'");
    }
    if (!result.pass) err << "bellpoly: " << result.table.command << ": check FAILED\n";
    return result.pass ? 0 : 1;
  } catch (const std::exception& e) {
    err << "bellpoly: error: " << e.what() << '\n';
    return 2;
  }
}

}  // namespace bellpoly::cli
