#include <doctest.h>

#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "bellpoly/cli.hpp"

using namespace bellpoly::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "bellpoly");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out;
  std::ostringstream err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_double(1.0 / 3.0) == "0.333333333333");
  CHECK(format_double(6.0) == "6");
  CHECK(format_double(1344.0 / 49.0) == "27.4285714286");
  CHECK(format_double(1e-20) == "1e-20");
}

TEST_CASE("csv writer") {
  Table t;
  t.command = "x";
  t.columns = {"a", "b"};
  t.rows.push_back({Cell{1LL}, Cell{std::string("p,q")}});
  t.summary["ok"] = true;
  std::ostringstream os;
  write_csv(os, t);
  CHECK(os.str() == "# bellpoly-schema v1\na,b\n1,\"p,q\"\n# ok: true\n");
  CHECK_THROWS(parse_format("xml"));
}

TEST_CASE("table1 command") {
  const auto r = run_cli({"table1", "--kmax", "1"});
  CHECK(r.code == 0);
  CHECK(r.out == "# bellpoly-schema v1\nk,N_k,golden,match\n1,5,5,true\n# golden_pass: true\n");

  const auto a = run_cli({"table1", "--kmax", "50", "--fit", "--format", "json"});
  const auto b = run_cli({"--format", "json", "table1", "--fit", "--kmax", "50"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["rows"].size() == 50);
  CHECK(j["fit_mismatches"] == std::vector<int>{1});
  CHECK(j["rows"][11]["N_k"] == 35);
}

TEST_CASE("table2 command") {
  const auto r = run_cli({"table2", "--Kmax", "2"});
  CHECK(r.code == 0);
  CHECK(r.out.find("\n2,7,7,true,") != std::string::npos);
  const auto m = run_cli({"table2", "--Kmax", "2", "--kind", "mermin", "--format", "json"});
  CHECK(m.code == 0);
  const auto j = nlohmann::json::parse(m.out);
  CHECK(j["rows"].size() == 1);
  CHECK(j["rows"][0]["N_K"] == 7);
  CHECK(run_cli({"table2", "--Kmax", "13"}).code == 2);
}

TEST_CASE("fig1 command") {
  const auto r = run_cli({"fig1", "--nmin", "5", "--nmax", "7", "--k", "1", "2", "3"});
  CHECK(r.code == 0);
  CHECK(r.out.find("7,2,27.4285714286,16,") != std::string::npos);
  CHECK(r.out.find("5,1,8,8,1,true") != std::string::npos);
  CHECK(r.out.find("6,3,") == std::string::npos);
  CHECK(r.out.find("7,3,") != std::string::npos);
}

TEST_CASE("verify-n2 command") {
  const auto r = run_cli({"verify-n2", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["values"].size() == 15);
  CHECK(j["bound"] == 6.0);
  CHECK(j["pass"] == true);
  const auto bad = run_cli({"verify-n2", "--angles", "0.0", "0.0"});
  CHECK(bad.code == 1);
  CHECK(bad.out.find("# pass: false") != std::string::npos);
}

TEST_CASE("oracle-suite command") {
  CHECK(run_cli({"oracle-suite", "--nmax", "2"}).code == 0);
  CHECK(run_cli({"oracle-suite", "--nmax", "5"}).code == 0);
  const auto big = run_cli({"oracle-suite", "--nmax", "9"});
  CHECK(big.code == 2);
  CHECK(big.err.find("--force") != std::string::npos);
  CHECK(run_cli({"oracle-suite", "--nmax", "4", "--inject-fault"}).code == 1);
}

TEST_CASE("errors and output files") {
  const auto r = run_cli({"--out", "/nonexistent-dir/x.csv", "table1", "--kmax", "2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("/nonexistent-dir/x.csv") != std::string::npos);
  CHECK(run_cli({"bogus"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"--format", "xml", "table1"}).code == 2);
}
