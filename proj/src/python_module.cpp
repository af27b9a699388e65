#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>
#include <string>
#include <vector>

#include "bellpoly/classical_bounds.hpp"
#include "bellpoly/cli.hpp"
#include "bellpoly/combinatorics.hpp"
#include "bellpoly/dense_oracle.hpp"
#include "bellpoly/errors.hpp"
#include "bellpoly/hyper_optimizer.hpp"
#include "bellpoly/mabk_analysis.hpp"
#include "bellpoly/symmetric_states.hpp"

namespace py = pybind11;
using namespace bellpoly;

namespace {

BoundKind kind_arg(const std::string& name) { return parse_bound_kind(name); }

py::dict solution_dict(const HyperSolution& s) {
  py::dict d;
  d["N"] = s.problem.N;
  d["K"] = s.problem.K;
  d["kind"] = std::string(to_string(s.problem.kind));
  d["t_star"] = s.t_star;
  d["upper_bound"] = s.certificate.upper_bound;
  d["relative_gap"] = s.certificate.relative_gap;
  d["feasible"] = s.feasible;
  d["certified_infeasible"] = s.certified_infeasible;
  d["ratios"] = s.ratios;
  d["rho"] = s.rho.matrix();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Symmetric-state Bell violation analysis";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ResourceError>(m, "ResourceError", PyExc_RuntimeError);
  py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_ArithmeticError);

  m.def("coefficient_A", &coefficient_A, py::arg("N"), py::arg("k"), py::arg("s"));
  m.def("binom", &binom_exact, py::arg("n"), py::arg("r"));
  m.def(
      "local_bound",
      [](int n, const std::string& kind) { return local_bound(n, kind_arg(kind)); },
      py::arg("n"), py::arg("kind") = "mabk");
  m.def("sym_local_bound", &sym_local_bound, py::arg("N"), py::arg("k"));

  m.def(
      "max_violation",
      [](int N, int k, const std::string& kind) {
        const auto r = max_violation(N, k, kind_arg(kind));
        py::dict d;
        d["N"] = r.N;
        d["k"] = r.k;
        d["quantum_value"] = r.quantum_value;
        d["local_bound"] = r.local_bound;
        d["ratio"] = r.ratio;
        d["log2_ratio"] = r.log2_ratio;
        d["subsystem_count"] = r.subsystem_count;
        return d;
      },
      py::arg("N"), py::arg("k"), py::arg("kind") = "mabk");
  m.def(
      "minimal_Nk",
      [](int k, const std::string& kind) { return minimal_Nk(k, kind_arg(kind)); },
      py::arg("k"), py::arg("kind") = "mabk");
  m.def(
      "fit_check",
      [](int k_max) {
        const auto r = fit_check(k_max);
        py::list rows;
        for (const auto& row : r.rows) {
          py::dict d;
          d["k"] = row.k;
          d["exact"] = row.exact;
          d["fit"] = row.fit;
          d["rounded"] = row.rounded;
          d["mismatch"] = row.mismatch;
          rows.append(d);
        }
        py::dict out;
        out["rows"] = rows;
        out["mismatches"] = r.mismatches;
        return out;
      },
      py::arg("k_max"));

  m.def(
      "expectation",
      [](std::vector<Complex> amplitudes, int k) {
        const int N = static_cast<int>(amplitudes.size()) - 1;
        return expectation_closed_form(SymmetricState(N, std::move(amplitudes)), k);
      },
      py::arg("amplitudes"), py::arg("k"));
  m.def(
      "nonlocality_sum",
      [](std::vector<Complex> amplitudes, int k) {
        const int N = static_cast<int>(amplitudes.size()) - 1;
        return nonlocality_sum(SymmetricState(N, std::move(amplitudes)), k);
      },
      py::arg("amplitudes"), py::arg("k"));
  m.def("ghz_nonlocality_sum", &ghz_nonlocality_sum, py::arg("N"), py::arg("k"));
  m.def(
      "optimal_polygamous",
      [](int N, int k) {
        const auto s = optimal_polygamous(N, k);
        return std::vector<Complex>(s.amplitudes().begin(), s.amplitudes().end());
      },
      py::arg("N"), py::arg("k"));

  m.def(
      "verify_n2",
      [](double phi1, double phi2) {
        const auto r = dense::verify_n2(phi1, phi2);
        py::dict d;
        d["subsets"] = r.subsets;
        d["values"] = r.values;
        d["local_bound"] = r.local_bound;
        d["spread"] = r.spread;
        d["pass"] = r.pass;
        return d;
      },
      py::arg("phi1") = dense::kN2Phi1, py::arg("phi2") = dense::kN2Phi2);
  m.def("mabk_enumerated_bound", [](int n) {
    const auto expr = dense::mabk_bell_expression(n);
    return local_bound_enumerate(expr.expression).bound;
  }, py::arg("n"));

  m.def(
      "solve_max_min",
      [](int N, int K, const std::string& kind) {
        return solution_dict(solve_max_min({N, K, kind_arg(kind)}));
      },
      py::arg("N"), py::arg("K"), py::arg("kind") = "mabk");
  m.def(
      "solve_sum_objective",
      [](int N, int K, const std::string& kind) {
        return solution_dict(solve_sum_objective({N, K, kind_arg(kind)}));
      },
      py::arg("N"), py::arg("K"), py::arg("kind") = "mabk");
  m.def(
      "minimal_NK",
      [](int K, const std::string& kind) { return minimal_NK(K, kind_arg(kind)); },
      py::arg("K"), py::arg("kind") = "mabk");
  m.def(
      "hyper2_interval",
      [](int N, const std::string& kind) -> py::object {
        const auto iv = hyper2_interval(N, kind_arg(kind));
        if (iv.empty) return py::none();
        return py::make_tuple(iv.lower, iv.upper);
      },
      py::arg("N"), py::arg("kind") = "mabk");
  m.def(
      "pure_family_search",
      [](int N, int K, const std::string& kind, std::optional<int> max_index) {
        const auto r = pure_family_search(N, K, kind_arg(kind), max_index);
        py::dict d;
        d["N"] = r.N;
        d["K"] = r.K;
        d["beta"] = r.beta;
        d["ratios"] = r.ratios;
        d["min_ratio"] = r.min_ratio;
        return d;
      },
      py::arg("N"), py::arg("K"), py::arg("kind") = "mabk",
      py::arg("max_index") = py::none());

  m.def(
      "run_cli",
      [](std::vector<std::string> args) {
        args.insert(args.begin(), "bellpoly");
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream out, err;
        int code;
        {
          py::gil_scoped_release release;
          code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
        }
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
