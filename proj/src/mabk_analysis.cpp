#include "bellpoly/mabk_analysis.hpp"

#include <cmath>
#include <string>

#include "bellpoly/errors.hpp"

namespace bellpoly {

namespace {

void check_k(int N, int k, const char* who) {
  if (k < 0 || 2 * k >= N) {
    throw DomainError(std::string(who) + ": need 0 <= k < N/2, got N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
  }
}

// Past this the boundary is clear in floating point.
constexpr double kLog2Margin = 1e-6;

bool violates(int N, int k, BoundKind kind) {
  const double lr = log2_max_violation_ratio(N, k, kind);
  if (lr > kLog2Margin) return true;
  if (lr < -kLog2Margin) return false;
  return compare_max_violation_to_one(N, k, kind) > 0;
}

}  // namespace

double expectation_closed_form(const SymmetricState& state, int k) {
  const int N = state.parties();
  check_k(N, k, "expectation_closed_form");
  const auto c = state.amplitudes();
  double total = 0.0;
  for (int s = 0; s <= k; ++s) {
    const Complex pair = std::conj(c[static_cast<std::size_t>(s)]) *
                         c[static_cast<std::size_t>(N - k + s)];
    total += coefficient_A(N, k, s) * pair.real();
  }
  return total;
}

ViolationReport max_violation(int N, int k, BoundKind kind) {
  check_k(N, k, "max_violation");
  ViolationReport r;
  r.N = N;
  r.k = k;
  r.kind = kind;
  r.quantum_value = 0.5 * coefficient_A(N, k, k / 2);
  r.local_bound = local_bound(N - k, kind);
  r.log2_ratio = log2_max_violation_ratio(N, k, kind);
  r.ratio = std::isfinite(r.quantum_value) ? r.quantum_value / r.local_bound
                                           : std::exp2(r.log2_ratio);
  r.subsystem_count = N <= 64 ? static_cast<double>(binom_exact(N, k))
                              : std::exp2(log2_binom(N, k));
  return r;
}

int minimal_Nk(int k, BoundKind kind) {
  if (k < 1) throw DomainError("minimal_Nk: need k >= 1, got " + std::to_string(k));
  // The ratio grows without bound in N, so the scan terminates; the cap only
  // guards against a broken bound definition.
  const int cap = 64 * k + 1024;
  for (int N = 2 * k + 1; N <= cap; ++N) {
    if (violates(N, k, kind)) return N;
  }
  throw DomainError("minimal_Nk: no violation found up to N=" + std::to_string(cap));
}

FitReport fit_check(int k_max) {
  FitReport report;
  for (int k = 1; k <= k_max; ++k) {
    FitRow row;
    row.k = k;
    row.exact = minimal_Nk(k, BoundKind::MabkRotated);
    row.fit = kFitSlope * k + kFitIntercept;
    row.rounded = std::lround(row.fit);
    row.mismatch = row.rounded != row.exact;
    if (row.mismatch) report.mismatches.push_back(k);
    report.rows.push_back(row);
  }
  return report;
}

double nonlocality_sum(const SymmetricState& state, int k) {
  const int N = state.parties();
  check_k(N, k, "nonlocality_sum");
  const double factor = expectation_closed_form(state, k) /
                        local_bound(N - k, BoundKind::MabkRotated);
  return static_cast<double>(binom_exact(N, k)) * factor * factor;
}

double ghz_nonlocality_sum(int N, int k) {
  check_k(N, k, "ghz_nonlocality_sum");
  return std::ldexp(1.0, N - k - 1);
}

SymmetrizedValues symmetrized_values(int N, int k) {
  check_k(N, k, "symmetrized_values");
  const double count = N <= 64 ? static_cast<double>(binom_exact(N, k))
                               : std::exp2(log2_binom(N, k));
  SymmetrizedValues v;
  v.quantum_max = count * 0.5 * coefficient_A(N, k, k / 2);
  v.classical_bound = sym_local_bound(N, k);
  v.ratio = v.quantum_max / v.classical_bound;
  return v;
}

SectorOperator sector_operator(int N, int k) {
  check_k(N, k, "sector_operator");
  SectorOperator op;
  op.N = N;
  op.k = k;
  op.matrix = Eigen::MatrixXd::Zero(N + 1, N + 1);
  for (int s = 0; s <= k; ++s) {
    const double half = 0.5 * coefficient_A(N, k, s);
    op.matrix(s, N - k + s) = half;
    op.matrix(N - k + s, s) = half;
  }
  return op;
}

double SectorOperator::expectation(const SymmetricState& state) const {
  if (state.parties() != N) throw DomainError("sector operator: party count mismatch");
  const Eigen::VectorXcd v = state.to_vector();
  return (v.adjoint() * matrix.cast<Complex>() * v)(0, 0).real();
}

double SectorOperator::expectation(const SectorDensity& rho) const {
  if (rho.parties() != N) throw DomainError("sector operator: party count mismatch");
  return (rho.matrix() * matrix.cast<Complex>()).trace().real();
}

}  // namespace bellpoly
