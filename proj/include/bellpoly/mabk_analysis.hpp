#pragma once

#include <vector>

#include <Eigen/Dense>

#include "bellpoly/combinatorics.hpp"
#include "bellpoly/symmetric_states.hpp"

namespace bellpoly {

// One (N-k)-party subsystem's violation under the optimal GHZ settings. All
// C(N,k) subsystems share it for a permutation-invariant state.
struct ViolationReport {
  int N = 0;
  int k = 0;
  BoundKind kind = BoundKind::MabkRotated;
  double quantum_value = 0.0;
  double local_bound = 0.0;
  double ratio = 0.0;
  double log2_ratio = 0.0;
  double subsystem_count = 0.0;  // C(N,k); integral, exact up to 2^53
};

// Compression of M_{N-k} (x) 1_k onto the symmetric subspace: A^{N,k}(s)/2 at
// (s, N-k+s) and its transpose, s = 0..k.
struct SectorOperator {
  int N = 0;
  int k = 0;
  Eigen::MatrixXd matrix;

  double expectation(const SymmetricState& state) const;
  double expectation(const SectorDensity& rho) const;
};

// <PI_N| M_{N-k} (x) 1_k |PI_N> = sum_s A^{N,k}(s) Re(conj(c_s) c_{N-k+s}).
// For real amplitudes this is sum_s A^{N,k}(s) c_s c_{N-k+s}.
double expectation_closed_form(const SymmetricState& state, int k);

// Maximum over symmetric states, A^{N,k}(floor(k/2))/2, against L_{N-k}.
// For N beyond double range of 2^{N-k} only log2_ratio is meaningful.
ViolationReport max_violation(int N, int k, BoundKind kind);

// Smallest N > 2k with max_violation(N,k,kind).ratio > 1; the boundary is
// decided exactly.
int minimal_Nk(int k, BoundKind kind);

inline constexpr double kFitSlope = 2.77844;
inline constexpr double kFitIntercept = 1.21748;

struct FitRow {
  int k = 0;
  int exact = 0;
  double fit = 0.0;
  long rounded = 0;
  bool mismatch = false;
};

struct FitReport {
  std::vector<FitRow> rows;
  std::vector<int> mismatches;
};

// Compares minimal_Nk(k, MabkRotated) with round(kFitSlope*k + kFitIntercept)
// for k = 1..k_max.
FitReport fit_check(int k_max);

// C(N,k) (E / 2^{(N-k-1)/2})^2 with E = expectation_closed_form(state, k).
double nonlocality_sum(const SymmetricState& state, int k);

// A GHZ_{N-k} state sent to one subset: 2^{N-k-1}.
double ghz_nonlocality_sum(int N, int k);

struct SymmetrizedValues {
  double quantum_max = 0.0;
  double classical_bound = 0.0;
  double ratio = 0.0;
};

// Summed rotated-MABK inequality over all (N-k)-party subsets: maximum
// C(N,k) A^{N,k}(floor(k/2))/2 against 2^{(N-k-1)/2} C(N,k).
SymmetrizedValues symmetrized_values(int N, int k);

SectorOperator sector_operator(int N, int k);

}  // namespace bellpoly
