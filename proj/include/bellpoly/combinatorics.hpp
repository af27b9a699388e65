#pragma once

#include <cstdint>
#include <string_view>

namespace bellpoly {

// Which local (hidden-variable) bound applies to an n-party Mermin-type
// operator. The rotated MABK settings give 2^{(n-1)/2} for every n; the
// sigma_x/sigma_y Mermin settings give 2^{n/2} when n is even.
enum class BoundKind { MabkRotated, MerminXY };

std::string_view to_string(BoundKind kind);
BoundKind parse_bound_kind(std::string_view name);  // "mabk" | "mermin"

// mantissa * 2^{twice_exponent / 2}; lets bound ratios be compared without
// rounding.
struct HalfPow2Value {
  std::uint64_t mantissa = 1;
  int twice_exponent = 0;

  double value() const;
  double log2() const;
};

// C(n, r) exactly. Requires r <= n <= 64.
std::uint64_t binom_exact(unsigned n, unsigned r);

// log2 C(n, r) through log-gamma; usable far beyond 64-bit range.
double log2_binom(unsigned n, unsigned r);

// A^{N,k}(s) = 2^{N-k} C(k,s) C(N,s)^{-1/2} C(N,k-s)^{-1/2}, for
// 0 <= s <= k and 2k < N.
double coefficient_A(int N, int k, int s);
double log2_coefficient_A(int N, int k, int s);

HalfPow2Value local_bound_exact(int n, BoundKind kind);
double local_bound(int n, BoundKind kind);

// Local bound of the sum of all C(N,k) rotated-MABK inequalities on
// (N-k)-party subsets: 2^{(N-k-1)/2} C(N,k). Exact form needs N <= 64.
HalfPow2Value sym_local_bound_exact(int N, int k);
double sym_local_bound(int N, int k);

// Sign of (max_s (A^{N,k}(s)/2) / L_{N-k}) - 1, decided in exact integer
// arithmetic. Any N with 2k < N.
int compare_max_violation_to_one(int N, int k, BoundKind kind);

// log2 of the same ratio, in floating point.
double log2_max_violation_ratio(int N, int k, BoundKind kind);

}  // namespace bellpoly
