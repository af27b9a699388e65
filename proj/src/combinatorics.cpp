#include "bellpoly/combinatorics.hpp"

#include <boost/math/special_functions/gamma.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include <cmath>
#include <numbers>
#include <numeric>
#include <string>

#include "bellpoly/errors.hpp"

namespace bellpoly {

namespace {

using boost::multiprecision::cpp_int;

void check_A_domain(int N, int k, int s) {
  if (k < 0 || s < 0 || s > k) {
    throw DomainError("coefficient_A: need 0 <= s <= k, got s=" + std::to_string(s) +
                      " k=" + std::to_string(k));
  }
  if (2 * k >= N) {
    throw DomainError("coefficient_A: need k < N/2, got N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
  }
}

cpp_int big_binom(unsigned n, unsigned r) {
  if (r > n - r) r = n - r;
  cpp_int result = 1;
  for (unsigned i = 0; i < r; ++i) {
    result *= (n - i);
    result /= (i + 1);
  }
  return result;
}

double ln_factorial(unsigned n) { return boost::math::lgamma(static_cast<double>(n) + 1.0); }

}  // namespace

std::string_view to_string(BoundKind kind) {
  return kind == BoundKind::MabkRotated ? "mabk" : "mermin";
}

BoundKind parse_bound_kind(std::string_view name) {
  if (name == "mabk") return BoundKind::MabkRotated;
  if (name == "mermin") return BoundKind::MerminXY;
  throw DomainError("unknown bound kind '" + std::string(name) + "' (expected mabk|mermin)");
}

double HalfPow2Value::value() const {
  const double m = static_cast<double>(mantissa);
  if (twice_exponent % 2 == 0) return std::ldexp(m, twice_exponent / 2);
  // odd: 2^{(e-1)/2} * sqrt(2)
  return std::ldexp(m * std::numbers::sqrt2, (twice_exponent - 1) / 2);
}

double HalfPow2Value::log2() const {
  return std::log2(static_cast<double>(mantissa)) + 0.5 * twice_exponent;
}

std::uint64_t binom_exact(unsigned n, unsigned r) {
  if (n > 64) throw DomainError("binom_exact: n=" + std::to_string(n) + " exceeds 64");
  if (r > n) {
    throw DomainError("binom_exact: r=" + std::to_string(r) + " > n=" + std::to_string(n));
  }
  if (r > n - r) r = n - r;
  std::uint64_t result = 1;
  for (unsigned i = 0; i < r; ++i) {
    // result * (n - i) is divisible by (i + 1); reduce first so the product
    // never exceeds the final value.
    std::uint64_t divisor = i + 1;
    const std::uint64_t g = std::gcd(result, divisor);
    result /= g;
    divisor /= g;
    result *= (n - i) / divisor;
  }
  return result;
}

double log2_binom(unsigned n, unsigned r) {
  if (r > n) {
    throw DomainError("log2_binom: r=" + std::to_string(r) + " > n=" + std::to_string(n));
  }
  if (r == 0 || r == n) return 0.0;
  if (n <= 64) return std::log2(static_cast<double>(binom_exact(n, r)));
  return (ln_factorial(n) - ln_factorial(r) - ln_factorial(n - r)) / std::numbers::ln2;
}

double log2_coefficient_A(int N, int k, int s) {
  check_A_domain(N, k, s);
  return (N - k) + log2_binom(k, s) - 0.5 * (log2_binom(N, s) + log2_binom(N, k - s));
}

double coefficient_A(int N, int k, int s) {
  check_A_domain(N, k, s);
  if (N <= 64) {
    const double num = static_cast<double>(binom_exact(k, s));
    const double den = std::sqrt(static_cast<double>(binom_exact(N, s))) *
                       std::sqrt(static_cast<double>(binom_exact(N, k - s)));
    return std::ldexp(num / den, N - k);
  }
  return std::exp2(log2_coefficient_A(N, k, s));
}

HalfPow2Value local_bound_exact(int n, BoundKind kind) {
  if (n < 2) throw DomainError("local_bound: need n >= 2, got " + std::to_string(n));
  if (kind == BoundKind::MerminXY && n % 2 == 0) return {1, n};
  return {1, n - 1};
}

double local_bound(int n, BoundKind kind) { return local_bound_exact(n, kind).value(); }

HalfPow2Value sym_local_bound_exact(int N, int k) {
  if (k < 0 || 2 * k >= N) {
    throw DomainError("sym_local_bound: need 0 <= k < N/2, got N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
  }
  return {binom_exact(N, k), N - k - 1};
}

double sym_local_bound(int N, int k) {
  if (k < 0 || 2 * k >= N) {
    throw DomainError("sym_local_bound: need 0 <= k < N/2, got N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
  }
  if (N <= 64) return sym_local_bound_exact(N, k).value();
  return std::exp2(log2_binom(N, k) + 0.5 * (N - k - 1));
}

double log2_max_violation_ratio(int N, int k, BoundKind kind) {
  return log2_coefficient_A(N, k, k / 2) - 1.0 - local_bound_exact(N - k, kind).log2();
}

int compare_max_violation_to_one(int N, int k, BoundKind kind) {
  check_A_domain(N, k, k / 2);
  const int s = k / 2;
  const int n = N - k;
  // ratio^2 = 2^{2(n-1) - e} C(k,s)^2 / (C(N,s) C(N,k-s)), e = twice exponent of L.
  const int shift = 2 * (n - 1) - local_bound_exact(n, kind).twice_exponent;
  cpp_int lhs = big_binom(k, s);
  lhs *= lhs;
  lhs <<= shift;
  const cpp_int rhs = big_binom(N, s) * big_binom(N, k - s);
  if (lhs > rhs) return 1;
  if (lhs < rhs) return -1;
  return 0;
}

}  // namespace bellpoly
