#pragma once

// Reference computations kept apart from the library: they re-derive values
// along different code paths (Pascal recursion, explicit bit loops, naive
// enumeration) so that agreement is meaningful.

#include <boost/multiprecision/cpp_int.hpp>

#include <bit>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "bellpoly/combinatorics.hpp"
#include "bellpoly/dense_oracle.hpp"
#include "bellpoly/symmetric_states.hpp"

namespace oracle {

using big = boost::multiprecision::cpp_int;

inline std::vector<std::vector<big>> pascal(int n_max) {
  std::vector<std::vector<big>> rows(static_cast<std::size_t>(n_max + 1));
  rows[0] = {1};
  for (int n = 1; n <= n_max; ++n) {
    auto& row = rows[static_cast<std::size_t>(n)];
    const auto& prev = rows[static_cast<std::size_t>(n - 1)];
    row.assign(static_cast<std::size_t>(n + 1), 0);
    row.front() = 1;
    row.back() = 1;
    for (int r = 1; r < n; ++r) row[r] = prev[r - 1] + prev[r];
  }
  return rows;
}

inline const std::vector<std::vector<big>>& pascal_cache() {
  static const auto rows = pascal(520);
  return rows;
}

inline const big& binom(int n, int r) { return pascal_cache()[n][r]; }

inline double log2_big(const big& v) {
  const unsigned msb = boost::multiprecision::msb(v);
  if (msb < 60) return std::log2(v.convert_to<double>());
  const big top = v >> (msb - 52);
  return std::log2(top.convert_to<double>()) + static_cast<double>(msb - 52);
}

// Twice the base-2 exponent of the local bound of an n-party inequality.
inline int twice_log2_bound(int n, bellpoly::BoundKind kind) {
  if (kind == bellpoly::BoundKind::MerminXY && n % 2 == 0) return n;
  return n - 1;
}

// Sign of (max violation ratio)^2 - 1 with ratio = (1/2) A^{N,k}(floor(k/2)) / L_{N-k}:
// ratio^2 = 2^{2(N-k) - 2 - e} C(k,s)^2 / (C(N,s) C(N,k-s)).
inline int violation_sign(int N, int k, bellpoly::BoundKind kind) {
  const int s = k / 2;
  const int e = twice_log2_bound(N - k, kind);
  big lhs = binom(k, s) * binom(k, s);
  big rhs = binom(N, s) * binom(N, k - s);
  const int shift = 2 * (N - k) - 2 - e;
  if (shift >= 0) {
    lhs <<= shift;
  } else {
    rhs <<= -shift;
  }
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

inline int minimal_Nk(int k, bellpoly::BoundKind kind) {
  for (int N = 2 * k + 1;; ++N) {
    if (violation_sign(N, k, kind) > 0) return N;
  }
}

// Columns are Dicke vectors, built by popcount without the library.
inline Eigen::MatrixXcd dicke_isometry(int N) {
  const std::size_t dim = std::size_t{1} << N;
  Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim), N + 1);
  for (std::size_t x = 0; x < dim; ++x) V(static_cast<Eigen::Index>(x), std::popcount(x)) = 1.0;
  for (int i = 0; i <= N; ++i) V.col(i).normalize();
  return V;
}

inline bellpoly::SymmetricState random_state(int N, std::mt19937_64& rng, bool complex = true) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(N + 1));
  for (auto& c : a) c = {g(rng), complex ? g(rng) : 0.0};
  return bellpoly::SymmetricState(N, std::move(a));
}

// Value of a Bell expression for one strategy, straight from the definition.
inline double strategy_value(const bellpoly::dense::BellExpression& expr, std::uint64_t index) {
  double total = 0.0;
  for (const auto& [settings, c] : expr.terms()) {
    double prod = c;
    for (std::size_t j = 0; j < settings.size(); ++j) {
      if (settings[j] == 0) continue;
      const bool flip = (index >> (2 * j + settings[j] - 1)) & 1u;
      if (flip) prod = -prod;
    }
    total += prod;
  }
  return total;
}

inline double naive_local_bound(const bellpoly::dense::BellExpression& expr) {
  const std::uint64_t count = std::uint64_t{1} << (2 * expr.parties());
  double best = -1e300;
  for (std::uint64_t x = 0; x < count; ++x) best = std::max(best, strategy_value(expr, x));
  return best;
}

// Kronecker product of single-qubit operators, party 0 leftmost.
inline Eigen::MatrixXcd kron_all(const std::vector<Eigen::Matrix2cd>& ops) {
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Identity(1, 1);
  for (const auto& op : ops) {
    Eigen::MatrixXcd next(out.rows() * 2, out.cols() * 2);
    for (Eigen::Index r = 0; r < out.rows(); ++r) {
      for (Eigen::Index c = 0; c < out.cols(); ++c) next.block(2 * r, 2 * c, 2, 2) = out(r, c) * op;
    }
    out = std::move(next);
  }
  return out;
}

}  // namespace oracle
