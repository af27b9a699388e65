#include "bellpoly/dense_oracle.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numbers>
#include <string>

#include "bellpoly/classical_bounds.hpp"
#include "bellpoly/combinatorics.hpp"
#include "bellpoly/errors.hpp"

namespace bellpoly::dense {

namespace {

void check_parties(int n, int lo, const char* who) {
  if (n < lo || n > kMaxParties) {
    throw DomainError(std::string(who) + ": party count " + std::to_string(n) +
                      " outside [" + std::to_string(lo) + ", " +
                      std::to_string(kMaxParties) + "]");
  }
}

Eigen::MatrixXcd kron(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  Eigen::MatrixXcd out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::Matrix2cd sigma_minus() {
  Eigen::Matrix2cd m = Eigen::Matrix2cd::Zero();
  m(0, 1) = 1.0;
  return m;
}

Eigen::Matrix2cd sigma_plus() { return sigma_minus().transpose(); }

// sigma on party j of N, identity elsewhere.
Eigen::MatrixXd single_site(const Eigen::Matrix2d& sigma, int N, int j) {
  const std::uint64_t dim = std::uint64_t{1} << N;
  const int bit = N - 1 - j;
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(dim, dim);
  for (std::uint64_t col = 0; col < dim; ++col) {
    const int b = static_cast<int>((col >> bit) & 1U);
    for (int a = 0; a < 2; ++a) {
      const double v = sigma(a, b);
      if (v == 0.0) continue;
      const std::uint64_t row = (col & ~(std::uint64_t{1} << bit)) | (std::uint64_t(a) << bit);
      out(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(col)) += v;
    }
  }
  return out;
}

Eigen::MatrixXcd build_expression(const std::vector<std::pair<const Settings*, double>>& terms,
                                  std::span<const std::array<Eigen::Matrix2cd, 3>> ops,
                                  std::size_t depth) {
  if (depth == ops.size()) {
    Eigen::MatrixXcd scalar(1, 1);
    double total = 0.0;
    for (const auto& t : terms) total += t.second;
    scalar(0, 0) = total;
    return scalar;
  }
  std::array<std::vector<std::pair<const Settings*, double>>, 3> buckets;
  for (const auto& t : terms) buckets[(*t.first)[depth]].push_back(t);
  const Eigen::Index rest = Eigen::Index{1} << (ops.size() - depth - 1);
  Eigen::MatrixXcd out = Eigen::MatrixXcd::Zero(2 * rest, 2 * rest);
  for (std::uint8_t s = 0; s < 3; ++s) {
    if (buckets[s].empty()) continue;
    out += kron(ops[depth][s], build_expression(buckets[s], ops, depth + 1));
  }
  return out;
}

}  // namespace

double DenseOperator::expectation(const DenseState& state) const {
  if (state.n != n) throw DomainError("dense expectation: party count mismatch");
  return state.amplitudes.dot(matrix * state.amplitudes).real();
}

double DenseOperator::hermiticity_error() const {
  return (matrix - matrix.adjoint()).cwiseAbs().maxCoeff();
}

Eigen::Matrix2cd EquatorialObservable::matrix() const {
  const Complex phase = std::polar(1.0, angle);
  Eigen::Matrix2cd m;
  m << 0.0, std::conj(phase), phase, 0.0;
  return m;
}

BellExpression::BellExpression(int n) : n_(n) {
  if (n < 1 || n > 16) throw DomainError("BellExpression: unsupported party count");
}

void BellExpression::add(const Settings& settings, double coefficient) {
  if (static_cast<int>(settings.size()) != n_) {
    throw DomainError("BellExpression: settings tuple has wrong length");
  }
  for (auto s : settings) {
    if (s > 2) throw DomainError("BellExpression: setting index must be 0, 1 or 2");
  }
  auto [it, inserted] = terms_.try_emplace(settings, 0.0);
  it->second += coefficient;
  if (it->second == 0.0) terms_.erase(it);
}

double BellExpression::coefficient(const Settings& settings) const {
  const auto it = terms_.find(settings);
  return it == terms_.end() ? 0.0 : it->second;
}

DenseState dicke_dense(int n, int i) {
  check_parties(n, 1, "dicke_dense");
  if (i < 0 || i > n) throw DomainError("dicke_dense: excitation count outside [0, n]");
  const std::uint64_t dim = std::uint64_t{1} << n;
  const double amp = 1.0 / std::sqrt(static_cast<double>(binom_exact(n, i)));
  DenseState st{n, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim))};
  for (std::uint64_t b = 0; b < dim; ++b) {
    if (std::popcount(b) == i) st.amplitudes(static_cast<Eigen::Index>(b)) = amp;
  }
  return st;
}

DenseState lift(const SymmetricState& state) {
  const int n = state.parties();
  check_parties(n, 1, "lift");
  const std::uint64_t dim = std::uint64_t{1} << n;
  std::vector<double> inv_sqrt(static_cast<std::size_t>(n) + 1);
  for (int i = 0; i <= n; ++i) inv_sqrt[i] = 1.0 / std::sqrt(static_cast<double>(binom_exact(n, i)));
  DenseState st{n, Eigen::VectorXcd(static_cast<Eigen::Index>(dim))};
  for (std::uint64_t b = 0; b < dim; ++b) {
    const int w = std::popcount(b);
    st.amplitudes(static_cast<Eigen::Index>(b)) = state[w] * inv_sqrt[w];
  }
  return st;
}

DenseState computational_basis_state(int n, std::uint64_t index) {
  check_parties(n, 1, "computational_basis_state");
  const std::uint64_t dim = std::uint64_t{1} << n;
  if (index >= dim) throw DomainError("computational_basis_state: index out of range");
  DenseState st{n, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(dim))};
  st.amplitudes(static_cast<Eigen::Index>(index)) = 1.0;
  return st;
}

DenseOperator mermin_operator_dense(int n) {
  check_parties(n, 2, "mermin_operator_dense");
  const Eigen::VectorXcd d0 = dicke_dense(n, 0).amplitudes;
  const Eigen::VectorXcd dn = dicke_dense(n, n).amplitudes;
  const double scale = std::ldexp(1.0, n - 1);
  return {n, scale * (d0 * dn.adjoint() + dn * d0.adjoint())};
}

DenseOperator ladder_mermin_dense(int n) {
  check_parties(n, 2, "ladder_mermin_dense");
  Eigen::MatrixXcd minus = sigma_minus();
  Eigen::MatrixXcd plus = sigma_plus();
  for (int j = 1; j < n; ++j) {
    minus = kron(minus, sigma_minus());
    plus = kron(plus, sigma_plus());
  }
  return {n, std::ldexp(1.0, n - 1) * (minus + plus)};
}

std::vector<std::vector<int>> subsets(int N, int m) {
  if (m < 0 || m > N) throw DomainError("subsets: need 0 <= m <= N");
  std::vector<std::vector<int>> out;
  std::vector<int> current(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) current[i] = i;
  while (true) {
    out.push_back(current);
    int i = m - 1;
    while (i >= 0 && current[i] == N - m + i) --i;
    if (i < 0) break;
    ++current[i];
    for (int j = i + 1; j < m; ++j) current[j] = current[j - 1] + 1;
  }
  return out;
}

DenseOperator embed_on_subset(const DenseOperator& op, int N, std::span<const int> subset) {
  check_parties(N, 1, "embed_on_subset");
  const int m = static_cast<int>(subset.size());
  if (m != op.n) throw DomainError("embed_on_subset: subset size differs from operator size");
  for (int i = 0; i < m; ++i) {
    if (subset[i] < 0 || subset[i] >= N) throw DomainError("embed_on_subset: party out of range");
    if (i > 0 && subset[i] <= subset[i - 1]) {
      throw DomainError("embed_on_subset: subset must be strictly increasing");
    }
  }
  std::vector<int> rest;
  for (int j = 0, next = 0; j < N; ++j) {
    if (next < m && subset[next] == j) {
      ++next;
    } else {
      rest.push_back(j);
    }
  }
  // compose(a, r): a's bit (m-1-i) goes to party subset[i], r's bit
  // (|rest|-1-i) to party rest[i].
  auto scatter = [N](std::uint64_t bits, std::span<const int> parties) {
    const int width = static_cast<int>(parties.size());
    std::uint64_t out = 0;
    for (int i = 0; i < width; ++i) {
      if ((bits >> (width - 1 - i)) & 1U) out |= std::uint64_t{1} << (N - 1 - parties[i]);
    }
    return out;
  };
  const std::uint64_t sub_dim = std::uint64_t{1} << m;
  const std::uint64_t rest_dim = std::uint64_t{1} << rest.size();
  std::vector<std::uint64_t> sub_pos(sub_dim);
  for (std::uint64_t a = 0; a < sub_dim; ++a) sub_pos[a] = scatter(a, subset);
  const std::uint64_t dim = std::uint64_t{1} << N;
  DenseOperator out{N, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim))};
  for (std::uint64_t r = 0; r < rest_dim; ++r) {
    const std::uint64_t base = scatter(r, rest);
    for (std::uint64_t a = 0; a < sub_dim; ++a) {
      for (std::uint64_t b = 0; b < sub_dim; ++b) {
        const Complex v = op.matrix(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
        if (v == Complex(0.0)) continue;
        out.matrix(static_cast<Eigen::Index>(base | sub_pos[a]),
                   static_cast<Eigen::Index>(base | sub_pos[b])) = v;
      }
    }
  }
  return out;
}

DenseOperator symmetrized_operator_dense(int N, int k) {
  check_parties(N, 2, "symmetrized_operator_dense");
  if (k < 0 || 2 * k >= N) throw DomainError("symmetrized_operator_dense: need 0 <= k < N/2");
  const DenseOperator m = mermin_operator_dense(N - k);
  const std::uint64_t dim = std::uint64_t{1} << N;
  DenseOperator out{N, Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(dim),
                                              static_cast<Eigen::Index>(dim))};
  for (const auto& s : subsets(N, N - k)) out.matrix += embed_on_subset(m, N, s).matrix;
  return out;
}

DenseOperator ladder_sum_operator(int N, int k) {
  check_parties(N, 2, "ladder_sum_operator");
  if (k < 0 || 2 * k >= N) throw DomainError("ladder_sum_operator: need 0 <= k < N/2");
  const std::uint64_t dim = std::uint64_t{1} << N;
  Eigen::Matrix2d lower = Eigen::Matrix2d::Zero();
  lower(0, 1) = 1.0;
  Eigen::MatrixXd s_minus = Eigen::MatrixXd::Zero(dim, dim);
  for (int j = 0; j < N; ++j) s_minus += single_site(lower, N, j);
  const Eigen::MatrixXd s_plus = s_minus.transpose();
  Eigen::MatrixXd pm = s_minus;
  Eigen::MatrixXd pp = s_plus;
  double factorial = 1.0;
  for (int p = 2; p <= N - k; ++p) {
    pm = pm * s_minus;
    pp = pp * s_plus;
    factorial *= p;
  }
  const double scale = std::ldexp(1.0, N - k - 1) / factorial;
  return {N, (scale * (pm + pp)).cast<Complex>()};
}

DenseOperator expression_operator(const BellExpression& expr,
                                  std::span<const SettingPair> observables) {
  const int n = expr.parties();
  check_parties(n, 1, "expression_operator");
  if (static_cast<int>(observables.size()) != n) {
    throw DomainError("expression_operator: need one setting pair per party");
  }
  std::vector<std::array<Eigen::Matrix2cd, 3>> ops;
  for (const auto& pair : observables) {
    ops.push_back({Eigen::Matrix2cd::Identity(), pair.first.matrix(), pair.second.matrix()});
  }
  std::vector<std::pair<const Settings*, double>> terms;
  for (const auto& [settings, c] : expr.terms()) terms.emplace_back(&settings, c);
  return {n, build_expression(terms, ops, 0)};
}

DenseOperator expression_operator(const BellExpression& expr, const SettingPair& all_parties) {
  const std::vector<SettingPair> per_party(static_cast<std::size_t>(expr.parties()), all_parties);
  return expression_operator(expr, per_party);
}

MabkExpression mabk_bell_expression(int n, MabkVariant variant) {
  check_parties(n, 2, "mabk_bell_expression");
  const double theta =
      variant == MabkVariant::Rotated ? (n - 1) * std::numbers::pi / (4.0 * n) : 0.0;
  const double phase = n * theta;
  MabkExpression out{BellExpression(n),
                     {EquatorialObservable{theta},
                      EquatorialObservable{theta - std::numbers::pi / 2}}};
  // Expanding prod_j (O1_j + i O2_j): a monomial with m second settings
  // carries i^m, so its coefficient is Re(e^{-i phase} i^m) = cos(m pi/2 - phase).
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    const int m = std::popcount(mask);
    double c = std::cos(m * std::numbers::pi / 2 - phase);
    if (std::abs(c) < 1e-14) continue;
    if (std::abs(std::abs(c) - 1.0) < 1e-15) c = std::round(c);
    Settings settings(static_cast<std::size_t>(n));
    for (int j = 0; j < n; ++j) settings[j] = ((mask >> (n - 1 - j)) & 1U) ? 2 : 1;
    out.expression.add(settings, c);
  }
  return out;
}

BellExpression i_abcd_expression() {
  BellExpression expr(4);
  // Sum over distinct arrangements of the setting multiset across A, B, C, D.
  auto add_sym = [&expr](Settings pattern, double c) {
    std::sort(pattern.begin(), pattern.end());
    do {
      expr.add(pattern, c);
    } while (std::next_permutation(pattern.begin(), pattern.end()));
  };
  add_sym({1, 2, 0, 0}, -2.0);
  add_sym({2, 2, 0, 0}, -2.0);
  expr.add({1, 1, 1, 1}, -1.0);
  add_sym({1, 1, 1, 2}, 1.0);
  add_sym({1, 1, 2, 2}, -1.0);
  add_sym({1, 2, 2, 2}, -1.0);
  expr.add({2, 2, 2, 2}, 1.0);
  return expr;
}

N2Verification verify_n2(std::span<const SettingPair> per_party) {
  constexpr int kParties = 6;
  if (per_party.size() != kParties) throw DomainError("verify_n2: need six setting pairs");
  const double amps[] = {1, 0, 1, 0, 1, 0, 1};
  const DenseState psi = lift(SymmetricState(kParties, amps));
  const BellExpression expr = i_abcd_expression();

  N2Verification out;
  out.phi1 = per_party[0].first.angle;
  out.phi2 = per_party[0].second.angle;
  out.subsets = subsets(kParties, 4);
  for (const auto& s : out.subsets) {
    std::vector<SettingPair> local;
    for (int j : s) local.push_back(per_party[j]);
    const DenseOperator op = expression_operator(expr, local);
    out.values.push_back(embed_on_subset(op, kParties, s).expectation(psi));
  }
  out.local_bound = local_bound_enumerate(expr).bound;
  const auto [lo, hi] = std::minmax_element(out.values.begin(), out.values.end());
  out.spread = *hi - *lo;
  out.pass = std::all_of(out.values.begin(), out.values.end(), [](double v) {
    return std::abs(v - kN2ReferenceValue) <= kN2Tolerance;
  });
  return out;
}

N2Verification verify_n2(double phi1, double phi2) {
  const std::vector<SettingPair> per_party(
      6, SettingPair{EquatorialObservable{phi1}, EquatorialObservable{phi2}});
  return verify_n2(per_party);
}

}  // namespace bellpoly::dense
