#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "bellpoly/symmetric_states.hpp"

// Brute-force ground truth on the full 2^n-dimensional space, n <= 10.
//
// Qubit convention: party j (0-based) owns bit (n-1-j) of the computational
// basis index, so party 0 is the most significant bit and A (x) B places A on
// party 0. Excitation means |1>; sigma_- = |0><1| lowers it.
namespace bellpoly::dense {

inline constexpr int kMaxParties = 10;

struct DenseState {
  int n = 0;
  Eigen::VectorXcd amplitudes;
};

struct DenseOperator {
  int n = 0;
  Eigen::MatrixXcd matrix;

  double expectation(const DenseState& state) const;
  double hermiticity_error() const;
};

// cos(angle) sigma_x + sin(angle) sigma_y.
struct EquatorialObservable {
  double angle = 0.0;
  Eigen::Matrix2cd matrix() const;
};

// The two measurement settings of one party.
struct SettingPair {
  EquatorialObservable first;
  EquatorialObservable second;
};

// Per-party setting 0 = identity, 1 = first observable, 2 = second.
using Settings = std::vector<std::uint8_t>;

// Real polynomial in the settings of n parties, stored sparsely.
class BellExpression {
 public:
  explicit BellExpression(int n);

  int parties() const noexcept { return n_; }
  // Accumulates; entries that cancel to zero are dropped.
  void add(const Settings& settings, double coefficient);
  double coefficient(const Settings& settings) const;
  const std::map<Settings, double>& terms() const noexcept { return terms_; }

 private:
  int n_;
  std::map<Settings, double> terms_;
};

DenseState dicke_dense(int n, int i);
// sum_i c_i |D^i_n>
DenseState lift(const SymmetricState& state);

DenseState computational_basis_state(int n, std::uint64_t index);

// 2^{n-1}(|D^0><D^n| + |D^n><D^0|), built from Dicke vectors.
DenseOperator mermin_operator_dense(int n);
// 2^{n-1}(sigma_-^{(x)n} + sigma_+^{(x)n}), built from Kronecker products.
DenseOperator ladder_mermin_dense(int n);

// op on the qubits of `subset` (strictly increasing party indices; subset[0]
// takes op's most significant qubit), identity on the rest.
DenseOperator embed_on_subset(const DenseOperator& op, int N, std::span<const int> subset);

// All size-m subsets of {0..N-1} in lexicographic order.
std::vector<std::vector<int>> subsets(int N, int m);

// sum over all (N-k)-subsets S of M_{N-k}|_S (x) 1.
DenseOperator symmetrized_operator_dense(int N, int k);
// 2^{N-k-1}/(N-k)! (S_+^{N-k} + S_-^{N-k}), S_pm = sum_i sigma_pm^{(i)}.
DenseOperator ladder_sum_operator(int N, int k);

// sum_terms coeff (x)_j O_j[setting_j], one SettingPair per party.
DenseOperator expression_operator(const BellExpression& expr,
                                  std::span<const SettingPair> observables);
DenseOperator expression_operator(const BellExpression& expr, const SettingPair& all_parties);

enum class MabkVariant { Rotated, XY };

struct MabkExpression {
  BellExpression expression;
  SettingPair settings;
};

// Full-correlation expression Re[e^{-i phi} prod_j (O1_j + i O2_j)]: with
// settings (theta, theta - pi/2) it induces exactly mermin_operator_dense(n)
// for any theta. Rotated uses theta = (n-1)pi/(4n), phi = n theta; XY uses
// theta = 0, phi = 0 (sigma_x and -sigma_y, coefficients +-1).
MabkExpression mabk_bell_expression(int n, MabkVariant variant = MabkVariant::Rotated);

// The four-party inequality with local bound 6 that is violated on every
// four-party subset of a six-qubit symmetric state.
BellExpression i_abcd_expression();

inline constexpr double kN2Phi1 = 0.9047;
inline constexpr double kN2Phi2 = 1.9652;
inline constexpr double kN2ReferenceValue = 6.271;
inline constexpr double kN2Tolerance = 1e-3;

struct N2Verification {
  double phi1 = kN2Phi1;
  double phi2 = kN2Phi2;
  std::vector<std::vector<int>> subsets;
  std::vector<double> values;  // one per four-party subset, lexicographic
  double local_bound = 0.0;
  double spread = 0.0;  // max - min over subsets
  bool pass = false;    // every value within kN2Tolerance of kN2ReferenceValue
};

// I_ABCD on (|D^0>+|D^2>+|D^4>+|D^6>)/2, same settings for every party.
N2Verification verify_n2(double phi1 = kN2Phi1, double phi2 = kN2Phi2);
// Same, with individual settings for each of the six parties.
N2Verification verify_n2(std::span<const SettingPair> per_party);

}  // namespace bellpoly::dense
