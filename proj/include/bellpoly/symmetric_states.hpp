#pragma once

#include <complex>
#include <span>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

namespace bellpoly {

using Complex = std::complex<double>;

// Pure permutation-invariant N-qubit state in the Dicke basis:
// |psi> = sum_i c_i |D^i_N>, where |D^i_N> has i excitations.
class SymmetricState {
 public:
  // Normalizes. Throws DomainError on a zero vector or a length other than N+1.
  SymmetricState(int N, std::vector<Complex> amplitudes);
  SymmetricState(int N, std::span<const double> amplitudes);

  // Keeps the amplitudes as given; the closed forms downstream assume unit
  // norm, so this is only for callers that rescale themselves.
  static SymmetricState unnormalized(int N, std::vector<Complex> amplitudes);

  int parties() const noexcept { return n_; }
  std::span<const Complex> amplitudes() const noexcept { return amps_; }
  const Complex& operator[](int i) const { return amps_.at(static_cast<std::size_t>(i)); }
  double norm() const;

  Eigen::VectorXcd to_vector() const;

 private:
  struct Raw {};
  SymmetricState(Raw, int N, std::vector<Complex> amplitudes);

  int n_;
  std::vector<Complex> amps_;
};

// Density operator on the (N+1)-dimensional symmetric subspace.
class SectorDensity {
 public:
  SectorDensity(int N, Eigen::MatrixXcd matrix);
  static SectorDensity from_pure(const SymmetricState& state);

  int parties() const noexcept { return n_; }
  const Eigen::MatrixXcd& matrix() const noexcept { return rho_; }

  double hermiticity_error() const;
  double min_eigenvalue() const;
  double trace_error() const;
  // Hermitian to 1e-12, eigenvalues >= -1e-10, trace 1 within 1e-10.
  bool is_valid() const;

 private:
  int n_;
  Eigen::MatrixXcd rho_;
};

enum class HalfRounding { Floor, Ceil };

// (|D^{[k/2]}> + |D^{N-k+[k/2]}>)/sqrt(2); the maximizer of the (N-k)-party
// Mermin-type operator over symmetric states. Requires 0 <= k < N/2.
SymmetricState optimal_polygamous(int N, int k, HalfRounding rounding = HalfRounding::Floor);

// alpha (|D^1>+|D^{N-1}>)/sqrt2 + sqrt(1-alpha^2) (|D^0>+|D^N>)/sqrt2.
SymmetricState hyper_pair_state(int N, double alpha);

// sum_i beta_i (|D^i>+|D^{N-i}>)/sqrt2 for i = 0..K, K = betas.size()-1 < N/2.
// beta is renormalized to unit length.
SymmetricState conjectured_hyper_state(int N, std::span<const double> betas);

// {"n": N, "re": [...], "im": [...]}
void to_json(nlohmann::json& j, const SymmetricState& state);
SymmetricState state_from_json(const nlohmann::json& j);

}  // namespace bellpoly
