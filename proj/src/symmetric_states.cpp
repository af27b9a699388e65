#include "bellpoly/symmetric_states.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include <json.hpp>

#include "bellpoly/errors.hpp"

namespace bellpoly {

namespace {

double squared_norm(std::span<const Complex> v) {
  double total = 0.0;
  for (const auto& c : v) total += std::norm(c);
  return total;
}

void check_length(int N, std::size_t length) {
  if (N < 1) throw DomainError("symmetric state: need N >= 1, got " + std::to_string(N));
  if (length != static_cast<std::size_t>(N) + 1) {
    throw DomainError("symmetric state: expected " + std::to_string(N + 1) +
                      " amplitudes, got " + std::to_string(length));
  }
}

std::vector<Complex> to_complex(std::span<const double> real) {
  return {real.begin(), real.end()};
}

}  // namespace

SymmetricState::SymmetricState(Raw, int N, std::vector<Complex> amplitudes)
    : n_(N), amps_(std::move(amplitudes)) {
  check_length(N, amps_.size());
}

SymmetricState::SymmetricState(int N, std::vector<Complex> amplitudes)
    : SymmetricState(Raw{}, N, std::move(amplitudes)) {
  const double nrm = std::sqrt(squared_norm(amps_));
  if (!(nrm > 0.0) || !std::isfinite(nrm)) {
    throw DomainError("symmetric state: amplitude vector has zero or non-finite norm");
  }
  for (auto& c : amps_) c /= nrm;
}

SymmetricState::SymmetricState(int N, std::span<const double> amplitudes)
    : SymmetricState(N, to_complex(amplitudes)) {}

SymmetricState SymmetricState::unnormalized(int N, std::vector<Complex> amplitudes) {
  return SymmetricState(Raw{}, N, std::move(amplitudes));
}

double SymmetricState::norm() const { return std::sqrt(squared_norm(amps_)); }

Eigen::VectorXcd SymmetricState::to_vector() const {
  return Eigen::Map<const Eigen::VectorXcd>(amps_.data(), static_cast<Eigen::Index>(amps_.size()));
}

SectorDensity::SectorDensity(int N, Eigen::MatrixXcd matrix) : n_(N), rho_(std::move(matrix)) {
  if (N < 1 || rho_.rows() != N + 1 || rho_.cols() != N + 1) {
    throw DomainError("sector density: expected a square matrix of dimension N+1");
  }
}

SectorDensity SectorDensity::from_pure(const SymmetricState& state) {
  const Eigen::VectorXcd v = state.to_vector();
  return {state.parties(), v * v.adjoint()};
}

double SectorDensity::hermiticity_error() const {
  return (rho_ - rho_.adjoint()).cwiseAbs().maxCoeff();
}

double SectorDensity::min_eigenvalue() const {
  const Eigen::MatrixXcd herm = 0.5 * (rho_ + rho_.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(herm, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().minCoeff();
}

double SectorDensity::trace_error() const { return std::abs(rho_.trace() - Complex(1.0, 0.0)); }

bool SectorDensity::is_valid() const {
  return hermiticity_error() <= 1e-12 && min_eigenvalue() >= -1e-10 && trace_error() <= 1e-10;
}

SymmetricState optimal_polygamous(int N, int k, HalfRounding rounding) {
  if (k < 0 || 2 * k >= N) {
    throw DomainError("optimal_polygamous: need 0 <= k < N/2, got N=" + std::to_string(N) +
                      " k=" + std::to_string(k));
  }
  const int half = rounding == HalfRounding::Floor ? k / 2 : (k + 1) / 2;
  std::vector<Complex> amps(static_cast<std::size_t>(N) + 1, 0.0);
  amps[static_cast<std::size_t>(half)] = (1.0 / std::numbers::sqrt2);
  amps[static_cast<std::size_t>(N - k + half)] = (1.0 / std::numbers::sqrt2);
  return {N, std::move(amps)};
}

SymmetricState hyper_pair_state(int N, double alpha) {
  if (N < 4) throw DomainError("hyper_pair_state: need N >= 4, got " + std::to_string(N));
  if (!(alpha >= 0.0 && alpha <= 1.0)) {
    throw DomainError("hyper_pair_state: alpha must lie in [0,1]");
  }
  const double betas[] = {std::sqrt(1.0 - alpha * alpha), alpha};
  return conjectured_hyper_state(N, betas);
}

SymmetricState conjectured_hyper_state(int N, std::span<const double> betas) {
  if (betas.empty()) throw DomainError("conjectured_hyper_state: empty beta vector");
  const int K = static_cast<int>(betas.size()) - 1;
  if (2 * K >= N) {
    throw DomainError("conjectured_hyper_state: need K < N/2, got N=" + std::to_string(N) +
                      " K=" + std::to_string(K));
  }
  std::vector<Complex> amps(static_cast<std::size_t>(N) + 1, 0.0);
  for (int i = 0; i <= K; ++i) {
    const double c = betas[static_cast<std::size_t>(i)] * (1.0 / std::numbers::sqrt2);
    amps[static_cast<std::size_t>(i)] = c;
    amps[static_cast<std::size_t>(N - i)] = c;
  }
  return {N, std::move(amps)};
}

void to_json(nlohmann::json& j, const SymmetricState& state) {
  std::vector<double> re;
  std::vector<double> im;
  for (const auto& c : state.amplitudes()) {
    re.push_back(c.real());
    im.push_back(c.imag());
  }
  j = nlohmann::json{{"n", state.parties()}, {"re", re}, {"im", im}};
}

SymmetricState state_from_json(const nlohmann::json& j) {
  const int n = j.at("n").get<int>();
  const auto re = j.at("re").get<std::vector<double>>();
  std::vector<double> im(re.size(), 0.0);
  if (j.contains("im")) im = j.at("im").get<std::vector<double>>();
  if (im.size() != re.size()) throw DomainError("state json: 're' and 'im' lengths differ");
  std::vector<Complex> amps;
  amps.reserve(re.size());
  for (std::size_t i = 0; i < re.size(); ++i) amps.emplace_back(re[i], im[i]);
  return {n, std::move(amps)};
}

}  // namespace bellpoly
