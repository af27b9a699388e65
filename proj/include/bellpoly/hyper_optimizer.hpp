#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "bellpoly/combinatorics.hpp"
#include "bellpoly/symmetric_states.hpp"

namespace bellpoly {

// Simultaneous violation of the (N-1)-, ..., (N-K)-party Mermin-type
// inequalities by one permutation-invariant N-qubit state.
struct HyperProblem {
  int N = 0;
  int K = 0;
  BoundKind kind = BoundKind::MabkRotated;
};

inline constexpr int kMaxSectorParties = 40;
inline constexpr double kFeasibleThreshold = 1.0 - 1e-9;
inline constexpr double kInfeasibleThreshold = 1.0 - 1e-6;
inline constexpr double kCertificateGap = 1e-6;

struct SolverCertificate {
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double relative_gap = 0.0;
  // lambda_max(sum_k w_k M_k / L_k) for the dual weights w; no symmetric
  // state exceeds it as a common ratio.
  double upper_bound = 0.0;
  std::vector<double> weights;
};

struct HyperSolution {
  HyperProblem problem;
  double t_star = 0.0;  // min_k ratio_k achieved by rho
  SectorDensity rho;
  std::vector<double> ratios;  // ratio_k = <M_{N-k}>_rho / L_{N-k}, k = 1..K
  bool feasible = false;       // t_star >= 1 - 1e-9
  bool certified_infeasible = false;  // upper_bound < 1 - 1e-6
  SolverCertificate certificate;
};

// ratio_k for k = 1..K.
std::vector<double> hyper_ratios(const SectorDensity& rho, int K, BoundKind kind);

// max_rho min_k ratio_k over the symmetric sector. Throws ConvergenceError
// when the primal value and the dual bound differ by more than 1e-6.
HyperSolution solve_max_min(const HyperProblem& problem);

// max_rho sum_k <M_{N-k}>/L_{N-k} subject to every ratio_k >= 1. Throws
// DomainError if that set is empty (checked via solve_max_min).
HyperSolution solve_sum_objective(const HyperProblem& problem);

struct MinimalNKResult {
  int K = 0;
  BoundKind kind = BoundKind::MabkRotated;
  int N_K = 0;
  std::vector<HyperSolution> scan;  // N = 2K+1 .. N_K
};

// K >= 2. Scans N = 2K+1, 2K+2, ... until solve_max_min is feasible. Every skipped N
// must be certified infeasible; otherwise ConvergenceError.
MinimalNKResult minimal_NK_scan(int K, BoundKind kind);
int minimal_NK(int K, BoundKind kind);

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  bool empty = true;
  bool contains(double x) const { return !empty && x > lower && x < upper; }
};

// Values of alpha^2 for which hyper_pair_state(N, alpha) violates both the
// (N-1)- and (N-2)-party inequalities.
Interval hyper2_interval(int N, BoundKind kind);

struct PureFamilyResult {
  int N = 0;
  int K = 0;
  BoundKind kind = BoundKind::MabkRotated;
  std::vector<double> beta;  // unit vector, beta_0..beta_D
  std::vector<double> ratios;
  double min_ratio = 0.0;
};

// Best min_k ratio_k over sum_i beta_i (|D^i>+|D^{N-i}>)/sqrt2 with real
// beta_i, i = 0..min(K, max_index). Multi-start quasi-Newton on a smoothed
// minimum; deterministic.
PureFamilyResult pure_family_search(int N, int K, BoundKind kind,
                                    std::optional<int> max_index = std::nullopt);

void to_json(nlohmann::json& j, const HyperSolution& solution);
void to_json(nlohmann::json& j, const PureFamilyResult& result);
void to_json(nlohmann::json& j, const Interval& interval);

}  // namespace bellpoly
