#include "bellpoly/hyper_optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <string>

#include "bellpoly/errors.hpp"
#include "bellpoly/mabk_analysis.hpp"
#include "bellpoly/sdp.hpp"

namespace bellpoly {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

void check_problem(const HyperProblem& p) {
  if (p.K < 1) throw DomainError("hyper problem: need K >= 1, got " + std::to_string(p.K));
  if (2 * p.K >= p.N) {
    throw DomainError("hyper problem: need N > 2K, got N=" + std::to_string(p.N) +
                      " K=" + std::to_string(p.K));
  }
  if (p.N > kMaxSectorParties) {
    throw ResourceError("hyper problem: N=" + std::to_string(p.N) + " exceeds " +
                        std::to_string(kMaxSectorParties));
  }
}

// M_{N-k} / L_{N-k} on the sector, k = 1..K.
std::vector<MatrixXd> normalized_operators(const HyperProblem& p) {
  std::vector<MatrixXd> ops;
  ops.reserve(static_cast<std::size_t>(p.K));
  for (int k = 1; k <= p.K; ++k) {
    ops.push_back(sector_operator(p.N, k).matrix / local_bound(p.N - k, p.kind));
  }
  return ops;
}

// Constraint rows scaled to unit norm; the dual is mapped back on return.
struct ScaledProblem {
  sdp::Problem problem;
  VectorXd row_norms;
};

ScaledProblem scale_rows(sdp::Problem pr) {
  const Eigen::Index m = pr.b.size();
  VectorXd norms(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const double nrm = std::sqrt(pr.a_psd[i].squaredNorm() + pr.a_lp.row(i).squaredNorm());
    norms(i) = nrm;
    pr.a_psd[i] /= nrm;
    pr.a_lp.row(i) /= nrm;
    pr.b(i) /= nrm;
  }
  return {std::move(pr), norms};
}

sdp::Result solve_scaled(const sdp::Problem& pr) {
  ScaledProblem sp = scale_rows(pr);
  sdp::Result r = sdp::solve(sp.problem);
  r.y = r.y.cwiseQuotient(sp.row_norms);
  return r;
}

// Nearest density matrix: symmetrize, clip negative eigenvalues, renormalize.
MatrixXd clean_density(const MatrixXd& X) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (X + X.transpose()));
  VectorXd vals = eig.eigenvalues().cwiseMax(0.0);
  const double tr = vals.sum();
  if (!(tr > 0.0)) throw ConvergenceError("hyper solver: degenerate primal iterate", 0, 0, 0);
  vals /= tr;
  MatrixXd rho = eig.eigenvectors() * vals.asDiagonal() * eig.eigenvectors().transpose();
  return 0.5 * (rho + rho.transpose());
}

double lambda_max(const MatrixXd& a) {
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(a, Eigen::EigenvaluesOnly);
  return eig.eigenvalues().maxCoeff();
}

SolverCertificate certificate_from(const sdp::Result& r, const std::vector<MatrixXd>& ops) {
  SolverCertificate c;
  c.iterations = r.iterations;
  c.primal_residual = r.primal_residual;
  c.dual_residual = r.dual_residual;
  c.relative_gap = r.relative_gap;
  const std::size_t K = ops.size();
  c.weights.assign(K, 0.0);
  double total = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    c.weights[k] = std::max(0.0, r.y(static_cast<Eigen::Index>(k)));
    total += c.weights[k];
  }
  if (!(total > 0.0)) {
    std::fill(c.weights.begin(), c.weights.end(), 1.0);
    total = static_cast<double>(K);
  }
  MatrixXd combo = MatrixXd::Zero(ops.front().rows(), ops.front().cols());
  for (std::size_t k = 0; k < K; ++k) {
    c.weights[k] /= total;
    combo += c.weights[k] * ops[k];
  }
  c.upper_bound = lambda_max(combo);
  return c;
}

HyperSolution make_solution(const HyperProblem& p, const MatrixXd& rho_real,
                            SolverCertificate cert) {
  SectorDensity rho(p.N, rho_real.cast<Complex>());
  std::vector<double> ratios = hyper_ratios(rho, p.K, p.kind);
  const double t = *std::min_element(ratios.begin(), ratios.end());
  HyperSolution s{p, t, std::move(rho), std::move(ratios), false, false, std::move(cert)};
  s.feasible = t >= kFeasibleThreshold;
  s.certified_infeasible = s.certificate.upper_bound < kInfeasibleThreshold;
  return s;
}

double soft_min_objective(const std::vector<MatrixXd>& Q, const VectorXd& beta, double tau,
                          VectorXd* grad) {
  const double r = beta.norm();
  const VectorXd u = beta / r;
  const std::size_t K = Q.size();
  VectorXd q(static_cast<Eigen::Index>(K));
  for (std::size_t k = 0; k < K; ++k) q(k) = u.dot(Q[k] * u);
  const double qmin = q.minCoeff();
  VectorXd w = (-(q.array() - qmin) / tau).exp().matrix();
  const double z = w.sum();
  w /= z;
  const double pen = r * r - 1.0;
  const double f = -(qmin - tau * std::log(z)) + pen * pen;
  if (grad != nullptr) {
    VectorXd gu = VectorXd::Zero(u.size());
    for (std::size_t k = 0; k < K; ++k) gu -= 2.0 * w(k) * (Q[k] * u);
    *grad = (gu - u * u.dot(gu)) / r + 4.0 * pen * beta;
  }
  return f;
}

// BFGS with backtracking; returns the final point.
VectorXd bfgs(const std::vector<MatrixXd>& Q, VectorXd x, double tau, int max_iter) {
  const Eigen::Index n = x.size();
  MatrixXd H = MatrixXd::Identity(n, n);
  VectorXd g;
  double f = soft_min_objective(Q, x, tau, &g);
  for (int it = 0; it < max_iter && g.norm() > 1e-13; ++it) {
    VectorXd d = -H * g;
    if (d.dot(g) >= 0.0) {
      H.setIdentity();
      d = -g;
    }
    double step = 1.0;
    VectorXd x_new;
    VectorXd g_new;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < 60; ++ls) {
      x_new = x + step * d;
      if (x_new.norm() > 1e-8) {
        f_new = soft_min_objective(Q, x_new, tau, &g_new);
        if (f_new <= f + 1e-4 * step * g.dot(d)) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) break;
    const VectorXd s = x_new - x;
    const VectorXd yv = g_new - g;
    const double sy = s.dot(yv);
    if (sy > 1e-18) {
      const double rho = 1.0 / sy;
      const MatrixXd I = MatrixXd::Identity(n, n);
      H = (I - rho * s * yv.transpose()) * H * (I - rho * yv * s.transpose()) +
          rho * s * s.transpose();
    }
    x = x_new;
    g = g_new;
    f = f_new;
  }
  return x;
}

std::vector<double> family_ratios(const std::vector<MatrixXd>& Q, const VectorXd& beta) {
  const VectorXd u = beta / beta.norm();
  std::vector<double> out;
  out.reserve(Q.size());
  for (const auto& q : Q) out.push_back(u.dot(q * u));
  return out;
}

}  // namespace

std::vector<double> hyper_ratios(const SectorDensity& rho, int K, BoundKind kind) {
  const int N = rho.parties();
  if (K < 1 || 2 * K >= N) {
    throw DomainError("hyper_ratios: need 1 <= K < N/2, got N=" + std::to_string(N) +
                      " K=" + std::to_string(K));
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k) {
    out.push_back(sector_operator(N, k).expectation(rho) / local_bound(N - k, kind));
  }
  return out;
}

HyperSolution solve_max_min(const HyperProblem& p) {
  check_problem(p);
  const auto ops = normalized_operators(p);
  const int n = p.N + 1;
  const int K = p.K;

  // Variables: rho (PSD), LP block (s_1..s_K, t). Minimize -t.
  sdp::Problem pr;
  pr.c_psd = MatrixXd::Zero(n, n);
  pr.c_lp = VectorXd::Zero(K + 1);
  pr.c_lp(K) = -1.0;
  pr.a_lp = MatrixXd::Zero(K + 1, K + 1);
  pr.b = VectorXd::Zero(K + 1);
  for (int k = 0; k < K; ++k) {
    pr.a_psd.push_back(ops[static_cast<std::size_t>(k)]);
    pr.a_lp(k, k) = -1.0;
    pr.a_lp(k, K) = -1.0;
  }
  pr.a_psd.push_back(MatrixXd::Identity(n, n));
  pr.b(K) = 1.0;

  const sdp::Result r = solve_scaled(pr);
  HyperSolution sol = make_solution(p, clean_density(r.X), certificate_from(r, ops));
  const double gap = sol.certificate.upper_bound - sol.t_star;
  if (gap < -1e-9) {
    throw std::logic_error("solve_max_min: dual bound below primal value");
  }
  if (gap > kCertificateGap) {
    throw ConvergenceError("solve_max_min: N=" + std::to_string(p.N) + " K=" +
                               std::to_string(p.K) + " duality gap " + std::to_string(gap),
                           r.primal_residual, r.dual_residual, gap);
  }
  return sol;
}

HyperSolution solve_sum_objective(const HyperProblem& p) {
  check_problem(p);
  const HyperSolution base = solve_max_min(p);
  if (!base.feasible) {
    throw DomainError("solve_sum_objective: no symmetric state violates all " +
                      std::to_string(p.K) + " inequalities at N=" + std::to_string(p.N));
  }
  const auto ops = normalized_operators(p);
  const int n = p.N + 1;
  const int K = p.K;

  // Variables: rho (PSD), surplus s_k >= 0 with <B_k, rho> - s_k = 1.
  sdp::Problem pr;
  pr.c_psd = MatrixXd::Zero(n, n);
  for (const auto& op : ops) pr.c_psd -= op;
  pr.c_lp = VectorXd::Zero(K);
  pr.a_lp = MatrixXd::Zero(K + 1, K);
  pr.b = VectorXd::Ones(K + 1);
  for (int k = 0; k < K; ++k) {
    pr.a_psd.push_back(ops[static_cast<std::size_t>(k)]);
    pr.a_lp(k, k) = -1.0;
  }
  pr.a_psd.push_back(MatrixXd::Identity(n, n));

  const sdp::Result r = solve_scaled(pr);
  SolverCertificate cert;
  cert.iterations = r.iterations;
  cert.primal_residual = r.primal_residual;
  cert.dual_residual = r.dual_residual;
  cert.relative_gap = r.relative_gap;
  cert.upper_bound = base.certificate.upper_bound;
  cert.weights = base.certificate.weights;
  HyperSolution sol = make_solution(p, clean_density(r.X), std::move(cert));
  if (!r.converged && r.relative_gap > kCertificateGap) {
    throw ConvergenceError("solve_sum_objective: solver stopped early", r.primal_residual,
                           r.dual_residual, r.relative_gap);
  }
  return sol;
}

MinimalNKResult minimal_NK_scan(int K, BoundKind kind) {
  if (K < 2) throw DomainError("minimal_NK: need K >= 2, got " + std::to_string(K));
  MinimalNKResult out{K, kind, 0, {}};
  for (int N = 2 * K + 1; N <= kMaxSectorParties; ++N) {
    HyperSolution s = solve_max_min({N, K, kind});
    const bool feasible = s.feasible;
    const bool infeasible = s.certified_infeasible;
    out.scan.push_back(std::move(s));
    if (feasible) {
      out.N_K = N;
      return out;
    }
    if (!infeasible) {
      const auto& c = out.scan.back().certificate;
      throw ConvergenceError("minimal_NK: N=" + std::to_string(N) + " K=" + std::to_string(K) +
                                 " is neither feasible nor certified infeasible",
                             c.primal_residual, c.dual_residual,
                             c.upper_bound - out.scan.back().t_star);
    }
  }
  throw ResourceError("minimal_NK: no feasible N up to " + std::to_string(kMaxSectorParties));
}

int minimal_NK(int K, BoundKind kind) { return minimal_NK_scan(K, kind).N_K; }

Interval hyper2_interval(int N, BoundKind kind) {
  if (N < 4) throw DomainError("hyper2_interval: need N >= 4, got " + std::to_string(N));
  Interval iv;
  const double dN = static_cast<double>(N);
  // ratio_2 > 1  <=>  alpha^2 > N L_{N-2} / 2^{N-2}
  const double lower2 = dN * local_bound(N - 2, kind) / std::ldexp(1.0, N - 2);
  // ratio_1 > 1  <=>  alpha^2 (1 - alpha^2) > N L_{N-1}^2 / 2^{2N-2}
  const double L1 = local_bound(N - 1, kind);
  const double c = dN * L1 * L1 / std::ldexp(1.0, 2 * N - 2);
  const double disc = 1.0 - 4.0 * c;
  if (disc <= 0.0) return iv;
  double lo_root;
  double hi_root;
  if (kind == BoundKind::MabkRotated) {
    const double half = std::ldexp(1.0, -N / 2) * ((N % 2 != 0) ? std::sqrt(0.5) : 1.0);
    const double w = half * std::sqrt(std::ldexp(1.0, N - 2) - dN);
    lo_root = 0.5 - w;
    hi_root = 0.5 + w;
  } else {
    lo_root = 0.5 * (1.0 - std::sqrt(disc));
    hi_root = 0.5 * (1.0 + std::sqrt(disc));
  }
  iv.lower = std::clamp(std::max(lower2, lo_root), 0.0, 1.0);
  iv.upper = std::clamp(hi_root, 0.0, 1.0);
  iv.empty = !(iv.lower < iv.upper);
  return iv;
}

PureFamilyResult pure_family_search(int N, int K, BoundKind kind, std::optional<int> max_index) {
  check_problem({N, K, kind});
  const int D = std::min(K, max_index.value_or(K));
  if (D < 0) throw DomainError("pure_family_search: max_index must be >= 0");
  const Eigen::Index dim = D + 1;

  std::vector<MatrixXd> Q;
  for (int k = 1; k <= K; ++k) {
    MatrixXd q = MatrixXd::Zero(dim, dim);
    const double scale = 1.0 / (2.0 * local_bound(N - k, kind));
    for (int s = 0; s <= k; ++s) {
      if (s > D || k - s > D) continue;
      q(s, k - s) += scale * coefficient_A(N, k, s);
    }
    Q.push_back(0.5 * (q + q.transpose()));
  }

  std::vector<VectorXd> seeds;
  seeds.push_back(VectorXd::Ones(dim));
  seeds.push_back(VectorXd::Unit(dim, 0));
  for (int k = 1; k <= K; ++k) {
    VectorXd v = VectorXd::Zero(dim);
    if (k / 2 <= D) v(k / 2) = 1.0;
    if ((k + 1) / 2 <= D) v((k + 1) / 2) = 1.0;
    if (v.norm() > 0.0) seeds.push_back(v);
  }
  {
    VectorXd v = VectorXd::Zero(dim);
    for (int i = 0; i <= std::min(D, (K + 1) / 2); ++i) v(i) = 1.0;
    seeds.push_back(v);
  }
  std::mt19937 rng(917u + static_cast<unsigned>(N * 64 + K));
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int r = 0; r < 8; ++r) {
    VectorXd v(dim);
    for (Eigen::Index i = 0; i < dim; ++i) v(i) = unif(rng) + 1e-3;
    seeds.push_back(v);
  }

  VectorXd best;
  double best_min = -std::numeric_limits<double>::infinity();
  for (VectorXd x : seeds) {
    x.normalize();
    for (double tau = 1e-1; tau >= 1e-9; tau *= 0.1) x = bfgs(Q, x, tau, 400);
    x = x.cwiseAbs();  // all coefficients are nonnegative
    const auto ratios = family_ratios(Q, x);
    const double m = *std::min_element(ratios.begin(), ratios.end());
    if (m > best_min) {
      best_min = m;
      best = x / x.norm();
    }
  }

  PureFamilyResult out;
  out.N = N;
  out.K = K;
  out.kind = kind;
  out.beta.assign(best.data(), best.data() + best.size());
  out.ratios = family_ratios(Q, best);
  out.min_ratio = best_min;
  return out;
}

void to_json(nlohmann::json& j, const HyperSolution& s) {
  const auto& m = s.rho.matrix();
  std::vector<double> re;
  std::vector<double> im;
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      re.push_back(m(r, c).real());
      im.push_back(m(r, c).imag());
    }
  }
  j = nlohmann::json{{"N", s.problem.N},
                     {"K", s.problem.K},
                     {"kind", std::string(to_string(s.problem.kind))},
                     {"t_star", s.t_star},
                     {"upper_bound", s.certificate.upper_bound},
                     {"feasible", s.feasible},
                     {"certified_infeasible", s.certified_infeasible},
                     {"ratios", s.ratios},
                     {"rho", {{"dim", m.rows()}, {"re", re}, {"im", im}}}};
}

void to_json(nlohmann::json& j, const PureFamilyResult& r) {
  j = nlohmann::json{{"N", r.N},
                     {"K", r.K},
                     {"kind", std::string(to_string(r.kind))},
                     {"t_star", r.min_ratio},
                     {"ratios", r.ratios},
                     {"beta", r.beta}};
}

void to_json(nlohmann::json& j, const Interval& iv) {
  j = nlohmann::json{{"lower", iv.lower}, {"upper", iv.upper}, {"empty", iv.empty}};
}

}  // namespace bellpoly
