#include "bellpoly/sdp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bellpoly/errors.hpp"

namespace bellpoly::sdp {

namespace {

using Eigen::MatrixXd;
using Eigen::VectorXd;

double inner(const MatrixXd& a, const MatrixXd& b) { return a.cwiseProduct(b).sum(); }

MatrixXd sym(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

// Largest alpha with X + alpha dX PSD (infinity if unbounded).
double max_step_psd(const MatrixXd& X, const MatrixXd& dX) {
  Eigen::LLT<MatrixXd> llt(X);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd L = llt.matrixL();
  const MatrixXd left = L.triangularView<Eigen::Lower>().solve(dX);
  const MatrixXd whitened =
      L.triangularView<Eigen::Lower>().solve(left.transpose()).transpose();
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(sym(whitened), Eigen::EigenvaluesOnly);
  const double lmin = eig.eigenvalues().minCoeff();
  return lmin >= 0.0 ? std::numeric_limits<double>::infinity() : -1.0 / lmin;
}

double max_step_lp(const VectorXd& x, const VectorXd& dx) {
  double alpha = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (dx(i) < 0.0) alpha = std::min(alpha, -x(i) / dx(i));
  }
  return alpha;
}

struct Direction {
  MatrixXd dX;
  VectorXd dx;
  VectorXd dy;
  MatrixXd dS;
  VectorXd ds;
};

}  // namespace

Result solve(const Problem& pr, const Options& opt) {
  const Eigen::Index n = pr.c_psd.rows();
  const Eigen::Index p = pr.c_lp.size();
  const Eigen::Index m = pr.b.size();
  if (static_cast<Eigen::Index>(pr.a_psd.size()) != m || pr.a_lp.rows() != m ||
      pr.a_lp.cols() != p || pr.c_psd.cols() != n) {
    throw DomainError("sdp::solve: inconsistent problem dimensions");
  }

  double c_norm = std::sqrt(pr.c_psd.squaredNorm() + pr.c_lp.squaredNorm());
  double a_max = 0.0;
  double xi = std::max(10.0, std::sqrt(static_cast<double>(n)));
  for (Eigen::Index i = 0; i < m; ++i) {
    const double a_norm =
        std::sqrt(pr.a_psd[i].squaredNorm() + pr.a_lp.row(i).squaredNorm());
    a_max = std::max(a_max, a_norm);
    xi = std::max(xi, static_cast<double>(n + p) * (1.0 + std::abs(pr.b(i))) / (1.0 + a_norm));
  }
  const double eta = std::max({10.0, std::sqrt(static_cast<double>(n)), c_norm, a_max});

  Result r;
  r.X = xi * MatrixXd::Identity(n, n);
  r.x = VectorXd::Constant(p, xi);
  r.S = eta * MatrixXd::Identity(n, n);
  r.s = VectorXd::Constant(p, eta);
  r.y = VectorXd::Zero(m);

  const double b_scale = 1.0 + pr.b.norm();
  const double c_scale = 1.0 + c_norm;
  const double dim = static_cast<double>(n + p);

  for (r.iterations = 0; r.iterations < opt.max_iterations; ++r.iterations) {
    VectorXd rp(m);
    for (Eigen::Index i = 0; i < m; ++i) {
      rp(i) = pr.b(i) - inner(pr.a_psd[i], r.X) - pr.a_lp.row(i).dot(r.x);
    }
    MatrixXd Rd = pr.c_psd - r.S;
    for (Eigen::Index i = 0; i < m; ++i) Rd -= r.y(i) * pr.a_psd[i];
    const VectorXd rd = pr.c_lp - r.s - pr.a_lp.transpose() * r.y;

    r.primal_objective = inner(pr.c_psd, r.X) + pr.c_lp.dot(r.x);
    r.dual_objective = pr.b.dot(r.y);
    const double mu = (inner(r.X, r.S) + r.x.dot(r.s)) / dim;
    r.relative_gap = std::abs(r.primal_objective - r.dual_objective) /
                     (1.0 + std::abs(r.primal_objective) + std::abs(r.dual_objective));
    r.primal_residual = rp.norm() / b_scale;
    r.dual_residual = std::sqrt(Rd.squaredNorm() + rd.squaredNorm()) / c_scale;
    if (std::max({r.relative_gap, r.primal_residual, r.dual_residual}) < opt.tolerance) {
      r.converged = true;
      break;
    }

    Eigen::LLT<MatrixXd> s_llt(r.S);
    if (s_llt.info() != Eigen::Success) break;
    const MatrixXd S_inv = s_llt.solve(MatrixXd::Identity(n, n));
    const VectorXd x_over_s = r.x.cwiseQuotient(r.s);

    // Schur complement M_ij = <A_i, X A_j S^-1> + a_i diag(x/s) a_j.
    std::vector<MatrixXd> xa_sinv(static_cast<std::size_t>(m));
    for (Eigen::Index j = 0; j < m; ++j) xa_sinv[j] = r.X * pr.a_psd[j] * S_inv;
    MatrixXd M(m, m);
    for (Eigen::Index i = 0; i < m; ++i) {
      for (Eigen::Index j = 0; j < m; ++j) {
        M(i, j) = inner(pr.a_psd[i], xa_sinv[j]);
      }
    }
    M += pr.a_lp * x_over_s.asDiagonal() * pr.a_lp.transpose();
    M = sym(M);
    Eigen::LDLT<MatrixXd> schur(M);
    if (schur.info() != Eigen::Success) break;

    // Newton step for X S + dX S + X dS = Rc (and the LP analogue).
    auto direction = [&](const MatrixXd& Rc, const VectorXd& rc) {
      const MatrixXd T = (Rc - r.X * Rd) * S_inv;
      const VectorXd t = (rc - r.x.cwiseProduct(rd)).cwiseQuotient(r.s);
      VectorXd rhs(m);
      for (Eigen::Index i = 0; i < m; ++i) {
        rhs(i) = rp(i) - inner(pr.a_psd[i], T) - pr.a_lp.row(i).dot(t);
      }
      Direction d;
      d.dy = schur.solve(rhs);
      d.dS = Rd;
      for (Eigen::Index i = 0; i < m; ++i) d.dS -= d.dy(i) * pr.a_psd[i];
      d.ds = rd - pr.a_lp.transpose() * d.dy;
      d.dX = sym((Rc - r.X * d.dS) * S_inv);
      d.dx = (rc - r.x.cwiseProduct(d.ds)).cwiseQuotient(r.s);
      return d;
    };
    auto steps = [&](const Direction& d) {
      const double ap = std::min(max_step_psd(r.X, d.dX), max_step_lp(r.x, d.dx));
      const double ad = std::min(max_step_psd(r.S, d.dS), max_step_lp(r.s, d.ds));
      return std::pair{ap, ad};
    };

    const MatrixXd XS = r.X * r.S;
    const Direction pred = direction(-XS, -r.x.cwiseProduct(r.s));
    const auto [ap_aff, ad_aff] = steps(pred);
    const double a_p = std::min(1.0, ap_aff);
    const double a_d = std::min(1.0, ad_aff);
    const double mu_aff = (inner(r.X + a_p * pred.dX, r.S + a_d * pred.dS) +
                           (r.x + a_p * pred.dx).dot(r.s + a_d * pred.ds)) /
                          dim;
    const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);

    const MatrixXd Rc = sigma * mu * MatrixXd::Identity(n, n) - XS - pred.dX * pred.dS;
    const VectorXd rc = VectorXd::Constant(p, sigma * mu) - r.x.cwiseProduct(r.s) -
                        pred.dx.cwiseProduct(pred.ds);
    const Direction corr = direction(Rc, rc);
    const auto [ap_max, ad_max] = steps(corr);
    const double step_p = std::min(1.0, opt.step_fraction * ap_max);
    const double step_d = std::min(1.0, opt.step_fraction * ad_max);
    if (!(step_p > 0.0) || !(step_d > 0.0)) break;

    r.X = sym(r.X + step_p * corr.dX);
    r.x += step_p * corr.dx;
    r.y += step_d * corr.dy;
    r.S = sym(r.S + step_d * corr.dS);
    r.s += step_d * corr.ds;
  }
  return r;
}

}  // namespace bellpoly::sdp
