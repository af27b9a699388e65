#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "bellpoly/dense_oracle.hpp"
#include "bellpoly/errors.hpp"
#include "bellpoly/hyper_optimizer.hpp"
#include "bellpoly/mabk_analysis.hpp"
#include "oracles.hpp"

using namespace bellpoly;

namespace {

// Both ratios of the alpha family, straight from the closed form.
std::pair<double, double> pair_ratios(int N, double alpha, BoundKind kind) {
  const auto st = hyper_pair_state(N, alpha);
  return {expectation_closed_form(st, 1) / local_bound(N - 1, kind),
          expectation_closed_form(st, 2) / local_bound(N - 2, kind)};
}

}  // namespace

TEST_CASE("single constraint reduces to the closed-form maximum") {
  for (auto kind : {BoundKind::MabkRotated, BoundKind::MerminXY}) {
    for (int N = 3; N <= 16; ++N) {
      const auto s = solve_max_min({N, 1, kind});
      const double want = max_violation(N, 1, kind).quantum_value / local_bound(N - 1, kind);
      CHECK(std::abs(s.t_star - want) < 1e-6);
    }
  }
}

TEST_CASE("solution contract at (7,2)") {
  const auto s = solve_max_min({7, 2, BoundKind::MabkRotated});
  CHECK(s.feasible);
  CHECK(s.t_star >= 1.0);
  REQUIRE(s.ratios.size() == 2);
  CHECK(s.ratios[0] >= 1.0);
  CHECK(s.ratios[1] >= 1.0);
  CHECK(std::abs(std::min(s.ratios[0], s.ratios[1]) - s.t_star) < 1e-7);
  CHECK(s.rho.is_valid());
  CHECK(s.rho.min_eigenvalue() >= -1e-10);
  CHECK(s.rho.trace_error() <= 1e-10);
  CHECK(s.certificate.upper_bound - s.t_star < 1e-6);
  CHECK(s.t_star == doctest::Approx(1.10667375).epsilon(1e-7));

  // optimum is numerically pure and matches the best member of the beta family
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> eig(s.rho.matrix());
  const Eigen::Index top = eig.eigenvalues().size() - 1;
  CHECK(eig.eigenvalues()(top) > 1 - 1e-6);
  const auto pf = pure_family_search(7, 2, BoundKind::MabkRotated);
  const auto phi = conjectured_hyper_state(7, pf.beta).to_vector();
  CHECK(std::norm(eig.eigenvectors().col(top).dot(phi)) >= 1 - 1e-4);

  // the one-parameter family reaches feasibility only inside the interval, below t*
  const auto iv = hyper2_interval(7, BoundKind::MabkRotated);
  double best = 0.0;
  double best_a2 = 0.0;
  for (int i = 1; i < 10000; ++i) {
    const double a2 = i / 10000.0;
    const auto [r1, r2] = pair_ratios(7, std::sqrt(a2), BoundKind::MabkRotated);
    if (std::min(r1, r2) > best) {
      best = std::min(r1, r2);
      best_a2 = a2;
    }
  }
  CHECK(iv.contains(best_a2));
  CHECK(best > 1.0);
  CHECK(best < s.t_star - 1e-3);
}

TEST_CASE("infeasible below the threshold") {
  const auto s = solve_max_min({6, 2, BoundKind::MabkRotated});
  CHECK_FALSE(s.feasible);
  CHECK(s.t_star < 1 - 1e-6);
  CHECK(s.certified_infeasible);
}

TEST_CASE("lifted sector solutions reproduce the subsystem ratios") {
  for (auto kind : {BoundKind::MabkRotated, BoundKind::MerminXY}) {
    for (int N = 5; N <= 8; ++N) {
      const Eigen::MatrixXcd V = oracle::dicke_isometry(N);
      for (int K = 2; 2 * K < N; ++K) {
        const auto s = solve_max_min({N, K, kind});
        const Eigen::MatrixXcd full = V * s.rho.matrix() * V.adjoint();
        for (int k = 1; k <= K; ++k) {
          const auto op = dense::mermin_operator_dense(N - k);
          for (const auto& subset : dense::subsets(N, N - k)) {
            const auto emb = dense::embed_on_subset(op, N, subset);
            const double value = (full * emb.matrix).trace().real() / local_bound(N - k, kind);
            CHECK(std::abs(value - s.ratios[static_cast<std::size_t>(k - 1)]) < 1e-8);
          }
        }
      }
    }
  }
}

TEST_CASE("minimal N_K for small K") {
  CHECK(minimal_NK(2, BoundKind::MabkRotated) == 7);
  CHECK(minimal_NK(3, BoundKind::MabkRotated) == 10);
  CHECK(minimal_NK(2, BoundKind::MerminXY) == 7);
  const auto scan = minimal_NK_scan(4, BoundKind::MabkRotated);
  CHECK(scan.N_K == 13);
  CHECK(scan.scan.size() == 13 - 9 + 1);
  for (std::size_t i = 0; i + 1 < scan.scan.size(); ++i) CHECK(scan.scan[i].certified_infeasible);
  CHECK(minimal_Nk(4, BoundKind::MabkRotated) == 12);  // differs from the hyper value
  CHECK_THROWS_AS(minimal_NK(1, BoundKind::MabkRotated), DomainError);
}

TEST_CASE("two-constraint interval") {
  const auto iv = hyper2_interval(7, BoundKind::MabkRotated);
  CHECK_FALSE(iv.empty);
  CHECK(iv.lower == doctest::Approx(0.875).epsilon(1e-12));
  CHECK(iv.upper == doctest::Approx(0.5 + std::pow(2.0, -3.5) * std::sqrt(25.0)).epsilon(1e-12));
  CHECK(hyper2_interval(6, BoundKind::MabkRotated).empty);
  CHECK(hyper2_interval(7, BoundKind::MerminXY).empty);
  CHECK(hyper2_interval(8, BoundKind::MerminXY).empty);
  CHECK_FALSE(hyper2_interval(9, BoundKind::MerminXY).empty);
  CHECK_THROWS_AS(hyper2_interval(3, BoundKind::MabkRotated), DomainError);

  // endpoints are where the closed-form ratios cross 1
  for (int N = 7; N <= 14; ++N) {
    for (auto kind : {BoundKind::MabkRotated, BoundKind::MerminXY}) {
      const auto v = hyper2_interval(N, kind);
      if (v.empty) continue;
      const double mid = 0.5 * (v.lower + v.upper);
      const auto [r1, r2] = pair_ratios(N, std::sqrt(mid), kind);
      CHECK(r1 > 1.0);
      CHECK(r2 > 1.0);
      const auto [l1, l2] = pair_ratios(N, std::sqrt(v.lower), kind);
      CHECK(std::min(l1, l2) == doctest::Approx(1.0).epsilon(1e-9));
      const auto [u1, u2] = pair_ratios(N, std::sqrt(v.upper), kind);
      CHECK(std::min(u1, u2) == doctest::Approx(1.0).epsilon(1e-9));
    }
  }
}

TEST_CASE("pure family search") {
  const auto r = pure_family_search(7, 2, BoundKind::MabkRotated);
  CHECK(r.min_ratio >= 1.0);
  const auto st = conjectured_hyper_state(7, r.beta);
  for (int k = 1; k <= 2; ++k) {
    CHECK(expectation_closed_form(st, k) / local_bound(7 - k, BoundKind::MabkRotated) ==
          doctest::Approx(r.ratios[static_cast<std::size_t>(k - 1)]).epsilon(1e-12));
  }

  // K = 1: the mirrored pairs force an equal mix of the floor and ceil optimal
  // states, which is itself optimal
  for (int N = 5; N <= 9; ++N) {
    const auto one = pure_family_search(N, 1, BoundKind::MabkRotated);
    CHECK(one.beta[0] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(one.beta[1] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-6));
    CHECK(one.min_ratio == doctest::Approx(max_violation(N, 1, BoundKind::MabkRotated).ratio).epsilon(1e-9));
  }

  const auto restricted = pure_family_search(15, 5, BoundKind::MabkRotated, 3);
  const auto full = pure_family_search(15, 5, BoundKind::MabkRotated);
  CHECK(restricted.min_ratio < 1.0);
  CHECK(full.min_ratio >= 1.0);
  CHECK(restricted.beta.size() == 4);

  const auto again = pure_family_search(15, 5, BoundKind::MabkRotated);
  CHECK(again.beta == full.beta);
}

TEST_CASE("sum objective as secondary mode") {
  const auto s = solve_sum_objective({7, 2, BoundKind::MabkRotated});
  const auto m = solve_max_min({7, 2, BoundKind::MabkRotated});
  for (double r : s.ratios) CHECK(r >= 1.0 - 1e-7);
  CHECK(s.ratios[0] + s.ratios[1] >= m.ratios[0] + m.ratios[1] - 1e-6);
  CHECK(s.rho.is_valid());
  CHECK_THROWS_AS(solve_sum_objective({6, 2, BoundKind::MabkRotated}), DomainError);
}

TEST_CASE("argument checks and export") {
  CHECK_THROWS_AS(solve_max_min({6, 3, BoundKind::MabkRotated}), DomainError);
  CHECK_THROWS_AS(solve_max_min({7, 0, BoundKind::MabkRotated}), DomainError);
  CHECK_THROWS_AS(solve_max_min({41, 2, BoundKind::MabkRotated}), ResourceError);
  CHECK_THROWS_AS(pure_family_search(6, 3, BoundKind::MabkRotated), DomainError);

  const auto s = solve_max_min({7, 2, BoundKind::MerminXY});
  const nlohmann::json j = s;
  CHECK(j["N"] == 7);
  CHECK(j["K"] == 2);
  CHECK(j["kind"] == "mermin");
  CHECK(j["ratios"].size() == 2);
  CHECK(j["rho"]["re"].size() == 64);
  CHECK(j["rho"]["im"].size() == 64);
  const nlohmann::json p = pure_family_search(7, 2, BoundKind::MerminXY);
  CHECK(p["beta"].size() == 3);
  CHECK(p["t_star"].get<double>() == doctest::Approx(s.t_star).epsilon(1e-6));
}
