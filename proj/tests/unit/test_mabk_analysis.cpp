#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "bellpoly/dense_oracle.hpp"
#include "bellpoly/errors.hpp"
#include "bellpoly/mabk_analysis.hpp"
#include "oracles.hpp"

using namespace bellpoly;

TEST_CASE("closed form expectations") {
  CHECK(expectation_closed_form(optimal_polygamous(7, 2), 2) == doctest::Approx(32.0 / 7.0));
  for (int N = 3; N <= 12; ++N) {
    CHECK(expectation_closed_form(optimal_polygamous(N, 0), 0) ==
          doctest::Approx(std::ldexp(1.0, N - 1)));
  }
  for (double alpha : {0.2, 0.6, 0.95}) {
    const double want = std::ldexp(1.0, 6) / std::sqrt(7.0) * alpha * std::sqrt(1 - alpha * alpha);
    CHECK(expectation_closed_form(hyper_pair_state(7, alpha), 1) == doctest::Approx(want));
  }
  CHECK_THROWS_AS(expectation_closed_form(optimal_polygamous(6, 0), 3), DomainError);
}

TEST_CASE("closed form matches the dense oracle including complex states") {
  std::mt19937_64 rng(99);
  for (int N = 2; N <= 7; ++N) {
    for (int k = 0; 2 * k < N; ++k) {
      std::vector<int> subset(static_cast<std::size_t>(N - k));
      for (int i = 0; i < N - k; ++i) subset[static_cast<std::size_t>(i)] = i + k;
      const auto op = dense::embed_on_subset(dense::mermin_operator_dense(N - k), N, subset);
      for (int t = 0; t < 10; ++t) {
        const auto st = oracle::random_state(N, rng);
        const double dense_value = op.expectation(dense::lift(st));
        CHECK(std::abs(expectation_closed_form(st, k) - dense_value) < 1e-10);
        CHECK(std::abs(sector_operator(N, k).expectation(st) - dense_value) < 1e-10);
      }
    }
  }
}

TEST_CASE("sector operator structure") {
  const auto op = sector_operator(5, 1);
  const double v = 8.0 / std::sqrt(5.0);
  CHECK(op.matrix(0, 4) == doctest::Approx(v));
  CHECK(op.matrix(4, 0) == doctest::Approx(v));
  CHECK(op.matrix(1, 5) == doctest::Approx(v));
  CHECK(op.matrix(5, 1) == doctest::Approx(v));
  CHECK((op.matrix.array() != 0.0).count() == 4);

  const auto ghz = sector_operator(9, 0);
  CHECK(ghz.matrix(0, 9) == doctest::Approx(256.0));  // 2^{N-1}, so GHZ gives 2^{N-1}
  CHECK((ghz.matrix.array() != 0.0).count() == 2);

  for (int N = 3; N <= 20; ++N) {
    for (int k = 0; 2 * k < N; ++k) {
      const auto m = sector_operator(N, k).matrix;
      CHECK((m - m.transpose()).norm() == 0.0);
      CHECK((m.array() != 0.0).count() == 2 * (k + 1));
    }
  }
  CHECK(sector_operator(7, 2).expectation(optimal_polygamous(7, 2)) ==
        doctest::Approx(32.0 / 7.0).epsilon(1e-12));
}

TEST_CASE("maximum violation") {
  const auto r51 = max_violation(5, 1, BoundKind::MabkRotated);
  CHECK(r51.ratio == doctest::Approx(std::pow(2.0, 1.5) / std::sqrt(5.0)));
  CHECK(r51.subsystem_count == 5.0);
  CHECK(max_violation(4, 1, BoundKind::MabkRotated).ratio == doctest::Approx(1.0));
  CHECK(max_violation(6, 2, BoundKind::MabkRotated).ratio ==
        doctest::Approx((8.0 / 3.0) / std::pow(2.0, 1.5)));

  std::mt19937_64 rng(1);
  for (int N = 3; N <= 14; ++N) {
    for (int k = 0; 2 * k < N; ++k) {
      const auto rep = max_violation(N, k, BoundKind::MabkRotated);
      // the largest eigenvalue of the sector operator is the maximum
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(sector_operator(N, k).matrix);
      CHECK(eig.eigenvalues().maxCoeff() == doctest::Approx(rep.quantum_value).epsilon(1e-12));
      CHECK(expectation_closed_form(optimal_polygamous(N, k), k) ==
            doctest::Approx(rep.quantum_value).epsilon(1e-12));
      CHECK(expectation_closed_form(optimal_polygamous(N, k, HalfRounding::Ceil), k) ==
            doctest::Approx(rep.quantum_value).epsilon(1e-12));
      for (int t = 0; t < 20; ++t) {
        CHECK(expectation_closed_form(oracle::random_state(N, rng), k) <= rep.quantum_value + 1e-9);
      }
      if (k % 2 == 1) {
        // superposition of the two odd-k maximizers
        const auto a = optimal_polygamous(N, k, HalfRounding::Floor).to_vector();
        const auto b = optimal_polygamous(N, k, HalfRounding::Ceil).to_vector();
        const Eigen::VectorXcd mix = 0.6 * a + 0.8 * b;
        const SymmetricState sup(N, std::vector<Complex>(mix.data(), mix.data() + mix.size()));
        CHECK(expectation_closed_form(sup, k) == doctest::Approx(rep.quantum_value).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("monotone hand-off between k values") {
  for (int N = 3; N <= 40; ++N) {
    for (int k = 1; 2 * k < N; ++k) {
      if (max_violation(N, k, BoundKind::MabkRotated).ratio <= 1.0) continue;
      for (int kp = 1; kp < k; ++kp) CHECK(max_violation(N, kp, BoundKind::MabkRotated).ratio > 1.0);
    }
  }
}

TEST_CASE("minimal N_k") {
  CHECK(minimal_Nk(1, BoundKind::MabkRotated) == 5);
  CHECK(minimal_Nk(2, BoundKind::MabkRotated) == 7);
  CHECK(minimal_Nk(3, BoundKind::MabkRotated) == 10);
  CHECK(minimal_Nk(4, BoundKind::MabkRotated) == 12);
  CHECK(minimal_Nk(12, BoundKind::MabkRotated) == 35);
  for (auto kind : {BoundKind::MabkRotated, BoundKind::MerminXY}) {
    for (int k = 1; k <= 60; ++k) CHECK(minimal_Nk(k, kind) == oracle::minimal_Nk(k, kind));
  }
  CHECK(minimal_Nk(50, BoundKind::MabkRotated) == 140);
  CHECK_THROWS_AS(minimal_Nk(0, BoundKind::MabkRotated), DomainError);
}

TEST_CASE("fit check") {
  const auto r12 = fit_check(12);
  REQUIRE(r12.rows.size() == 12);
  CHECK(r12.mismatches == std::vector<int>{1});
  CHECK(r12.rows[0].rounded == 4);
  CHECK(r12.rows[0].exact == 5);
  CHECK_FALSE(r12.rows[1].mismatch);
  CHECK(r12.rows[1].rounded == 7);
}

TEST_CASE("nonlocality sums") {
  for (int N = 3; N <= 40; ++N) {
    CHECK(nonlocality_sum(optimal_polygamous(N, 1), 1) ==
          doctest::Approx(std::ldexp(1.0, N - 2)).epsilon(1e-13));
    for (int k = 1; 2 * k < N; ++k) {
      const double s = nonlocality_sum(optimal_polygamous(N, k), k);
      const double g = ghz_nonlocality_sum(N, k);
      CHECK(g == std::ldexp(1.0, N - k - 1));
      if (k == 1) {
        CHECK(s == doctest::Approx(g).epsilon(1e-13));
      } else {
        CHECK(s > g * (1 + 1e-9));
      }
      // 2^{-(N-k+1)} C(N,k) A(ceil(k/2))^2
      const double a = coefficient_A(N, k, (k + 1) / 2);
      CHECK(s == doctest::Approx(std::ldexp(1.0, -(N - k + 1)) * binom_exact(N, k) * a * a)
                     .epsilon(1e-12));
    }
  }
  CHECK(nonlocality_sum(optimal_polygamous(7, 2), 2) == doctest::Approx(1344.0 / 49.0));
}

TEST_CASE("symmetrized values") {
  const auto v51 = symmetrized_values(5, 1);
  CHECK(v51.quantum_max == doctest::Approx(8 * std::sqrt(5.0)));
  CHECK(v51.classical_bound == doctest::Approx(std::sqrt(200.0)));
  CHECK(v51.ratio == doctest::Approx(1.26491).epsilon(1e-5));
  const auto v72 = symmetrized_values(7, 2);
  CHECK(v72.quantum_max == doctest::Approx(96.0));
  CHECK(v72.classical_bound == doctest::Approx(84.0));
  CHECK(v72.ratio == doctest::Approx(8.0 / 7.0));
  for (int N = 3; N <= 12; ++N) {
    const auto v0 = symmetrized_values(N, 0);
    CHECK(v0.quantum_max == doctest::Approx(std::ldexp(1.0, N - 1)));
    CHECK(v0.ratio == doctest::Approx(std::pow(2.0, (N - 1) / 2.0)));
    for (int k = 0; 2 * k < N; ++k) {
      CHECK(symmetrized_values(N, k).ratio ==
            doctest::Approx(max_violation(N, k, BoundKind::MabkRotated).ratio));
    }
  }
}
