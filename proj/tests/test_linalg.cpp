#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "netbound/error.hpp"
#include "netbound/linalg.hpp"
#include "oracles.hpp"

using namespace netbound;

namespace {

const ComplexMatrix kZ{{1.0, 0.0}, {0.0, -1.0}};
const ComplexMatrix kX{{0.0, 1.0}, {1.0, 0.0}};

// Appendix-style amplitude damping Choi matrix, written out by hand.
HermitianMatrix ad_choi(double l) {
  const double s = std::sqrt(1.0 - l);
  ComplexMatrix m(4, 4);
  m(0, 0) = 0.5;
  m(0, 3) = m(3, 0) = 0.5 * s;
  m(2, 2) = 0.5 * l;
  m(3, 3) = 0.5 * (1.0 - l);
  return HermitianMatrix(m);
}

HermitianMatrix ket0() { return HermitianMatrix(ComplexMatrix{{1.0, 0.0}, {0.0, 0.0}}); }

}  // namespace

TEST_CASE("kron") {
  CHECK(kron(ComplexMatrix::identity(2), ComplexMatrix::identity(2)) == ComplexMatrix::identity(4));
  const auto zi = kron(kZ, ComplexMatrix::identity(2));
  const double diag[] = {1.0, 1.0, -1.0, -1.0};
  CHECK(zi == ComplexMatrix::diagonal(diag));
  const auto shape = kron(ComplexMatrix(2, 3), ComplexMatrix(2, 2));
  CHECK(shape.rows() == 4);
  CHECK(shape.cols() == 6);
}

TEST_CASE("partial trace") {
  const auto half = HermitianMatrix(ComplexMatrix::identity(2)) * 0.5;
  CHECK(oracle::max_diff(partial_trace(oracle::psi2(), 2, 2, Subsystem::B).matrix(), half.matrix()) < 1e-15);
  CHECK(oracle::max_diff(partial_trace(ad_choi(0.5), 2, 2, Subsystem::B).matrix(), half.matrix()) < 1e-15);

  std::mt19937_64 rng(1);
  const auto x = oracle::random_hermitian(rng, 2);
  const auto y = oracle::random_hermitian(rng, 3);
  const HermitianMatrix xy(kron(x.matrix(), y.matrix()));
  CHECK(oracle::max_diff(partial_trace(xy, 2, 3, Subsystem::B).matrix(),
                         (x * y.trace()).matrix()) < 1e-12);
  CHECK(oracle::max_diff(partial_trace(xy, 2, 3, Subsystem::A).matrix(),
                         (y * x.trace()).matrix()) < 1e-12);
  CHECK_THROWS_AS(partial_trace(xy, 2, 2, Subsystem::B), Error);
}

TEST_CASE("partial transpose") {
  std::mt19937_64 rng(2);
  for (auto [da, db] : {std::pair{2, 2}, std::pair{2, 3}, std::pair{3, 2}}) {
    const auto m = oracle::random_hermitian(rng, da * db);
    const auto twice = partial_transpose(partial_transpose(m, da, db), da, db);
    CHECK(oracle::max_diff(twice.matrix(), m.matrix()) < 1e-15);
  }
  const auto x = oracle::random_hermitian(rng, 2);
  const auto y = oracle::random_hermitian(rng, 3);
  const HermitianMatrix xy(kron(x.matrix(), y.matrix()));
  CHECK(oracle::max_diff(partial_transpose(xy, 2, 3).matrix(),
                         kron(x.matrix(), y.matrix().transpose())) < 1e-15);

  const auto ev = eigenvalues(partial_transpose(oracle::psi2(), 2, 2));
  CHECK(ev[0] == doctest::Approx(-0.5).epsilon(1e-12));
  for (int i = 1; i < 4; ++i) CHECK(ev[i] == doctest::Approx(0.5).epsilon(1e-12));

  // Transposing A instead of B gives the full transpose of PT_B, same spectrum.
  const auto m = oracle::random_hermitian(rng, 6);
  const auto a = eigenvalues(partial_transpose(m, 2, 3, Subsystem::A));
  const auto b = eigenvalues(partial_transpose(m, 2, 3, Subsystem::B));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-10));
}

TEST_CASE("eigendecomposition") {
  const auto z = eigenvalues(HermitianMatrix(kZ));
  CHECK(z[0] == doctest::Approx(-1.0));
  CHECK(z[1] == doctest::Approx(1.0));
  for (double v : eigenvalues(HermitianMatrix(ComplexMatrix::identity(4)) * 0.25)) CHECK(v == 0.25);

  const auto ad = eigenvalues(ad_choi(0.5));
  const double expected[] = {0.0, 0.0, 0.25, 0.75};
  for (int i = 0; i < 4; ++i) CHECK(ad[i] == doctest::Approx(expected[i]).epsilon(1e-12));

  SUBCASE("known spectrum by construction") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> unit(-2.0, 2.0);
    for (std::size_t n = 1; n <= 8; ++n) {
      std::vector<double> vals(n);
      for (auto& v : vals) v = unit(rng);
      const auto u = oracle::random_unitary(rng, n);
      const HermitianMatrix m(u * ComplexMatrix::diagonal(vals) * u.adjoint());
      std::sort(vals.begin(), vals.end());
      const auto got = eigenvalues(m);
      for (std::size_t i = 0; i < n; ++i) CHECK(got[i] == doctest::Approx(vals[i]).epsilon(1e-10));
    }
  }

  SUBCASE("reconstruction and trace") {
    std::mt19937_64 rng(4);
    for (int trial = 0; trial < 50; ++trial) {
      const std::size_t n = 1 + trial % 8;
      const auto m = oracle::random_hermitian(rng, n);
      const auto e = eig_hermitian(m);
      const auto rebuilt = e.vectors * ComplexMatrix::diagonal(e.values) * e.vectors.adjoint();
      CHECK(oracle::max_diff(rebuilt, m.matrix()) <= 1e-10);
      double sum = 0.0;
      for (double v : e.values) sum += v;
      CHECK(std::abs(sum - m.trace()) <= 1e-10);
      CHECK(std::is_sorted(e.values.begin(), e.values.end()));
    }
  }

  SUBCASE("degenerate and zero matrices") {
    CHECK(eigenvalues(HermitianMatrix(ComplexMatrix(3, 3))) == std::vector<double>{0.0, 0.0, 0.0});
    const auto ev = eigenvalues(HermitianMatrix(kron(kX, kX)));
    CHECK(ev[0] == doctest::Approx(-1.0));
    CHECK(ev[3] == doctest::Approx(1.0));
  }
}

TEST_CASE("hermitian validation") {
  CHECK_THROWS_AS(HermitianMatrix(ComplexMatrix{{0.0, 1.0}, {0.0, 0.0}}), Error);
  CHECK_THROWS_AS(ComplexMatrix({{std::numeric_limits<double>::quiet_NaN(), 0.0}}), Error);
  try {
    BipartiteState::density(HermitianMatrix(ComplexMatrix::identity(4)), 2, 2);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InvalidArgument);
  }
  try {
    BipartiteState(HermitianMatrix(ComplexMatrix::identity(4)), 2, 3);
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::DimensionMismatch);
  }
  const auto ok = BipartiteState::density(oracle::psi2(), 2, 2);
  CHECK(ok.normalized());
  CHECK(ok.positive());
}

TEST_CASE("dmax examples") {
  std::mt19937_64 rng(5);
  const auto rho = oracle::random_state(rng, 4);
  CHECK(std::abs(dmax(rho, rho)) <= 1e-10);
  const auto half = HermitianMatrix(ComplexMatrix::identity(2)) * 0.5;
  CHECK(dmax(ket0(), half) == doctest::Approx(1.0).epsilon(1e-12));
  const auto quarter = HermitianMatrix(ComplexMatrix::identity(4)) * 0.25;
  CHECK(dmax(oracle::psi2(), quarter) == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(dmax(oracle::psi2(), quarter) == doctest::Approx(oracle::dmax_scan(oracle::psi2(), quarter)).epsilon(1e-9));
  CHECK(std::isinf(dmax(half, ket0())));
  CHECK(dmax(ket0(), ket0()) == doctest::Approx(0.0));
  CHECK_THROWS_AS(dmax(half, quarter), Error);
}

TEST_CASE("dmax agrees with a bisection scan") {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 40; ++i) {
    const std::size_t n = i % 2 ? 4 : 6;
    const auto rho = oracle::random_state(rng, n);
    const auto sigma = oracle::random_state(rng, n);
    CHECK(dmax(rho, sigma) == doctest::Approx(oracle::dmax_scan(rho, sigma)).epsilon(1e-8));
  }
  // Rank-deficient sigma with rho inside its support.
  const auto quarter = HermitianMatrix(ComplexMatrix::identity(4)) * 0.25;
  const auto mixed = oracle::psi2() * 0.5 + quarter * 0.5;
  const auto rank1_in = oracle::psi2();
  CHECK(dmax(rank1_in, mixed) == doctest::Approx(std::log2(1.0 / (0.5 + 0.125))).epsilon(1e-10));
}

TEST_CASE("relative entropy") {
  std::mt19937_64 rng(7);
  const auto half = HermitianMatrix(ComplexMatrix::identity(2)) * 0.5;
  CHECK(relative_entropy(ket0(), half) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(std::isinf(relative_entropy(half, ket0())));
  for (int i = 0; i < 200; ++i) {
    const std::size_t n = i % 2 ? 4 : 6;
    const auto rho = oracle::random_state(rng, n);
    const auto sigma = oracle::random_state(rng, n);
    const double s = relative_entropy(rho, sigma);
    CHECK(std::abs(relative_entropy(rho, rho)) <= 1e-9);
    CHECK(s >= 0.0);
    CHECK(s <= dmax(rho, sigma) + 1e-9);
    const auto u = oracle::random_unitary(rng, n);
    CHECK(std::abs(relative_entropy(conjugate(rho, u), conjugate(sigma, u)) - s) <= 1e-9);
    CHECK(std::abs(dmax(conjugate(rho, u), conjugate(sigma, u)) - dmax(rho, sigma)) <= 1e-9);
  }
}

TEST_CASE("dmax quasi-convexity") {
  std::mt19937_64 rng(8);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = i % 2 ? 4 : 6;
    const auto r1 = oracle::random_state(rng, n), s1 = oracle::random_state(rng, n);
    const auto r2 = oracle::random_state(rng, n), s2 = oracle::random_state(rng, n);
    const double p = unit(rng);
    const double mixed = dmax(p * r1 + (1 - p) * r2, p * s1 + (1 - p) * s2);
    CHECK(mixed <= std::max(dmax(r1, s1), dmax(r2, s2)) + 1e-9);
  }
}

TEST_CASE("bipartite overloads match") {
  const auto rho = BipartiteState::density(oracle::psi2(), 2, 2);
  const auto sigma = BipartiteState::density(HermitianMatrix(ComplexMatrix::identity(4)) * 0.25, 2, 2);
  CHECK(dmax(rho, sigma) == doctest::Approx(2.0));
  CHECK(relative_entropy(rho, sigma) == doctest::Approx(2.0));
  const auto other = BipartiteState::density(HermitianMatrix(ComplexMatrix::identity(4)) * 0.25, 1, 4);
  CHECK_THROWS_AS(dmax(rho, other), Error);
}
