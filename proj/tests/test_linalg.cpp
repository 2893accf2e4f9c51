// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "ence/linalg.hpp"

using namespace ence;

namespace {

ComplexMatrix random_matrix(long d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix m(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) m(r, c) = std::complex<double>(gauss(rng), gauss(rng));
  return m;
}

ComplexMatrix random_hermitian(long d, std::mt19937_64& rng) {
  ComplexMatrix m = random_matrix(d, rng);
  return (m + m.adjoint()) / 2.0;
}

ComplexMatrix random_psd(long d, std::mt19937_64& rng) {
  ComplexMatrix a = random_matrix(d, rng);
  return a * a.adjoint();
}

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("eig_hermitian on known matrices") {
  const Spectrum id = eig_hermitian(ComplexMatrix::Identity(2, 2));
  REQUIRE(id.values(0) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(id.values(1) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE_FALSE(id.vectors.has_value());

  ComplexMatrix pauli_x(2, 2);
  pauli_x << 0, 1, 1, 0;
  const Spectrum sx = eig_hermitian(pauli_x);
  REQUIRE(sx.values(0) == Catch::Approx(1.0).margin(1e-14));
  REQUIRE(sx.values(1) == Catch::Approx(-1.0).margin(1e-14));
}

TEST_CASE("eig_hermitian reconstruction, ordering, orthonormality") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 500; ++trial) {
    const long d = 1 + static_cast<long>(rng() % 16);
    const ComplexMatrix h = random_hermitian(d, rng);
    const Spectrum s = eig_hermitian(h, true);
    REQUIRE(s.vectors.has_value());

    for (long k = 0; k + 1 < d; ++k) REQUIRE(s.values(k) >= s.values(k + 1));

    const ComplexMatrix& v = *s.vectors;
    ComplexMatrix rebuilt = v * s.values.asDiagonal() * v.adjoint();
    REQUIRE(max_abs(rebuilt - h) <= 1e-10);
    REQUIRE(max_abs(v.adjoint() * v - ComplexMatrix::Identity(d, d)) <= tol::orth);
  }
}

TEST_CASE("spectrum is invariant under unitary conjugation and transposition") {
  std::mt19937_64 rng(202);
  for (int trial = 0; trial < 50; ++trial) {
    const long d = 2 + static_cast<long>(rng() % 7);
    const ComplexMatrix h = random_hermitian(d, rng);

    // QR of a Ginibre matrix gives a unitary; good enough for conjugation.
    Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d, rng));
    const ComplexMatrix u = qr.householderQ();

    const RealVector base = eig_hermitian(h).values;
    const RealVector conj = eig_hermitian(u * h * u.adjoint()).values;
    const RealVector trans = eig_hermitian(h.transpose()).values;
    REQUIRE((base - conj).cwiseAbs().maxCoeff() <= 1e-10);
    REQUIRE((base - trans).cwiseAbs().maxCoeff() <= 1e-10);
  }
}

TEST_CASE("eig_hermitian input checking") {
  REQUIRE_THROWS_AS(eig_hermitian(ComplexMatrix::Zero(2, 3)), ArgumentError);
  REQUIRE_THROWS_AS(eig_hermitian(ComplexMatrix::Zero(0, 0)), ArgumentError);

  ComplexMatrix skew(2, 2);
  skew << 0, 1, 0, 0;  // far from Hermitian
  REQUIRE_THROWS_AS(eig_hermitian(skew), NumericalError);

  // A defect within tolerance is symmetrized away rather than rejected.
  ComplexMatrix nearly = ComplexMatrix::Identity(2, 2);
  nearly(0, 1) = std::complex<double>(0.0, 5e-10);
  REQUIRE_NOTHROW(eig_hermitian(nearly));
}

TEST_CASE("psd_sqrt on known matrices") {
  REQUIRE(max_abs(psd_sqrt(ComplexMatrix::Identity(3, 3)) -
                  ComplexMatrix::Identity(3, 3)) <= 1e-14);

  ComplexMatrix diag49 = ComplexMatrix::Zero(2, 2);
  diag49(0, 0) = 4.0;
  diag49(1, 1) = 9.0;
  ComplexMatrix expected = ComplexMatrix::Zero(2, 2);
  expected(0, 0) = 2.0;
  expected(1, 1) = 3.0;
  REQUIRE(max_abs(psd_sqrt(diag49) - expected) <= 1e-14);
}

TEST_CASE("psd_sqrt squares back to the input") {
  std::mt19937_64 rng(303);
  for (int trial = 0; trial < 100; ++trial) {
    const long d = 1 + static_cast<long>(rng() % 8);
    const ComplexMatrix h = random_psd(d, rng);
    const ComplexMatrix s = psd_sqrt(h);
    REQUIRE(herm_defect(s) <= 1e-12);
    REQUIRE(eig_hermitian(s).values(d - 1) >= -tol::psd);
    REQUIRE(max_abs(s * s - h) <= 1e-10 * std::max(1.0, max_abs(h)));
  }
}

TEST_CASE("psd_sqrt rejects indefinite input") {
  ComplexMatrix indef = ComplexMatrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1.0;
  REQUIRE_THROWS_AS(psd_sqrt(indef), NumericalError);
  REQUIRE_THROWS_WITH(psd_sqrt(indef), Catch::Matchers::StartsWith("NotPSD"));
}

TEST_CASE("pseudo_power on known matrices keeps the kernel at zero") {
  ComplexMatrix h = ComplexMatrix::Zero(2, 2);
  h(0, 0) = 0.5;

  ComplexMatrix inv = pseudo_power(h, -1.0);
  REQUIRE(inv(0, 0).real() == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(std::abs(inv(1, 1)) == 0.0);

  h(1, 1) = 0.5;
  inv = pseudo_power(h, -1.0);
  REQUIRE(inv(0, 0).real() == Catch::Approx(2.0).margin(1e-14));
  REQUIRE(inv(1, 1).real() == Catch::Approx(2.0).margin(1e-14));

  ComplexMatrix g = ComplexMatrix::Zero(2, 2);
  g(0, 0) = 0.25;
  g(1, 1) = 0.75;
  const ComplexMatrix sq = pseudo_power(g, 2.0);
  REQUIRE(sq(0, 0).real() == Catch::Approx(0.0625).margin(1e-14));
  REQUIRE(sq(1, 1).real() == Catch::Approx(0.5625).margin(1e-14));
}

TEST_CASE("pseudo_power round trips on the support") {
  // Spectra are kept in [0.1, 1] so that no power of an eigenvalue dips under
  // the support cutoff; what is being tested is the round trip, not the
  // (intentional) erasure of ill-conditioned directions.
  std::mt19937_64 rng(404);
  std::uniform_real_distribution<double> unif(0.1, 1.0);
  for (double y : {2.0, 3.0, -1.0, 0.5}) {
    for (int trial = 0; trial < 25; ++trial) {
      const long d = 2 + static_cast<long>(rng() % 5);
      Eigen::HouseholderQR<ComplexMatrix> qr(random_matrix(d, rng));
      const ComplexMatrix u = qr.householderQ();
      RealVector vals(d);
      for (long k = 0; k < d; ++k) vals(k) = unif(rng);
      const ComplexMatrix h = u * vals.asDiagonal() * u.adjoint();

      REQUIRE(max_abs(pseudo_power(h, 1.0) - h) <= 1e-10);
      const ComplexMatrix round = pseudo_power(pseudo_power(h, y), 1.0 / y);
      REQUIRE(max_abs(round - h) <= 1e-8);

      // Same with a forced kernel: the zero eigenvalue must stay exactly zero.
      RealVector with_kernel = vals;
      with_kernel(d - 1) = 0.0;
      const ComplexMatrix rank_def = u * with_kernel.asDiagonal() * u.adjoint();
      const ComplexMatrix mapped = pseudo_power(rank_def, y);
      const RealVector mapped_vals = eig_hermitian(mapped).values;
      REQUIRE(std::abs(mapped_vals(d - 1)) <= 1e-10);
    }
  }
}

TEST_CASE("pseudo_power parameter and positivity checks") {
  const ComplexMatrix id = ComplexMatrix::Identity(2, 2);
  REQUIRE_THROWS_AS(pseudo_power(id, std::nan("")), ArgumentError);

  ComplexMatrix indef = ComplexMatrix::Zero(2, 2);
  indef(0, 0) = 1.0;
  indef(1, 1) = -1e-3;
  REQUIRE_THROWS_AS(pseudo_power(indef, 2.0), NumericalError);

  // Slightly negative within the positivity slack is clamped, not rejected.
  indef(1, 1) = -1e-11;
  REQUIRE_NOTHROW(pseudo_power(indef, 0.5));
  REQUIRE(std::abs(pseudo_power(indef, 0.5)(1, 1)) == 0.0);
}

TEST_CASE("kron matches the index formula") {
  REQUIRE(max_abs(kron(ComplexMatrix::Identity(2, 2), ComplexMatrix::Identity(2, 2)) -
                  ComplexMatrix::Identity(4, 4)) == 0.0);

  ComplexMatrix x(2, 2);
  x << 0, 1, 1, 0;
  ComplexMatrix d10 = ComplexMatrix::Zero(2, 2);
  d10(0, 0) = 1.0;
  ComplexMatrix expected = ComplexMatrix::Zero(4, 4);
  expected(0, 2) = 1.0;
  expected(2, 0) = 1.0;
  REQUIRE(max_abs(kron(x, d10) - expected) == 0.0);

  std::mt19937_64 rng(505);
  const ComplexMatrix a = random_matrix(2, rng);
  const ComplexMatrix b = random_matrix(3, rng);
  const ComplexMatrix k = kron(a, b);
  REQUIRE(k.rows() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int p = 0; p < 3; ++p)
        for (int q = 0; q < 3; ++q)
          REQUIRE(std::abs(k(i * 3 + p, j * 3 + q) - a(i, j) * b(p, q)) == 0.0);
}
