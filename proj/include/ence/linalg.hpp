// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <optional>
#include <string>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "ence/errors.hpp"
#include "ence/tolerances.hpp"

namespace ence {

using ComplexMatrix = Eigen::MatrixXcd;
using RealVector = Eigen::VectorXd;

// Max-norm of (M - M†); zero for exactly Hermitian input.
inline double herm_defect(const ComplexMatrix& m) {
  return (m - m.adjoint()).cwiseAbs().maxCoeff();
}

// Eigendecomposition of a Hermitian matrix, eigenvalues sorted descending.
// When vectors are requested, column k of *vectors belongs to values[k].
struct Spectrum {
  RealVector values;
  std::optional<ComplexMatrix> vectors;
};

inline Spectrum eig_hermitian(const ComplexMatrix& h, bool want_vectors = false) {
  if (h.rows() != h.cols())
    throw ArgumentError("NonSquare: matrix is " + std::to_string(h.rows()) + "x" +
                        std::to_string(h.cols()));
  if (h.rows() == 0) throw ArgumentError("NonSquare: matrix is empty");
  const double defect = herm_defect(h);
  if (!(defect <= tol::herm))
    throw NumericalError("NonHermitian: max deviation from adjoint is " +
                         std::to_string(defect));

  // Symmetrize before solving so the defect we just tolerated cannot leak
  // imaginary parts into the eigenvalues.
  const ComplexMatrix hs = (h + h.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(
      hs, want_vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success)
    throw NumericalError("IterationFailure: eigensolver did not converge");

  Spectrum out;
  out.values = solver.eigenvalues().reverse();
  if (want_vectors) out.vectors = solver.eigenvectors().rowwise().reverse();
  return out;
}

// f(H) = sum_{e_k > cutoff} f(e_k) |v_k><v_k| for a PSD matrix H, i.e. the
// matrix function restricted to the support of H.  Eigenvalues within
// tol::null_cutoff of zero (including the slightly negative ones positivity
// tolerates) contribute nothing, which encodes the 0^y := 0 convention and
// makes negative and fractional exponents safe on singular input.
inline ComplexMatrix pseudo_power(const ComplexMatrix& h, double y) {
  if (!std::isfinite(y))
    throw ArgumentError("BadParameter: exponent must be finite");
  Spectrum s = eig_hermitian(h, true);
  const double min_eig = s.values(s.values.size() - 1);
  // Positivity slack scales with the norm: solver jitter is relative, and
  // intermediate map images legitimately reach norms far above 1.  For
  // unit-norm input (density matrices) this is the plain -1e-10 bound.
  const double psd_slack = tol::psd * std::max(1.0, std::abs(s.values(0)));
  if (min_eig < -psd_slack)
    throw NumericalError("NotPSD: smallest eigenvalue is " + std::to_string(min_eig));

  const double cutoff = tol::null_cutoff(s.values(0));
  RealVector powered = RealVector::Zero(s.values.size());
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    if (s.values(k) > cutoff) powered(k) = std::pow(s.values(k), y);

  const ComplexMatrix& v = *s.vectors;
  return v * powered.asDiagonal() * v.adjoint();
}

// Principal square root of a PSD matrix.  Implemented as the support-
// restricted power 1/2: a plain eigenvalue sqrt would amplify kernel jitter
// delta into sqrt(delta), turning 1e-17 noise into 1e-9 eigenvalues.
inline ComplexMatrix psd_sqrt(const ComplexMatrix& h) {
  return pseudo_power(h, 0.5);
}

// Kronecker product; dimensions multiply.
inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  return Eigen::kroneckerProduct(a, b);
}

} // namespace ence
