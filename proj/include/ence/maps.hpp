// SPDX-License-Identifier: MIT
#pragma once

#include <cmath>
#include <string>

#include "ence/states.hpp"

namespace ence {

// Which map to apply and on which factor.  Transpose is the linear map
// (partial transposition); PowerMap is the nonlinear composition P_x of the
// two generalized-power steps with parameters x and 1/x on the same side,
// which fixes every state with a product eigenbasis.
struct EnceMapSpec {
  enum class Kind { Transpose, PowerMap };

  Kind kind = Kind::Transpose;
  Side side = Side::Right;
  double x = 2.0;  // only meaningful for PowerMap

  static EnceMapSpec transpose(Side s = Side::Right) {
    return EnceMapSpec{Kind::Transpose, s, 2.0};
  }
  static EnceMapSpec power(double x, Side s = Side::Right) {
    return EnceMapSpec{Kind::PowerMap, s, x};
  }
};

// x = 0 has no inverse parameter 1/x and x = 1 makes the map trivial, so
// both are rejected (within 1e-12, to catch near-misses from arithmetic).
inline void check_power_exponent(double x) {
  if (!std::isfinite(x))
    throw ArgumentError("BadParameter: map parameter x must be finite");
  if (std::abs(x) <= 1e-12 || std::abs(x - 1.0) <= 1e-12)
    throw ArgumentError("BadParameter: map parameter x must avoid 0 and 1, got " +
                        std::to_string(x));
}

// Image of a state under an EnCE map.  Still Hermitian, but PSD is not
// guaranteed (Transpose) and neither is unit trace (PowerMap), so this is
// deliberately not a DensityMatrix.
struct MappedState {
  std::vector<int> dims;
  ComplexMatrix matrix;
};

namespace detail {

inline void require_bipartite(const std::vector<int>& dims) {
  if (dims.size() != 2)
    throw ArgumentError("NotBipartite: operation needs dims of length 2, got " +
                        std::to_string(dims.size()));
}

// One generalized-power step on the raw matrix: for side Right,
// sqrt( M M† ) with M = rho (I ⊗ (Tr_A rho)^(x-1)); mirrored for Left.
// Works on unnormalized Hermitian PSD input so the two steps of P_x chain.
// The square root comes from the SVD of M itself (M = UΣV† gives
// sqrt(M M†) = UΣU†): forming M M† would square the dynamic range, pushing
// genuine small singular values below the null cutoff and silently dropping
// spectral weight the measures must see.
inline ComplexMatrix gamma_step(const ComplexMatrix& rho,
                                const std::vector<int>& dims, Side side,
                                double x) {
  const int da = dims[0], db = dims[1];
  ComplexMatrix weighted;
  if (side == Side::Right) {
    const ComplexMatrix marginal = partial_trace_matrix(rho, dims, {0});
    weighted = rho * kron(ComplexMatrix::Identity(da, da),
                          pseudo_power(marginal, x - 1.0));
  } else {
    const ComplexMatrix marginal = partial_trace_matrix(rho, dims, {1});
    weighted = rho * kron(pseudo_power(marginal, x - 1.0),
                          ComplexMatrix::Identity(db, db));
  }
  Eigen::JacobiSVD<ComplexMatrix> svd(weighted, Eigen::ComputeFullU);
  RealVector sigma = svd.singularValues();
  const double cutoff = tol::null_cutoff(sigma.size() > 0 ? sigma(0) : 0.0);
  for (Eigen::Index k = 0; k < sigma.size(); ++k)
    if (sigma(k) <= cutoff) sigma(k) = 0.0;  // keep exact kernels exact
  const Eigen::VectorXcd diag = sigma.cast<std::complex<double>>();
  return svd.matrixU() * diag.asDiagonal() * svd.matrixU().adjoint();
}

} // namespace detail

// Transposition of the chosen factor's indices; spectrum of the image can
// pick up negative eigenvalues, which is exactly the detection signal.
inline MappedState partial_transpose(const DensityMatrix& rho, Side side) {
  detail::require_bipartite(rho.dims);
  const int da = rho.dims[0], db = rho.dims[1];
  ComplexMatrix out(rho.matrix.rows(), rho.matrix.cols());
  if (side == Side::Right) {
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < da; ++b)
        out.block(a * db, b * db, db, db) =
            rho.matrix.block(a * db, b * db, db, db).transpose();
  } else {
    for (int a = 0; a < da; ++a)
      for (int b = 0; b < da; ++b)
        out.block(a * db, b * db, db, db) =
            rho.matrix.block(b * db, a * db, db, db);
  }
  return MappedState{rho.dims, std::move(out)};
}

// Single generalized-power map Γ_x.  Any finite x is allowed here; the
// marginal's kernel is handled by the support convention of pseudo_power.
inline MappedState gamma_x(const DensityMatrix& rho, Side side, double x) {
  detail::require_bipartite(rho.dims);
  if (!std::isfinite(x))
    throw ArgumentError("BadParameter: map parameter x must be finite");
  return MappedState{rho.dims, detail::gamma_step(rho.matrix, rho.dims, side, x)};
}

// P_x = Γ_{1/x} ∘ Γ_x on one side.  Fixes every state with a product
// eigenbasis; a changed spectrum therefore witnesses nonclassical
// correlation.  The trace of the image is not preserved in general.
inline MappedState p_x(const DensityMatrix& rho, Side side, double x) {
  detail::require_bipartite(rho.dims);
  check_power_exponent(x);
  const ComplexMatrix first = detail::gamma_step(rho.matrix, rho.dims, side, x);
  return MappedState{rho.dims,
                     detail::gamma_step(first, rho.dims, side, 1.0 / x)};
}

// Dispatcher used by the measures layer.
inline MappedState apply_ence(const DensityMatrix& rho, const EnceMapSpec& spec) {
  if (spec.kind == EnceMapSpec::Kind::Transpose)
    return partial_transpose(rho, spec.side);
  return p_x(rho, spec.side, spec.x);
}

} // namespace ence
