// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>

// Every numerical threshold in the library, in one place.  These are part of
// the observable contract (validation accepts/rejects against them), so they
// are constants, not knobs; the only runtime-tunable value is the detection
// threshold, which the CLI may override per invocation.
namespace ence::tol {

// Hermiticity: max-norm of (M - M†) a density matrix may carry.
inline constexpr double herm = 1e-9;

// Trace: |tr(rho) - 1| allowed for a density matrix.
inline constexpr double trace = 1e-9;

// Positivity: eigenvalues down to -psd count as zero, anything below is
// rejected as not positive semidefinite.
inline constexpr double psd = 1e-10;

// Reconstruction residual allowed for V diag(e) V† round trips.
inline constexpr double recon = 1e-9;

// Orthonormality defect allowed for eigenvector bases and unitaries.
inline constexpr double orth = 1e-8;

// Support cutoff scale: eigenvalues within null_scale * max(|lambda|_max, 1)
// of zero are treated as exact zeros, i.e. outside the support.  Matrix
// functions (pseudo powers, square roots) and measure spectra all use this
// one convention; it is what keeps sqrt() from amplifying eigensolver jitter
// (~1e-17) into visible noise (~1e-9 after a square root).
inline constexpr double null_scale = 1e-12;

// Default detection threshold: a measure value above this counts as a
// nonclassical-correlation signal.
inline constexpr double detect = 1e-7;

// Relative spectral-gap floor below which the product-eigenbasis oracle
// refuses to classify (degenerate eigenvectors are not unique, so any
// verdict from them would be gauge-dependent).
inline constexpr double pe_gap = 1e-8;

// Product test: largest Schmidt coefficient of a unit vector must reach
// 1 - schmidt_one for the vector to count as a product vector.
inline constexpr double schmidt_one = 1e-9;

// Overlap bands for clustering local factors: |<u|v>| >= 1 - cluster_equal
// means same ray, <= cluster_orth means orthogonal, anything between is a
// structural failure (not a product eigenbasis).
inline constexpr double cluster_equal = 1e-9;
inline constexpr double cluster_orth = 1e-9;

// Measure values in [-value_clamp, 0) are rounded up to exactly 0; more
// negative values are reported as numerical failures.
inline constexpr double value_clamp = 1e-12;

// Minimum pairwise gap enforced when sampling nondegenerate spectra.
inline constexpr double sample_gap = 1e-4;

inline double null_cutoff(double max_abs_eig) {
  return null_scale * std::max(max_abs_eig, 1.0);
}

} // namespace ence::tol
