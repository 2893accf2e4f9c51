// SPDX-License-Identifier: MIT
#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "ence/maps.hpp"

namespace ence {

enum class MeasureKind { D, Q, QTilde, Weighted };

// Side of a reported value: Right/Left for single-sided measures, Average
// for the two-sided mean, None where sides do not apply (weighted sums).
enum class SideTag { Right, Left, Average, None };

// Weighted combination w_T * Qtilde(Transpose) + sum_k w_k * Qtilde(P_{x_k}).
struct WeightedMeasureSpec {
  struct Term {
    EnceMapSpec::Kind kind = EnceMapSpec::Kind::Transpose;
    double x = 2.0;  // PowerMap parameter; ignored for Transpose terms
    double weight = 1.0;
  };
  std::vector<Term> terms;
};

struct MeasureResult {
  MeasureKind measure = MeasureKind::D;
  EnceMapSpec map;  // the map evaluated; unused when measure == Weighted
  std::optional<WeightedMeasureSpec> weights;  // set only for Weighted
  SideTag side = SideTag::Right;
  double value = 0.0;
  // Input spectrum and image spectrum, descending, signed; for the Q family
  // the descending absolute image values (the actual formula input) are kept
  // separately.  Two-sided results record the Right image spectra.
  RealVector spectrum_in;
  RealVector spectrum_out;
  RealVector spectrum_out_abs;
};

namespace detail {

// Descending eigenvalues with the support convention applied: entries within
// tol::null_cutoff of zero become exact zeros.  Without this, sqrt terms in
// the fidelity turn O(1e-17) solver jitter into O(1e-9) measure noise.
inline RealVector clamped_eigenvalues(const ComplexMatrix& m) {
  RealVector v = eig_hermitian(m, false).values;
  if (v.size() == 0) return v;
  const double cutoff = tol::null_cutoff(v.cwiseAbs().maxCoeff());
  for (Eigen::Index k = 0; k < v.size(); ++k)
    if (std::abs(v(k)) <= cutoff) v(k) = 0.0;
  return v;
}

inline SideTag to_tag(Side s) {
  return s == Side::Right ? SideTag::Right : SideTag::Left;
}

inline double finalize_value(double v, const char* what) {
  if (!std::isfinite(v))
    throw NumericalError(std::string("NumericRange: ") + what + " is not finite");
  if (v < 0.0) {
    if (v < -tol::value_clamp)
      throw NumericalError(std::string("NumericRange: ") + what +
                           " is negative beyond tolerance: " + std::to_string(v));
    return 0.0;
  }
  return v == 0.0 ? 0.0 : v;  // -log2(1) lands on negative zero
}

} // namespace detail

// D: L1 distance between the descending input spectrum and the descending
// (signed) image spectrum.  Zero on every state with a product eigenbasis;
// zero does NOT certify one.
inline MeasureResult measure_D(const DensityMatrix& rho, const EnceMapSpec& spec) {
  MeasureResult res;
  res.measure = MeasureKind::D;
  res.map = spec;
  res.side = detail::to_tag(spec.side);
  res.spectrum_in = detail::clamped_eigenvalues(rho.matrix);
  const MappedState image = apply_ence(rho, spec);
  res.spectrum_out = detail::clamped_eigenvalues(image.matrix);
  res.value = detail::finalize_value(
      (res.spectrum_in - res.spectrum_out).lpNorm<1>(), "D value");
  return res;
}

// Q: -log2 of the normalized spectral fidelity sum_s sqrt(e_s * et_s) / N,
// where et is the descending sequence of absolute image eigenvalues and
// N = sqrt(sum et).  Nonnegative by Cauchy-Schwarz; zero whenever the image
// spectrum is proportional to the input spectrum.
inline MeasureResult measure_Q(const DensityMatrix& rho, const EnceMapSpec& spec) {
  MeasureResult res;
  res.measure = MeasureKind::Q;
  res.map = spec;
  res.side = detail::to_tag(spec.side);

  RealVector e = detail::clamped_eigenvalues(rho.matrix);
  for (Eigen::Index k = 0; k < e.size(); ++k)
    if (e(k) < 0.0) e(k) = 0.0;  // positivity slack must not reach the sqrt
  res.spectrum_in = e;

  const MappedState image = apply_ence(rho, spec);
  res.spectrum_out = detail::clamped_eigenvalues(image.matrix);
  RealVector et = res.spectrum_out.cwiseAbs();
  std::sort(et.data(), et.data() + et.size(), std::greater<double>());
  res.spectrum_out_abs = et;

  const double nsq = et.sum();
  if (!(nsq > 0.0))
    throw NumericalError("DegenerateImage: image spectrum sums to zero");
  double fid = 0.0;
  for (Eigen::Index k = 0; k < e.size(); ++k) fid += std::sqrt(e(k) * et(k));
  fid /= std::sqrt(nsq);
  res.value = detail::finalize_value(-std::log2(fid), "Q value");
  return res;
}

// Qtilde: arithmetic mean of the Right and Left Q values for the given map
// kind (the side field of `spec` is ignored).  Recorded spectra are the
// Right-side ones.
inline MeasureResult measure_Q_tilde(const DensityMatrix& rho,
                                     const EnceMapSpec& spec) {
  EnceMapSpec right = spec;
  right.side = Side::Right;
  EnceMapSpec left = spec;
  left.side = Side::Left;
  MeasureResult res = measure_Q(rho, right);
  const MeasureResult l = measure_Q(rho, left);
  res.measure = MeasureKind::QTilde;
  res.side = SideTag::Average;
  res.value = detail::finalize_value((res.value + l.value) / 2.0, "Qtilde value");
  return res;
}

// Nonnegative linear combination of Qtilde values; nonzero as soon as any
// component is.
inline MeasureResult weighted_measure(const DensityMatrix& rho,
                                      const WeightedMeasureSpec& spec) {
  if (spec.terms.empty())
    throw ArgumentError("EmptySpec: weighted measure needs at least one term");
  for (const auto& term : spec.terms) {
    if (!(term.weight > 0.0))
      throw ArgumentError("BadParameter: weights must be positive, got " +
                          std::to_string(term.weight));
    if (term.kind == EnceMapSpec::Kind::PowerMap) check_power_exponent(term.x);
  }

  MeasureResult res;
  res.measure = MeasureKind::Weighted;
  res.weights = spec;
  res.side = SideTag::None;
  res.spectrum_in = detail::clamped_eigenvalues(rho.matrix);
  double value = 0.0;
  for (const auto& term : spec.terms) {
    EnceMapSpec map_spec;
    map_spec.kind = term.kind;
    map_spec.x = term.x;
    value += term.weight * measure_Q_tilde(rho, map_spec).value;
  }
  res.value = detail::finalize_value(value, "weighted value");
  return res;
}

} // namespace ence
