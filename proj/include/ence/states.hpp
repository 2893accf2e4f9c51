// SPDX-License-Identifier: MIT
#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ence/linalg.hpp"

namespace ence {

// Which tensor factor of a bipartite state an operation acts on:
// Left is the first factor (A), Right the second (B).
enum class Side { Left, Right };

// A validated quantum state: the matrix plus the subsystem structure that
// gives its indices meaning.  Subsystem ordering is row-major, leftmost
// subsystem most significant.  Bipartite operations read dims of length 2
// as (A, B).
struct DensityMatrix {
  std::vector<int> dims;
  ComplexMatrix matrix;

  int total_dim() const {
    int d = 1;
    for (int k : dims) d *= k;
    return d;
  }
  int subsystem_count() const { return static_cast<int>(dims.size()); }
};

namespace detail {

inline void check_dims(const std::vector<int>& dims) {
  if (dims.empty())
    throw ValidationError("DimMismatch: subsystem dimension list is empty");
  for (int d : dims)
    if (d < 1)
      throw ValidationError("DimMismatch: subsystem dimensions must be positive");
}

// Row-major flat-index strides for a dimension list.
inline std::vector<long> strides(const std::vector<int>& dims) {
  std::vector<long> s(dims.size(), 1);
  for (int k = static_cast<int>(dims.size()) - 2; k >= 0; --k)
    s[k] = s[k + 1] * dims[k + 1];
  return s;
}

// Flat offsets spanned by the listed subsystems (all others held at index 0),
// enumerated row-major in the listed order.  Listing every subsystem once
// yields a full permutation table: entry n is the old flat index of new
// flat index n.
inline std::vector<long> group_offsets(const std::vector<int>& dims,
                                       const std::vector<long>& strd,
                                       const std::vector<int>& group) {
  std::vector<long> offs{0};
  for (int k : group) {
    std::vector<long> next;
    next.reserve(offs.size() * static_cast<std::size_t>(dims[k]));
    for (long base : offs)
      for (int i = 0; i < dims[k]; ++i) next.push_back(base + i * strd[k]);
    offs = std::move(next);
  }
  return offs;
}

inline void check_subsystem_indices(const std::vector<int>& group, int m,
                                    const char* what) {
  std::vector<bool> seen(static_cast<std::size_t>(m), false);
  for (int k : group) {
    if (k < 0 || k >= m)
      throw ArgumentError(std::string("BadIndex: ") + what + " index " +
                          std::to_string(k) + " out of range for " +
                          std::to_string(m) + " subsystems");
    if (seen[static_cast<std::size_t>(k)])
      throw ArgumentError(std::string("BadIndex: ") + what + " index " +
                          std::to_string(k) + " listed twice");
    seen[static_cast<std::size_t>(k)] = true;
  }
}

// Partial trace on the raw matrix, shared by the state-level operation and
// the map layer (whose intermediate images are not unit-trace states).
inline ComplexMatrix partial_trace_matrix(const ComplexMatrix& m,
                                          const std::vector<int>& dims,
                                          const std::vector<int>& traced) {
  const int nsub = static_cast<int>(dims.size());
  check_subsystem_indices(traced, nsub, "traced");
  std::vector<bool> is_traced(static_cast<std::size_t>(nsub), false);
  for (int k : traced) is_traced[static_cast<std::size_t>(k)] = true;

  std::vector<int> kept;
  for (int k = 0; k < nsub; ++k)
    if (!is_traced[static_cast<std::size_t>(k)]) kept.push_back(k);
  if (kept.empty())
    throw ArgumentError("BadIndex: at least one subsystem must be kept");

  const auto strd = strides(dims);
  const auto kept_offs = group_offsets(dims, strd, kept);
  const auto traced_offs = group_offsets(dims, strd, traced);

  const long dk = static_cast<long>(kept_offs.size());
  ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
  for (long r = 0; r < dk; ++r)
    for (long c = 0; c < dk; ++c) {
      std::complex<double> acc = 0.0;
      for (long t : traced_offs) acc += m(kept_offs[r] + t, kept_offs[c] + t);
      out(r, c) = acc;
    }
  return out;
}

} // namespace detail

// Checks the three density-matrix invariants (Hermitian, unit trace, PSD)
// and the dims/matrix shape agreement; returns the state on success.
inline DensityMatrix validate(const std::vector<int>& dims,
                              const ComplexMatrix& matrix) {
  detail::check_dims(dims);
  long d = 1;
  for (int k : dims) d *= k;
  if (matrix.rows() != matrix.cols() || matrix.rows() != d)
    throw ValidationError("DimMismatch: matrix is " + std::to_string(matrix.rows()) +
                          "x" + std::to_string(matrix.cols()) + " but dims imply " +
                          std::to_string(d));
  if (!matrix.allFinite())
    throw ValidationError("NonFinite: matrix contains NaN or Inf entries");
  const double defect = herm_defect(matrix);
  if (!(defect <= tol::herm))
    throw ValidationError("NonHermitian: max deviation from adjoint is " +
                          std::to_string(defect));
  const std::complex<double> tr = matrix.trace();
  if (std::abs(tr - std::complex<double>(1.0)) > tol::trace)
    throw ValidationError("TraceNotOne: trace is " + std::to_string(tr.real()) +
                          (tr.imag() < 0 ? "-" : "+") +
                          std::to_string(std::abs(tr.imag())) + "i");
  const Spectrum s = eig_hermitian(matrix, false);
  const double min_eig = s.values(s.values.size() - 1);
  if (min_eig < -tol::psd)
    throw ValidationError("NotPSD: smallest eigenvalue is " + std::to_string(min_eig));
  return DensityMatrix{dims, matrix};
}

// Reduced state after discarding the listed subsystems.
inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<int>& traced) {
  if (traced.empty()) return rho;
  ComplexMatrix out = detail::partial_trace_matrix(rho.matrix, rho.dims, traced);
  std::vector<bool> is_traced(rho.dims.size(), false);
  for (int k : traced) is_traced[static_cast<std::size_t>(k)] = true;
  std::vector<int> kept_dims;
  for (std::size_t k = 0; k < rho.dims.size(); ++k)
    if (!is_traced[k]) kept_dims.push_back(rho.dims[k]);
  return DensityMatrix{kept_dims, std::move(out)};
}

// rho ⊗ sigma; subsystem lists concatenate.
inline DensityMatrix tensor(const DensityMatrix& rho, const DensityMatrix& sigma) {
  std::vector<int> dims = rho.dims;
  dims.insert(dims.end(), sigma.dims.begin(), sigma.dims.end());
  return DensityMatrix{std::move(dims), kron(rho.matrix, sigma.matrix)};
}

// Reorders subsystems: new slot k holds what was subsystem perm[k].
inline DensityMatrix permute_subsystems(const DensityMatrix& rho,
                                        const std::vector<int>& perm) {
  const int m = rho.subsystem_count();
  if (static_cast<int>(perm.size()) != m)
    throw ArgumentError("BadIndex: permutation must list every subsystem once");
  detail::check_subsystem_indices(perm, m, "permutation");

  const auto strd = detail::strides(rho.dims);
  const auto pos = detail::group_offsets(rho.dims, strd, perm);
  const long d = static_cast<long>(pos.size());
  ComplexMatrix out(d, d);
  for (long r = 0; r < d; ++r)
    for (long c = 0; c < d; ++c) out(r, c) = rho.matrix(pos[r], pos[c]);

  std::vector<int> dims(perm.size());
  for (std::size_t k = 0; k < perm.size(); ++k)
    dims[k] = rho.dims[static_cast<std::size_t>(perm[k])];
  return DensityMatrix{std::move(dims), std::move(out)};
}

// Flattens a multipartite state into an effective bipartite one: `left`
// lists the subsystems forming the first factor (kept in the given order),
// the complement (ascending) forms the second.  dims of the result has
// length 2.
inline DensityMatrix regroup_bipartite(const DensityMatrix& rho,
                                       const std::vector<int>& left) {
  const int m = rho.subsystem_count();
  if (left.empty() || static_cast<int>(left.size()) >= m)
    throw ArgumentError("BadIndex: a bipartite split needs nonempty groups on both sides");
  detail::check_subsystem_indices(left, m, "left-group");

  std::vector<bool> in_left(static_cast<std::size_t>(m), false);
  for (int k : left) in_left[static_cast<std::size_t>(k)] = true;
  std::vector<int> perm = left;
  for (int k = 0; k < m; ++k)
    if (!in_left[static_cast<std::size_t>(k)]) perm.push_back(k);

  DensityMatrix permuted = permute_subsystems(rho, perm);
  int dl = 1, dr = 1;
  for (std::size_t k = 0; k < left.size(); ++k) dl *= permuted.dims[k];
  for (std::size_t k = left.size(); k < permuted.dims.size(); ++k)
    dr *= permuted.dims[k];
  return DensityMatrix{{dl, dr}, std::move(permuted.matrix)};
}

// ---------------------------------------------------------------------------
// Named states
// ---------------------------------------------------------------------------

struct NamedStateSpec {
  std::string name;
  std::map<std::string, double> params;
};

namespace detail {

inline Eigen::VectorXcd ket(std::initializer_list<std::complex<double>> amps) {
  Eigen::VectorXcd v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index i = 0;
  for (const auto& a : amps) v(i++) = a;
  return v;
}

inline ComplexMatrix projector(const Eigen::VectorXcd& v) {
  return v * v.adjoint();
}

inline double take_param(const NamedStateSpec& spec, const std::string& key) {
  auto it = spec.params.find(key);
  if (it == spec.params.end())
    throw ArgumentError("BadParam: state '" + spec.name + "' requires parameter '" +
                        key + "'");
  return it->second;
}

inline void reject_unknown_params(const NamedStateSpec& spec,
                                  std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : spec.params) {
    bool ok = false;
    for (const char* a : allowed)
      if (key == a) ok = true;
    if (!ok)
      throw ArgumentError("BadParam: state '" + spec.name +
                          "' does not take parameter '" + key + "'");
  }
}

inline int param_as_dim(const NamedStateSpec& spec, const std::string& key,
                        int fallback) {
  auto it = spec.params.find(key);
  if (it == spec.params.end()) return fallback;
  const double v = it->second;
  const int d = static_cast<int>(v + 0.5);
  if (!(v > 0.5) || std::abs(v - d) > 1e-9)
    throw ArgumentError("BadParam: '" + key + "' must be a positive integer");
  return d;
}

} // namespace detail

inline DensityMatrix make_1wcc(Side basis_side,
                               const std::vector<ComplexMatrix>& blocks);

// The worked example states.  Parameters: pseudo_entangled takes p in (0,1];
// maximally_mixed takes optional integer dim_a, dim_b (default 2, 2); the
// rest take none.
inline DensityMatrix make_named_state(const NamedStateSpec& spec) {
  using detail::ket;
  using detail::projector;
  const double inv_sqrt2 = 1.0 / std::sqrt(2.0);

  if (spec.name == "pseudo_entangled") {
    detail::reject_unknown_params(spec, {"p"});
    const double p = detail::take_param(spec, "p");
    if (!(p > 0.0) || !(p <= 1.0))
      throw ArgumentError("BadParam: p must lie in (0, 1], got " + std::to_string(p));
    const ComplexMatrix bell =
        projector(ket({inv_sqrt2, 0.0, 0.0, inv_sqrt2}));
    ComplexMatrix m = p * bell + (1.0 - p) / 4.0 * ComplexMatrix::Identity(4, 4);
    return DensityMatrix{{2, 2}, std::move(m)};
  }
  if (spec.name == "zero_plus") {
    detail::reject_unknown_params(spec, {});
    const ComplexMatrix p00 = projector(ket({1.0, 0.0, 0.0, 0.0}));
    const ComplexMatrix ppp = projector(ket({0.5, 0.5, 0.5, 0.5}));
    return DensityMatrix{{2, 2}, 0.5 * p00 + 0.5 * ppp};
  }
  if (spec.name == "bell") {
    detail::reject_unknown_params(spec, {});
    return DensityMatrix{{2, 2}, projector(ket({inv_sqrt2, 0.0, 0.0, inv_sqrt2}))};
  }
  if (spec.name == "classical_cc") {
    detail::reject_unknown_params(spec, {});
    const ComplexMatrix p00 = projector(ket({1.0, 0.0, 0.0, 0.0}));
    const ComplexMatrix p11 = projector(ket({0.0, 0.0, 0.0, 1.0}));
    return DensityMatrix{{2, 2}, 0.5 * p00 + 0.5 * p11};
  }
  if (spec.name == "one_way_cc") {
    detail::reject_unknown_params(spec, {});
    ComplexMatrix b0 = ComplexMatrix::Zero(2, 2);
    b0(0, 0) = 0.5;                                   // half of |0><0|
    ComplexMatrix b1 = ComplexMatrix::Constant(2, 2, 0.25);  // half of |+><+|
    return make_1wcc(Side::Left, {b0, b1});
  }
  if (spec.name == "tripartite_cex") {
    detail::reject_unknown_params(spec, {});
    Eigen::VectorXcd v000 = Eigen::VectorXcd::Zero(8);
    v000(0) = 1.0;
    Eigen::VectorXcd v1p1 = Eigen::VectorXcd::Zero(8);
    v1p1(5) = inv_sqrt2;  // |101>
    v1p1(7) = inv_sqrt2;  // |111>
    return DensityMatrix{{2, 2, 2},
                         0.5 * projector(v000) + 0.5 * projector(v1p1)};
  }
  if (spec.name == "maximally_mixed") {
    detail::reject_unknown_params(spec, {"dim_a", "dim_b"});
    const int da = detail::param_as_dim(spec, "dim_a", 2);
    const int db = detail::param_as_dim(spec, "dim_b", 2);
    const long d = static_cast<long>(da) * db;
    return DensityMatrix{{da, db},
                         ComplexMatrix::Identity(d, d) / static_cast<double>(d)};
  }
  throw ArgumentError("UnknownName: no state named '" + spec.name + "'");
}

inline DensityMatrix make_named_state(const std::string& name,
                                      std::map<std::string, double> params = {}) {
  return make_named_state(NamedStateSpec{name, std::move(params)});
}

// One-way classically correlated state: sum_i |i><i| ⊗ sigma_i when the
// computational basis sits on the Left side, sum_i sigma_i ⊗ |i><i| when it
// sits on the Right.  The block count fixes the basis side's dimension.
inline DensityMatrix make_1wcc(Side basis_side,
                               const std::vector<ComplexMatrix>& blocks) {
  const int n = static_cast<int>(blocks.size());
  if (n == 0)
    throw ArgumentError("BlockCountMismatch: at least one block is required");
  const long d = blocks[0].rows();
  for (int i = 0; i < n; ++i)
    if (blocks[static_cast<std::size_t>(i)].rows() != d ||
        blocks[static_cast<std::size_t>(i)].cols() != d)
      throw ArgumentError("BlockCountMismatch: block " + std::to_string(i) +
                          " is not " + std::to_string(d) + "x" + std::to_string(d));

  double trace_sum = 0.0;
  for (int i = 0; i < n; ++i) {
    const ComplexMatrix& b = blocks[static_cast<std::size_t>(i)];
    if (!(herm_defect(b) <= tol::herm))
      throw ValidationError("NotPSD: block " + std::to_string(i) + " is not Hermitian");
    const Spectrum s = eig_hermitian(b, false);
    if (s.values(s.values.size() - 1) < -tol::psd)
      throw ValidationError("NotPSD: block " + std::to_string(i) +
                            " has eigenvalue " +
                            std::to_string(s.values(s.values.size() - 1)));
    trace_sum += b.trace().real();
  }
  if (std::abs(trace_sum - 1.0) > tol::trace)
    throw ValidationError("TraceNotOne: block traces sum to " +
                          std::to_string(trace_sum));

  const long total = n * d;
  ComplexMatrix m = ComplexMatrix::Zero(total, total);
  if (basis_side == Side::Left) {
    for (long i = 0; i < n; ++i)
      m.block(i * d, i * d, d, d) = blocks[static_cast<std::size_t>(i)];
    return DensityMatrix{{n, static_cast<int>(d)}, std::move(m)};
  }
  for (long i = 0; i < n; ++i)
    for (long a = 0; a < d; ++a)
      for (long b = 0; b < d; ++b)
        m(a * n + i, b * n + i) = blocks[static_cast<std::size_t>(i)](a, b);
  return DensityMatrix{{static_cast<int>(d), n}, std::move(m)};
}

// ---------------------------------------------------------------------------
// Random generators (explicit seeds; pure given the seed)
// ---------------------------------------------------------------------------

namespace detail {

inline ComplexMatrix haar_unitary(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix z(dim, dim);
  for (int r = 0; r < dim; ++r)
    for (int c = 0; c < dim; ++c)
      z(r, c) = std::complex<double>(gauss(rng), gauss(rng)) / std::sqrt(2.0);

  // QR of a complex Ginibre matrix is Haar once the R-diagonal phases are
  // absorbed into Q (otherwise the distribution is skewed by R's sign gauge).
  Eigen::HouseholderQR<ComplexMatrix> qr(z);
  ComplexMatrix q = qr.householderQ();
  ComplexMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int c = 0; c < dim; ++c) {
    const std::complex<double> rv = r(c, c);
    const double mag = std::abs(rv);
    q.col(c) *= (mag > 0.0) ? rv / mag : std::complex<double>(1.0);
  }
  return q;
}

// Probability vector from normalized uniforms; with `nondegenerate`, resample
// until all pairwise gaps reach tol::sample_gap, falling back to an evenly
// spread perturbed ramp if the draw keeps colliding (only plausible for large
// dimension, where the ramp's gaps still clear the threshold comfortably).
inline std::vector<double> random_spectrum(int dim, std::mt19937_64& rng,
                                           bool nondegenerate) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < 64; ++attempt) {
    std::vector<double> e(static_cast<std::size_t>(dim));
    double sum = 0.0;
    for (double& v : e) {
      v = unif(rng) + 1e-3;  // bound away from 0 so states stay full rank
      sum += v;
    }
    for (double& v : e) v /= sum;
    if (!nondegenerate) return e;

    std::vector<double> sorted = e;
    std::sort(sorted.begin(), sorted.end());
    double min_gap = 2.0;
    for (std::size_t k = 1; k < sorted.size(); ++k)
      min_gap = std::min(min_gap, sorted[k] - sorted[k - 1]);
    if (dim == 1 || min_gap >= tol::sample_gap) return e;
  }
  std::vector<double> e(static_cast<std::size_t>(dim));
  double sum = 0.0;
  for (int k = 0; k < dim; ++k) {
    e[static_cast<std::size_t>(k)] = 1.0 + k + 0.3 * unif(rng);
    sum += e[static_cast<std::size_t>(k)];
  }
  for (double& v : e) v /= sum;
  return e;
}

inline ComplexMatrix conjugate_by(const ComplexMatrix& u,
                                  const std::vector<double>& spectrum) {
  Eigen::VectorXd d(static_cast<Eigen::Index>(spectrum.size()));
  for (std::size_t k = 0; k < spectrum.size(); ++k)
    d(static_cast<Eigen::Index>(k)) = spectrum[k];
  return u * d.asDiagonal() * u.adjoint();
}

} // namespace detail

// Haar-conjugated random state with a random (or supplied) spectrum.
inline DensityMatrix random_density(
    const std::vector<int>& dims, std::uint64_t seed,
    const std::optional<std::vector<double>>& spectrum = std::nullopt) {
  if (dims.empty())
    throw ArgumentError("BadParam: dims must be nonempty");
  long d = 1;
  for (int k : dims) {
    if (k < 1) throw ArgumentError("BadParam: subsystem dimensions must be positive");
    d *= k;
  }

  std::mt19937_64 rng(seed);
  std::vector<double> e;
  if (spectrum) {
    if (static_cast<long>(spectrum->size()) != d)
      throw ArgumentError("BadSpectrum: expected " + std::to_string(d) +
                          " entries, got " + std::to_string(spectrum->size()));
    double sum = 0.0;
    for (double v : *spectrum) {
      if (v < 0.0)
        throw ArgumentError("BadSpectrum: negative entry " + std::to_string(v));
      sum += v;
    }
    if (std::abs(sum - 1.0) > tol::trace)
      throw ArgumentError("BadSpectrum: entries sum to " + std::to_string(sum));
    e = *spectrum;
  } else {
    e = detail::random_spectrum(static_cast<int>(d), rng, false);
  }
  const ComplexMatrix u = detail::haar_unitary(static_cast<int>(d), rng);
  return DensityMatrix{dims, detail::conjugate_by(u, e)};
}

// Random state whose eigenbasis is a product of local bases on every listed
// subsystem (the fully product case); eigenvalues form a random grid, all
// pairwise distinct when `nondegenerate` is set.
inline DensityMatrix random_fully_product_state(const std::vector<int>& dims,
                                                std::uint64_t seed,
                                                bool nondegenerate = true) {
  if (dims.empty())
    throw ArgumentError("BadParam: dims must be nonempty");
  long d = 1;
  for (int k : dims) {
    if (k < 1) throw ArgumentError("BadParam: subsystem dimensions must be positive");
    d *= k;
  }
  std::mt19937_64 rng(seed);
  const std::vector<double> e =
      detail::random_spectrum(static_cast<int>(d), rng, nondegenerate);
  ComplexMatrix u = ComplexMatrix::Identity(1, 1);
  for (int k : dims) u = kron(u, detail::haar_unitary(k, rng));
  return DensityMatrix{dims, detail::conjugate_by(u, e)};
}

// Bipartite specialization: random state with a product eigenbasis.
inline DensityMatrix random_pe_state(int dim_a, int dim_b, std::uint64_t seed,
                                     bool nondegenerate = true) {
  return random_fully_product_state({dim_a, dim_b}, seed, nondegenerate);
}

// (I ⊗ … ⊗ U ⊗ … ⊗ I) rho (same)†, with U acting on the chosen subsystem.
inline DensityMatrix apply_local_unitary(const DensityMatrix& rho,
                                         const ComplexMatrix& u, int subsystem) {
  const int m = rho.subsystem_count();
  if (subsystem < 0 || subsystem >= m)
    throw ArgumentError("BadIndex: subsystem " + std::to_string(subsystem) +
                        " out of range for " + std::to_string(m) + " subsystems");
  const int d = rho.dims[static_cast<std::size_t>(subsystem)];
  if (u.rows() != d || u.cols() != d)
    throw ArgumentError("SizeMismatch: unitary is " + std::to_string(u.rows()) +
                        "x" + std::to_string(u.cols()) + " but subsystem has dimension " +
                        std::to_string(d));
  const double defect =
      (u.adjoint() * u - ComplexMatrix::Identity(d, d)).cwiseAbs().maxCoeff();
  if (!(defect <= tol::orth))
    throw ArgumentError("NotUnitary: U†U deviates from identity by " +
                        std::to_string(defect));

  long before = 1, after = 1;
  for (int k = 0; k < subsystem; ++k) before *= rho.dims[static_cast<std::size_t>(k)];
  for (int k = subsystem + 1; k < m; ++k) after *= rho.dims[static_cast<std::size_t>(k)];
  ComplexMatrix full = kron(kron(ComplexMatrix::Identity(before, before), u),
                            ComplexMatrix::Identity(after, after));
  return DensityMatrix{rho.dims, full * rho.matrix * full.adjoint()};
}

} // namespace ence
