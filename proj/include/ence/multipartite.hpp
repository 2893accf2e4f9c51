// SPDX-License-Identifier: MIT
#pragma once

#include <string>
#include <vector>

#include "ence/measures.hpp"

namespace ence {

// A bipartite splitting of m subsystems.  Canonical form: subsystem 0 is in
// `left`; both groups are ascending index lists.
struct SplittingSpec {
  std::vector<int> left;
  std::vector<int> right;

  std::string label() const {
    std::string s;
    for (std::size_t k = 0; k < left.size(); ++k)
      s += (k ? "," : "") + std::to_string(left[k]);
    s += '|';
    for (std::size_t k = 0; k < right.size(); ++k)
      s += (k ? "," : "") + std::to_string(right[k]);
    return s;
  }
};

// All 2^(m-1) - 1 canonical splittings, enumerated with subsystem 0 pinned
// to the left group (masks ascending, so m = 3 yields 0|1,2  0,1|2  0,2|1).
inline std::vector<SplittingSpec> enumerate_bipartitions(int m) {
  if (m < 2)
    throw ArgumentError("TooFew: need at least 2 subsystems, got " +
                        std::to_string(m));
  if (m > 20)
    throw ArgumentError("BadIndex: subsystem count " + std::to_string(m) +
                        " exceeds the supported range");
  std::vector<SplittingSpec> out;
  const unsigned full = (1u << m) - 1u;
  for (unsigned mask = 1; mask < full; mask += 2) {  // bit 0 always set
    SplittingSpec s;
    for (int k = 0; k < m; ++k)
      ((mask >> k) & 1u ? s.left : s.right).push_back(k);
    out.push_back(std::move(s));
  }
  return out;
}

enum class Aggregator { Min, Max, Avg };

struct SplittingValue {
  SplittingSpec splitting;
  double value = 0.0;
};

struct AggregateResult {
  Aggregator aggregator = Aggregator::Avg;
  double value = 0.0;  // the requested aggregate
  double min = 0.0;
  double max = 0.0;
  double avg = 0.0;
  std::vector<SplittingValue> table;
};

// Qtilde of the given map kind on every bipartite splitting (each flattened
// to an effective two-factor state), plus min/max/avg aggregates.
inline AggregateResult aggregate_measure(const DensityMatrix& rho,
                                         const EnceMapSpec& map_spec,
                                         Aggregator aggregator = Aggregator::Avg) {
  const auto splittings = enumerate_bipartitions(rho.subsystem_count());
  AggregateResult res;
  res.aggregator = aggregator;
  double sum = 0.0;
  for (const auto& split : splittings) {
    const DensityMatrix grouped = regroup_bipartite(rho, split.left);
    const double v = measure_Q_tilde(grouped, map_spec).value;
    if (res.table.empty()) {
      res.min = v;
      res.max = v;
    } else {
      res.min = std::min(res.min, v);
      res.max = std::max(res.max, v);
    }
    sum += v;
    res.table.push_back(SplittingValue{split, v});
  }
  res.avg = sum / static_cast<double>(res.table.size());
  switch (aggregator) {
    case Aggregator::Min: res.value = res.min; break;
    case Aggregator::Max: res.value = res.max; break;
    case Aggregator::Avg: res.value = res.avg; break;
  }
  return res;
}

// Verdict of the product-eigenbasis check.  Indeterminate is reserved for
// spectra whose nonzero eigenvalues are too close to separate: degenerate
// eigenspaces admit basis rotations a single eigendecomposition cannot
// resolve, so any verdict there would be gauge-dependent guessing.
struct PEVerdict {
  enum class Status { HasPE, NoPE, Indeterminate };
  Status status = Status::Indeterminate;
  std::string witness;  // empty for HasPE

  bool has_pe() const { return status == Status::HasPE; }
};

// Does the state have an eigenbasis of product vectors across the given
// splitting, with the left factors forming one orthonormal family and the
// right factors another (the grid form)?  Checks nonzero eigenvectors only:
// when those pass, the orthonormal families extend to full local bases whose
// remaining grid vectors span the kernel, so the kernel never obstructs.
inline PEVerdict pe_oracle_bipartite(const DensityMatrix& rho,
                                     const SplittingSpec& splitting) {
  const DensityMatrix grouped = rho.subsystem_count() == 2 && splitting.left.size() == 1 &&
                                        splitting.left[0] == 0
                                    ? rho
                                    : regroup_bipartite(rho, splitting.left);
  const long dl = grouped.dims[0], dr = grouped.dims[1];
  const Spectrum s = eig_hermitian(grouped.matrix, true);
  const double cutoff = tol::null_cutoff(s.values.cwiseAbs().maxCoeff());

  std::vector<Eigen::Index> nonzero;
  for (Eigen::Index k = 0; k < s.values.size(); ++k)
    if (s.values(k) > cutoff) nonzero.push_back(k);
  if (nonzero.empty())
    return PEVerdict{PEVerdict::Status::Indeterminate,
                     "spectrum is entirely within the null cutoff"};

  const double gap_floor = tol::pe_gap * s.values(nonzero.front());
  for (std::size_t k = 1; k < nonzero.size(); ++k) {
    const double gap = s.values(nonzero[k - 1]) - s.values(nonzero[k]);
    if (gap < gap_floor)
      return PEVerdict{PEVerdict::Status::Indeterminate,
                       "eigenvalues " + std::to_string(s.values(nonzero[k - 1])) +
                           " and " + std::to_string(s.values(nonzero[k])) +
                           " are degenerate within the gap threshold"};
  }

  // Schmidt test per nonzero eigenvector; collect the local factors.
  std::vector<Eigen::VectorXcd> lefts, rights;
  for (Eigen::Index k : nonzero) {
    ComplexMatrix coeff(dl, dr);
    for (long a = 0; a < dl; ++a)
      for (long b = 0; b < dr; ++b) coeff(a, b) = (*s.vectors)(a * dr + b, k);
    Eigen::JacobiSVD<ComplexMatrix> svd(coeff,
                                        Eigen::ComputeThinU | Eigen::ComputeThinV);
    const double sigma1 = svd.singularValues()(0);
    if (sigma1 < 1.0 - tol::schmidt_one)
      return PEVerdict{PEVerdict::Status::NoPE,
                       "eigenvector for eigenvalue " + std::to_string(s.values(k)) +
                           " is not a product vector (largest Schmidt coefficient " +
                           std::to_string(sigma1) + ")"};
    lefts.push_back(svd.matrixU().col(0));
    rights.push_back(svd.matrixV().col(0).conjugate());
  }

  // Grid condition: factors must pairwise coincide (up to phase) or be
  // orthogonal, on each side independently.
  const auto cluster_defect = [](const std::vector<Eigen::VectorXcd>& factors,
                                 const char* side_name) -> std::string {
    for (std::size_t i = 0; i < factors.size(); ++i)
      for (std::size_t j = i + 1; j < factors.size(); ++j) {
        const double overlap = std::abs(factors[i].dot(factors[j]));
        if (overlap >= 1.0 - tol::cluster_equal || overlap <= tol::cluster_orth)
          continue;
        return std::string(side_name) + " factors of eigenvectors " +
               std::to_string(i) + " and " + std::to_string(j) +
               " are neither equal nor orthogonal (|overlap| = " +
               std::to_string(overlap) + ")";
      }
    return {};
  };
  if (std::string w = cluster_defect(lefts, "left"); !w.empty())
    return PEVerdict{PEVerdict::Status::NoPE, std::move(w)};
  if (std::string w = cluster_defect(rights, "right"); !w.empty())
    return PEVerdict{PEVerdict::Status::NoPE, std::move(w)};
  return PEVerdict{PEVerdict::Status::HasPE, {}};
}

// Fully product eigenbasis check: the state has one iff every bipartite
// splitting admits a product eigenbasis.  NoPE on any splitting decides
// negatively; otherwise any Indeterminate splitting makes the whole answer
// Indeterminate.
inline PEVerdict fully_product_check(const DensityMatrix& rho) {
  PEVerdict out{PEVerdict::Status::HasPE, {}};
  for (const auto& split : enumerate_bipartitions(rho.subsystem_count())) {
    PEVerdict v = pe_oracle_bipartite(rho, split);
    if (v.status == PEVerdict::Status::NoPE)
      return PEVerdict{v.status, "splitting " + split.label() + ": " + v.witness};
    if (v.status == PEVerdict::Status::Indeterminate &&
        out.status == PEVerdict::Status::HasPE)
      out = PEVerdict{v.status, "splitting " + split.label() + ": " + v.witness};
  }
  return out;
}

} // namespace ence
