// SPDX-License-Identifier: MIT
#include <catch2/catch_amalgamated.hpp>

#include "ence/multipartite.hpp"

using namespace ence;

namespace {

DensityMatrix qubit_pure_zero() {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = 1.0;
  return DensityMatrix{{2}, std::move(m)};
}

} // namespace

TEST_CASE("bipartition enumeration") {
  const auto two = enumerate_bipartitions(2);
  REQUIRE(two.size() == 1);
  REQUIRE(two[0].left == std::vector<int>{0});
  REQUIRE(two[0].right == std::vector<int>{1});
  REQUIRE(two[0].label() == "0|1");

  const auto three = enumerate_bipartitions(3);
  REQUIRE(three.size() == 3);
  REQUIRE(three[0].label() == "0|1,2");
  REQUIRE(three[1].label() == "0,1|2");
  REQUIRE(three[2].label() == "0,2|1");

  for (int m = 2; m <= 6; ++m) {
    const auto all = enumerate_bipartitions(m);
    REQUIRE(all.size() == (1u << (m - 1)) - 1u);
    for (const auto& split : all) {
      REQUIRE(!split.left.empty());
      REQUIRE(!split.right.empty());
      REQUIRE(split.left.front() == 0);  // canonical: subsystem 0 stays left
      REQUIRE(split.left.size() + split.right.size() == static_cast<std::size_t>(m));
    }
  }

  REQUIRE_THROWS_WITH(enumerate_bipartitions(1),
                      Catch::Matchers::StartsWith("TooFew"));
  REQUIRE_THROWS_AS(enumerate_bipartitions(21), ArgumentError);
}

TEST_CASE("aggregation over splittings of known states") {
  // A three-way product state scores zero everywhere under both maps.
  const DensityMatrix product =
      tensor(tensor(random_density({2}, 41), random_density({2}, 42)),
             random_density({2}, 43));
  for (const EnceMapSpec spec : {EnceMapSpec::transpose(), EnceMapSpec::power(2.0)}) {
    const AggregateResult res = aggregate_measure(product, spec);
    REQUIRE(res.table.size() == 3);
    for (const auto& row : res.table) REQUIRE(row.value <= 1e-9);
    REQUIRE(res.max <= 1e-9);
  }

  // A maximally entangled pair with a spectator: entanglement shows exactly
  // on the splittings that separate the pair.
  const DensityMatrix bell_spect = tensor(make_named_state("bell"), qubit_pure_zero());
  const AggregateResult res =
      aggregate_measure(bell_spect, EnceMapSpec::transpose(), Aggregator::Max);
  REQUIRE(res.table.size() == 3);
  REQUIRE(res.table[0].splitting.label() == "0|1,2");
  REQUIRE(res.table[0].value == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(res.table[1].splitting.label() == "0,1|2");
  REQUIRE(res.table[1].value <= 1e-9);
  REQUIRE(res.table[2].splitting.label() == "0,2|1");
  REQUIRE(res.table[2].value == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(res.min <= 1e-9);
  REQUIRE(res.max == Catch::Approx(1.0).margin(1e-9));
  REQUIRE(res.avg == Catch::Approx(2.0 / 3.0).margin(1e-9));
  REQUIRE(res.value == res.max);

  // The three-party mixture of |000> and |1+1>: transposition misses it on
  // every splitting, so the whole table sits at zero.
  const AggregateResult cex =
      aggregate_measure(make_named_state("tripartite_cex"), EnceMapSpec::transpose());
  for (const auto& row : cex.table) REQUIRE(row.value <= 1e-9);

  // Aggregator selection.
  for (Aggregator agg : {Aggregator::Min, Aggregator::Max, Aggregator::Avg}) {
    const AggregateResult r = aggregate_measure(bell_spect, EnceMapSpec::transpose(), agg);
    REQUIRE(r.aggregator == agg);
    const double expect = agg == Aggregator::Min   ? r.min
                          : agg == Aggregator::Max ? r.max
                                                   : r.avg;
    REQUIRE(r.value == expect);
    REQUIRE(r.min <= r.avg + 1e-15);
    REQUIRE(r.avg <= r.max + 1e-15);
  }
}

TEST_CASE("product-eigenbasis oracle on bipartite states") {
  const SplittingSpec whole{{0}, {1}};

  for (std::uint64_t seed : {1ull, 2ull, 3ull}) {
    const PEVerdict v = pe_oracle_bipartite(random_pe_state(2, 3, seed), whole);
    REQUIRE(v.status == PEVerdict::Status::HasPE);
    REQUIRE(v.witness.empty());
  }

  const PEVerdict zp = pe_oracle_bipartite(make_named_state("zero_plus"), whole);
  REQUIRE(zp.status == PEVerdict::Status::NoPE);
  REQUIRE_FALSE(zp.witness.empty());

  // Degenerate spectra cannot be attributed a fixed eigenbasis, so the
  // oracle abstains rather than guessing a rotation.
  const PEVerdict ps = pe_oracle_bipartite(
      make_named_state("pseudo_entangled", {{"p", 0.5}}), whole);
  REQUIRE(ps.status == PEVerdict::Status::Indeterminate);
  const PEVerdict wcc = pe_oracle_bipartite(make_named_state("one_way_cc"), whole);
  REQUIRE(wcc.status == PEVerdict::Status::Indeterminate);

  // Rank deficiency alone is no obstruction: the kernel extends any grid.
  ComplexMatrix diag = ComplexMatrix::Zero(4, 4);
  diag(0, 0) = 0.7;
  diag(1, 1) = 0.3;
  const PEVerdict rank2 =
      pe_oracle_bipartite(DensityMatrix{{2, 2}, std::move(diag)}, whole);
  REQUIRE(rank2.status == PEVerdict::Status::HasPE);
}

TEST_CASE("oracle abstains when only the null space remains") {
  // All eigenvalues inside the null cutoff: not a physical state, but the
  // oracle must refuse rather than divide by the top eigenvalue.
  ComplexMatrix tiny = 1e-18 * ComplexMatrix::Identity(4, 4);
  const PEVerdict v =
      pe_oracle_bipartite(DensityMatrix{{2, 2}, std::move(tiny)}, {{0}, {1}});
  REQUIRE(v.status == PEVerdict::Status::Indeterminate);
}

TEST_CASE("measures never fire on states the oracle certifies") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    const DensityMatrix rho = random_density({2, 2}, 11000 + seed);
    const double score =
        std::max(measure_Q_tilde(rho, EnceMapSpec::transpose()).value,
                 measure_Q_tilde(rho, EnceMapSpec::power(2.0)).value);
    const PEVerdict v = pe_oracle_bipartite(rho, {{0}, {1}});
    if (score > tol::detect) REQUIRE(v.status != PEVerdict::Status::HasPE);
  }
}

TEST_CASE("full product check across all splittings") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const DensityMatrix rho = random_fully_product_state({2, 2, 2}, seed);
    REQUIRE(fully_product_check(rho).status == PEVerdict::Status::HasPE);
    for (const auto& split : enumerate_bipartitions(3))
      REQUIRE(pe_oracle_bipartite(rho, split).status == PEVerdict::Status::HasPE);
  }

  const PEVerdict generic = fully_product_check(random_density({2, 2, 2}, 12001));
  REQUIRE(generic.status == PEVerdict::Status::NoPE);
  REQUIRE(generic.witness.find("splitting") == 0);

  // Bipartite input: the full check reduces to the single splitting.
  const DensityMatrix zp = make_named_state("zero_plus");
  REQUIRE(fully_product_check(zp).status ==
          pe_oracle_bipartite(zp, {{0}, {1}}).status);

  // {1/2, 1/2} spectra are degenerate on every splitting of this mixture,
  // so the check abstains overall.
  REQUIRE(fully_product_check(make_named_state("tripartite_cex")).status ==
          PEVerdict::Status::Indeterminate);
}
