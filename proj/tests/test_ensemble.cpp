// Random two-faced matrix ensembles: entry-law moment tables, the
// covariance mixing factor, deterministic sampling, and diagonal
// realizations. Absolute-moment values are frozen from the closed forms
// for each law (Gaussian absolute moments, uniform power integrals, and
// centered-exponential integrals, whose even values are the derangement
// numbers 1, 9, 265).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bifree/ensemble.hpp"
#include "bifree/philox.hpp"
#include "doctest.h"

using namespace bifree;

namespace {

CovSpec scalar_cov(double c) {
  CovSpec cov;
  cov.left = {"x"};
  cov.entries = {c};
  return cov;
}

EnsembleSpec one_family_spec(double c, int N, EntryLaw law, uint64_t seed) {
  EnsembleSpec spec;
  spec.families = {{"f", scalar_cov(c)}};
  spec.N = N;
  spec.law = law;
  spec.base_seed = seed;
  return spec;
}

}  // namespace

TEST_CASE("entry law names round trip") {
  for (EntryLaw law : {EntryLaw::gaussian, EntryLaw::rademacher,
                       EntryLaw::uniform_symmetric,
                       EntryLaw::centered_exponential})
    CHECK(entry_law_from_string(to_string(law)) == law);
  CHECK_THROWS_AS((void)entry_law_from_string("cauchy"), ArgumentError);
}

TEST_CASE("absolute moment bounds match the closed forms") {
  // All four laws are standardized, so E|u|^0 = 1 and E u^2 = 1.
  for (EntryLaw law : {EntryLaw::gaussian, EntryLaw::rademacher,
                       EntryLaw::uniform_symmetric,
                       EntryLaw::centered_exponential}) {
    CHECK(abs_moment_bound(law, 0) == doctest::Approx(1.0));
    CHECK(abs_moment_bound(law, 2) == doctest::Approx(1.0).epsilon(1e-13));
  }

  // Gaussian: E|g|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi).
  CHECK(abs_moment_bound(EntryLaw::gaussian, 1) ==
        doctest::Approx(0.7978845608028654).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::gaussian, 3) ==
        doctest::Approx(1.5957691216057308).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::gaussian, 4) ==
        doctest::Approx(3.0).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::gaussian, 5) ==
        doctest::Approx(6.383076486422923).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::gaussian, 6) ==
        doctest::Approx(15.0).epsilon(1e-13));

  // Rademacher: |u| = 1 identically.
  for (int m = 1; m <= 8; ++m)
    CHECK(abs_moment_bound(EntryLaw::rademacher, m) == doctest::Approx(1.0));

  // Uniform on [-sqrt(3), sqrt(3)]: E|u|^m = 3^{m/2} / (m+1).
  CHECK(abs_moment_bound(EntryLaw::uniform_symmetric, 1) ==
        doctest::Approx(0.8660254037844386).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::uniform_symmetric, 3) ==
        doctest::Approx(1.299038105676658).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::uniform_symmetric, 4) ==
        doctest::Approx(1.8).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::uniform_symmetric, 6) ==
        doctest::Approx(27.0 / 7.0).epsilon(1e-13));

  // Exponential(1) shifted to mean zero: even absolute moments are the
  // central moments, i.e. derangement numbers; odd ones are integrals
  // with an e^{-1} factor.
  CHECK(abs_moment_bound(EntryLaw::centered_exponential, 1) ==
        doctest::Approx(0.7357588823428847).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::centered_exponential, 3) ==
        doctest::Approx(2.414553294057308).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::centered_exponential, 4) ==
        doctest::Approx(9.0).epsilon(1e-13));
  CHECK(abs_moment_bound(EntryLaw::centered_exponential, 5) ==
        doctest::Approx(44.29106588114616).epsilon(1e-12));
  CHECK(abs_moment_bound(EntryLaw::centered_exponential, 6) ==
        doctest::Approx(265.0).epsilon(1e-12));

  CHECK_THROWS_AS((void)abs_moment_bound(EntryLaw::gaussian, -1),
                  ArgumentError);
}

TEST_CASE("philox counter stream matches frozen reference vectors") {
  // Known-answer vectors for the 10-round 4x32 counter generator.
  {
    const auto out = philox4x32_10({0, 0, 0, 0}, {0, 0});
    CHECK(out[0] == 0x6627e8d5u);
    CHECK(out[1] == 0xe169c58du);
    CHECK(out[2] == 0xbc57ac4cu);
    CHECK(out[3] == 0x9b00dbd8u);
  }
  {
    const auto out = philox4x32_10({0xffffffffu, 0xffffffffu, 0xffffffffu,
                                    0xffffffffu},
                                   {0xffffffffu, 0xffffffffu});
    CHECK(out[0] == 0x408f276du);
    CHECK(out[1] == 0x41c83b0eu);
    CHECK(out[2] == 0xa20bc7c6u);
    CHECK(out[3] == 0x6d5451fdu);
  }
  {
    const auto out = philox4x32_10({0x243f6a88u, 0x85a308d3u, 0x13198a2eu,
                                    0x03707344u},
                                   {0xa4093822u, 0x299f31d0u});
    CHECK(out[0] == 0xd16cfe09u);
    CHECK(out[1] == 0x94fdccebu);
    CHECK(out[2] == 0x5001e420u);
    CHECK(out[3] == 0x24126ea1u);
  }
}

TEST_CASE("sqrt_factor: hand-checked cases") {
  CHECK(sqrt_factor(scalar_cov(4.0)).at(0, 0) ==
        doctest::Approx(2.0).epsilon(1e-15));

  CovSpec id2;
  id2.left = {"i"};
  id2.right = {"j"};
  id2.entries = {1, 0, 0, 1};
  const Matrix l = sqrt_factor(id2);
  CHECK(l.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l.at(1, 1) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(l.at(0, 1) == doctest::Approx(0.0).epsilon(1e-14));

  CovSpec corr;
  corr.left = {"i"};
  corr.right = {"j"};
  corr.entries = {1, 0.5, 0.5, 1};
  const Matrix lc = sqrt_factor(corr);
  // L L^T (= L L for the symmetric root) reproduces the covariance.
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      double s = 0.0;
      for (int t = 0; t < 2; ++t) s += lc.at(i, t) * lc.at(j, t);
      CHECK(s == doctest::Approx(corr.c(i, j)).epsilon(1e-12));
    }
}

TEST_CASE("sample_family: determinism, symmetry, and scaling") {
  EnsembleSpec spec = one_family_spec(2.25, 9, EntryLaw::gaussian, 424242);

  const SampledFamily s1 = sample_family(spec, 17);
  const SampledFamily s2 = sample_family(spec, 17);
  REQUIRE(s1.matrices.size() == 1);
  REQUIRE(s1.matrices[0].size() == 1);
  CHECK(s1.matrix(0, 0).a == s2.matrix(0, 0).a);  // bitwise reproducible

  const SampledFamily other = sample_family(spec, 18);
  CHECK(s1.matrix(0, 0).a != other.matrix(0, 0).a);

  const Matrix& m = s1.matrix(0, 0);
  for (int i = 0; i < spec.N; ++i)
    for (int j = 0; j < spec.N; ++j) CHECK(m.at(i, j) == m.at(j, i));

  // Scaling the covariance by 4 scales every entry by exactly 2: the
  // mixing factor of [[4c]] is exactly twice that of [[c]] only up to
  // rounding in general, but [[9]] vs [[2.25]] both have exact roots.
  EnsembleSpec spec4 = one_family_spec(9.0, 9, EntryLaw::gaussian, 424242);
  const SampledFamily s4 = sample_family(spec4, 17);
  for (size_t t = 0; t < m.a.size(); ++t)
    CHECK(s4.matrix(0, 0).a[t] == 2.0 * m.a[t]);
}

TEST_CASE("sample_family: N=1 entries realize c exactly") {
  // At N=1 a rademacher sample is +-sqrt(c), so its square is c up to
  // the rounding of sqrt; for c = 2.25 the root is exact.
  EnsembleSpec spec = one_family_spec(2.25, 1, EntryLaw::rademacher, 7);
  for (uint64_t s = 0; s < 20; ++s) {
    const double v = sample_family(spec, s).matrix(0, 0).at(0, 0);
    CHECK(std::abs(v) == 1.5);
    CHECK(v * v == 2.25);
  }
}

TEST_CASE("sample_family: two-index correlation has the right sign") {
  // With cov [[1, 0.9], [0.9, 1]], the two matrices of one family are
  // strongly correlated: their entrywise product averages 0.9/N.
  EnsembleSpec spec;
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1, 0.9, 0.9, 1};
  spec.families = {{"f", cov}};
  spec.N = 8;
  spec.law = EntryLaw::gaussian;
  spec.base_seed = 99;

  double acc = 0.0;
  const int n_samples = 4000;
  for (int s = 0; s < n_samples; ++s) {
    const SampledFamily f = sample_family(spec, static_cast<uint64_t>(s));
    acc += f.matrix(0, 0).at(0, 1) * f.matrix(0, 1).at(0, 1);
  }
  const double mean = acc / n_samples;
  const double target = 0.9 / spec.N;
  // Var of each product ~ (1 + c^2)/N^2; allow five standard errors.
  const double se = std::sqrt((1.0 + 0.81) / (64.0 * n_samples));
  CHECK(std::abs(mean - target) < 5 * se + 1e-12);
}

TEST_CASE("sample_family: entry statistics at N=16") {
  EnsembleSpec spec = one_family_spec(1.0, 16, EntryLaw::gaussian, 31337);
  const int n_samples = 10000;
  double mean_acc = 0.0, sq_acc = 0.0;
  for (int s = 0; s < n_samples; ++s) {
    const double v =
        sample_family(spec, static_cast<uint64_t>(s)).matrix(0, 0).at(1, 2);
    mean_acc += v;
    sq_acc += v * v;
  }
  const double mean = mean_acc / n_samples;
  const double second = sq_acc / n_samples;
  // Entry ~ N(0, 1/16): mean within 4 standard errors, second moment
  // within 5 percent of 1/16.
  CHECK(std::abs(mean) < 4.0 * (0.25 / std::sqrt(double(n_samples))));
  CHECK(second == doctest::Approx(1.0 / 16.0).epsilon(0.05));
}

TEST_CASE("ensemble spec validation") {
  EnsembleSpec spec = one_family_spec(1.0, 0, EntryLaw::gaussian, 1);
  CHECK_THROWS_AS(spec.validate(), ValidationError);
  spec.N = 4;
  CHECK_NOTHROW(spec.validate());
  CHECK(spec.family_pos("f") == 0);
  CHECK_THROWS_AS((void)spec.family_pos("g"), ArgumentError);

  spec.families.push_back({"f", scalar_cov(1.0)});
  CHECK_THROWS_AS(spec.validate(), ValidationError);  // duplicate name

  spec.families = {{"f", scalar_cov(-1.0)}};
  CHECK_THROWS_AS(spec.validate(), NotPsdError);
}

TEST_CASE("make_diagonals: deterministic proportional fill") {
  DiagonalLimit diag;
  diag.symbols = {"d"};
  diag.atoms = {{0.5, {{"d", 0.0}}}, {0.5, {{"d", 2.0}}}};

  const auto cols = make_diagonals(diag, 4);
  REQUIRE(cols.count("d") == 1);
  CHECK(cols.at("d") == std::vector<double>{0.0, 0.0, 2.0, 2.0});

  // Single atom: every slot takes its value.
  DiagonalLimit ones;
  ones.symbols = {"e"};
  ones.atoms = {{1.0, {{"e", 1.0}}}};
  CHECK(make_diagonals(ones, 3).at("e") ==
        std::vector<double>{1.0, 1.0, 1.0});

  // Odd N with equal weights: floor gives each atom 2 slots and the
  // remainder goes to the first atom in order (ties by atom order), so
  // the trace average is (3*(-1) + 2*1)/5.
  DiagonalLimit pm;
  pm.symbols = {"d"};
  pm.atoms = {{0.5, {{"d", -1.0}}}, {0.5, {{"d", 1.0}}}};
  const auto vals = make_diagonals(pm, 5).at("d");
  CHECK(vals == std::vector<double>{-1.0, -1.0, -1.0, 1.0, 1.0});
  double tr = 0.0;
  for (double v : vals) tr += v;
  CHECK(tr / 5.0 == doctest::Approx(-0.2));

  // Joint symbols stay aligned: the same slot always comes from the same
  // atom across symbols.
  DiagonalLimit joint;
  joint.symbols = {"a", "b"};
  joint.atoms = {{0.25, {{"a", 1.0}, {"b", 10.0}}},
                 {0.75, {{"a", 2.0}, {"b", 20.0}}}};
  const auto jcols = make_diagonals(joint, 4);
  CHECK(jcols.at("a") == std::vector<double>{1.0, 2.0, 2.0, 2.0});
  CHECK(jcols.at("b") == std::vector<double>{10.0, 20.0, 20.0, 20.0});

  CHECK_THROWS_AS((void)make_diagonals(diag, 0), ArgumentError);
}

TEST_CASE("validate_ensemble passes its own sampler") {
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1, 0.5, 0.5, 1};
  EnsembleSpec spec;
  spec.families = {{"f", cov}, {"g", scalar_cov(1.0)}};
  spec.N = 8;
  spec.law = EntryLaw::rademacher;
  spec.base_seed = 2025;

  const EnsembleReport report = validate_ensemble(spec, 10000);
  CHECK(report.n_samples == 10000);
  CHECK(report.rows.size() > 0);
  for (const auto& row : report.rows) {
    CAPTURE(row.quantity);
    CHECK_FALSE(row.flagged);
  }
  CHECK(report.clean());

  // The heavy-tailed law passes too.
  spec.law = EntryLaw::centered_exponential;
  CHECK(validate_ensemble(spec, 10000).clean());
}
