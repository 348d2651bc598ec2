// Exact limit moments: covariance specs, diagonal limit laws, and the four
// moment evaluators (single CLT family, several CLT families, alternating
// words with diagonals, and the general interleaved expansion). Expected
// values are frozen from independent pairing enumeration by hand or cross-
// checked between evaluators that use disjoint code paths.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bifree/bnc.hpp"
#include "bifree/limit_moments.hpp"
#include "bifree/oracle.hpp"
#include "doctest.h"

using namespace bifree;

namespace {

// Small deterministic generator so expected values never depend on library
// RNG choices.
struct MiniRng {
  uint64_t s;
  explicit MiniRng(uint64_t seed) : s(seed) {}
  uint64_t next() {
    s += 0x9e3779b97f4a7c15ULL;
    uint64_t z = s;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }
  double uniform() { return (next() >> 11) * 0x1.0p-53; }
  int below(int n) { return static_cast<int>(next() % static_cast<uint64_t>(n)); }
};

// Random PSD covariance over the given index names: A*A^T with A uniform.
CovSpec random_cov(std::vector<std::string> left, std::vector<std::string> right,
                   MiniRng& rng) {
  CovSpec cov;
  cov.left = std::move(left);
  cov.right = std::move(right);
  const int d = cov.dim();
  std::vector<double> a(static_cast<size_t>(d) * d);
  for (auto& x : a) x = 2.0 * rng.uniform() - 1.0;
  cov.entries.assign(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k)
        s += a[static_cast<size_t>(i) * d + k] * a[static_cast<size_t>(j) * d + k];
      cov.entries[static_cast<size_t>(i) * d + j] = s;
    }
  // Symmetrize exactly: a*a^T computed this way is already symmetric in
  // exact arithmetic but not necessarily bitwise.
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      cov.entries[static_cast<size_t>(j) * d + i] =
          cov.entries[static_cast<size_t>(i) * d + j];
  return cov;
}

DiagonalLimit two_atom_diag(double w0, double v0, double v1) {
  DiagonalLimit d;
  d.symbols = {"d"};
  d.atoms = {{w0, {{"d", v0}}}, {1.0 - w0, {{"d", v1}}}};
  return d;
}

}  // namespace

// ---------------------------------------------------------------------------
// CovSpec

TEST_CASE("covariance spec indexing and sides") {
  CovSpec cov;
  cov.left = {"i", "k"};
  cov.right = {"j"};
  cov.entries = {1, 0, 0.5, 0, 2, 0, 0.5, 0, 1};
  cov.validate();

  CHECK(cov.dim() == 3);
  CHECK(cov.index_of("i") == 0);
  CHECK(cov.index_of("k") == 1);
  CHECK(cov.index_of("j") == 2);
  CHECK(cov.has_index("j"));
  CHECK_FALSE(cov.has_index("z"));
  CHECK(cov.side_of(0) == Side::left);
  CHECK(cov.side_of(1) == Side::left);
  CHECK(cov.side_of(2) == Side::right);
  CHECK(cov.name_of(2) == "j");
  CHECK(cov.c(0, 2) == 0.5);
  CHECK_THROWS_AS((void)cov.index_of("z"), ArgumentError);
  CHECK_THROWS_AS((void)cov.side_of(3), ArgumentError);
  CHECK_THROWS_AS((void)cov.name_of(-1), ArgumentError);
}

TEST_CASE("covariance spec validation rejects malformed input") {
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};

  SUBCASE("wrong entry count") {
    cov.entries = {1, 0, 0};
    CHECK_THROWS_AS(cov.validate(), ValidationError);
  }
  SUBCASE("duplicate index name across sides") {
    cov.right = {"i"};
    cov.entries = {1, 0, 0, 1};
    CHECK_THROWS_AS(cov.validate(), ValidationError);
  }
  SUBCASE("asymmetric matrix names the offending entry pair") {
    cov.entries = {1, 0.3, 0.2, 1};
    try {
      cov.validate();
      FAIL("expected ValidationError");
    } catch (const ValidationError& e) {
      const std::string msg = e.what();
      CHECK(msg.find("(0,1)") != std::string::npos);
    }
  }
  SUBCASE("indefinite matrix is rejected") {
    cov.entries = {1, 2, 2, 1};  // eigenvalues 3 and -1
    CHECK_THROWS_AS(cov.validate(), NotPsdError);
  }
  SUBCASE("empty spec is rejected") {
    cov.left.clear();
    cov.right.clear();
    cov.entries.clear();
    CHECK_THROWS_AS(cov.validate(), ValidationError);
  }
  SUBCASE("singular but positive semidefinite passes") {
    cov.entries = {1, 1, 1, 1};  // rank one
    CHECK_NOTHROW(cov.validate());
  }
}

// ---------------------------------------------------------------------------
// DiagonalLimit

TEST_CASE("diagonal limit moments are weighted atom averages") {
  DiagonalLimit d;
  d.symbols = {"a", "b"};
  d.atoms = {{0.5, {{"a", 0.0}, {"b", 1.0}}}, {0.5, {{"a", 2.0}, {"b", -1.0}}}};
  d.validate();

  CHECK(d.moment({}) == doctest::Approx(1.0));
  CHECK(d.moment({"a"}) == doctest::Approx(1.0));            // (0 + 2)/2
  CHECK(d.moment({"a", "a"}) == doctest::Approx(2.0));       // (0 + 4)/2
  CHECK(d.moment({"a", "b"}) == doctest::Approx(-1.0));      // (0 - 2)/2
  CHECK(d.moment({"b", "b", "b"}) == doctest::Approx(0.0));  // (1 - 1)/2
  CHECK(d.bound("a") == 2.0);
  CHECK(d.bound("b") == 1.0);
  CHECK_THROWS_AS((void)d.moment({"z"}), ArgumentError);
  CHECK_THROWS_AS((void)d.bound("z"), ArgumentError);
}

TEST_CASE("diagonal limit validation") {
  DiagonalLimit d = two_atom_diag(0.5, 0.0, 2.0);
  CHECK_NOTHROW(d.validate());

  SUBCASE("weights must sum to one") {
    d.atoms[0].weight = 0.6;
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SUBCASE("weights must be positive") {
    d.atoms[0].weight = 0.0;
    d.atoms[1].weight = 1.0;
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SUBCASE("every atom needs a value for every symbol") {
    d.atoms[1].values.clear();
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SUBCASE("duplicate symbols are rejected") {
    d.symbols = {"d", "d"};
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
  SUBCASE("no atoms is rejected") {
    d.atoms.clear();
    CHECK_THROWS_AS(d.validate(), ValidationError);
  }
}

TEST_CASE("diagonal limit moments are linear in atom weights") {
  // The per-block average sum_a w_a * prod(values) is linear in the weight
  // vector; verify by splitting one atom into two halves with equal values.
  DiagonalLimit d;
  d.symbols = {"d"};
  d.atoms = {{0.4, {{"d", -1.5}}}, {0.6, {{"d", 2.0}}}};
  DiagonalLimit split;
  split.symbols = {"d"};
  split.atoms = {{0.4, {{"d", -1.5}}}, {0.3, {{"d", 2.0}}}, {0.3, {{"d", 2.0}}}};
  split.validate();
  for (int n = 0; n <= 5; ++n) {
    std::vector<std::string> syms(static_cast<size_t>(n), "d");
    CHECK(d.moment(syms) == doctest::Approx(split.moment(syms)).epsilon(1e-15));
  }
}

// ---------------------------------------------------------------------------
// clt_moment

TEST_CASE("clt_moment: semicircle moments are Catalan numbers") {
  CovSpec cov;
  cov.left = {"x"};
  cov.entries = {1.0};
  CHECK(clt_moment(cov, {}) == doctest::Approx(1.0));
  CHECK(clt_moment(cov, {"x", "x"}) == doctest::Approx(1.0));
  CHECK(clt_moment(cov, {"x", "x", "x", "x"}) == doctest::Approx(2.0));
  CHECK(clt_moment(cov, std::vector<std::string>(6, "x")) ==
        doctest::Approx(5.0));
  CHECK(clt_moment(cov, std::vector<std::string>(8, "x")) ==
        doctest::Approx(14.0));

  // Odd moments vanish identically.
  CHECK(clt_moment(cov, {"x"}) == 0.0);
  CHECK(clt_moment(cov, std::vector<std::string>(5, "x")) == 0.0);

  // A single right index gives the same semicircle.
  CovSpec rcov;
  rcov.right = {"y"};
  rcov.entries = {1.0};
  CHECK(clt_moment(rcov, std::vector<std::string>(6, "y")) ==
        doctest::Approx(5.0));
}

TEST_CASE("clt_moment: two-sided fourth moment") {
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1.0, 0.5, 0.5, 1.0};
  // Exactly two bi-non-crossing pairings contribute to (i, j, i, j):
  // {{1,2},{3,4}} giving c_lr^2 and {{1,3},{2,4}} giving c_ll * c_rr.
  CHECK(clt_moment(cov, {"i", "j", "i", "j"}) == doctest::Approx(1.25));
  CHECK(clt_moment(cov, {"i", "j"}) == doctest::Approx(0.5));
  CHECK(clt_moment(cov, {"i", "i"}) == doctest::Approx(1.0));

  // Same structure with generic entries.
  MiniRng rng(11);
  for (int rep = 0; rep < 5; ++rep) {
    CovSpec c = random_cov({"i"}, {"j"}, rng);
    const double expect = c.c(0, 1) * c.c(0, 1) + c.c(0, 0) * c.c(1, 1);
    CHECK(clt_moment(c, {"i", "j", "i", "j"}) ==
          doctest::Approx(expect).epsilon(1e-12));
  }
}

TEST_CASE("clt_moment: covariance scaling and index relabelling") {
  MiniRng rng(23);
  const std::vector<std::string> names = {"i", "k", "j"};
  for (int rep = 0; rep < 5; ++rep) {
    CovSpec cov = random_cov({"i", "k"}, {"j"}, rng);
    std::vector<std::string> word;
    for (int t = 0; t < 6; ++t) word.push_back(names[rng.below(3)]);

    const double base = clt_moment(cov, word);

    // Scaling the covariance by lambda scales a degree-n moment by
    // lambda^(n/2): every pairing contributes n/2 covariance factors.
    const double lambda = 2.5;
    CovSpec scaled = cov;
    for (auto& e : scaled.entries) e *= lambda;
    CHECK(clt_moment(scaled, word) ==
          doctest::Approx(lambda * lambda * lambda * base).epsilon(1e-12));

    // Renaming indices consistently changes nothing.
    CovSpec renamed = cov;
    renamed.left = {"u", "w"};
    renamed.right = {"v"};
    std::vector<std::string> renamed_word;
    for (const auto& s : word)
      renamed_word.push_back(s == "i" ? "u" : s == "k" ? "w" : "v");
    CHECK(clt_moment(renamed, renamed_word) == doctest::Approx(base));
  }
}

TEST_CASE("clt_moment: argument validation") {
  CovSpec cov;
  cov.left = {"x"};
  cov.entries = {1.0};
  CHECK_THROWS_AS((void)clt_moment(cov, {"x", "y"}), ArgumentError);
  CHECK_THROWS_AS(
      (void)clt_moment(cov, std::vector<std::string>(14, "x")),
      SizeLimitError);

  CovSpec bad;
  bad.left = {"i"};
  bad.right = {"j"};
  bad.entries = {1, 2, 2, 1};
  CHECK_THROWS_AS((void)clt_moment(bad, {"i", "i"}), NotPsdError);
}

// ---------------------------------------------------------------------------
// clt_moment_multi

TEST_CASE("clt_moment_multi reduces to clt_moment for a single family word") {
  MiniRng rng(37);
  for (int rep = 0; rep < 5; ++rep) {
    CovSpec cov = random_cov({"i"}, {"j"}, rng);
    NamedCovs fams = {{"f", cov}, {"g", random_cov({"i"}, {"j"}, rng)}};
    const std::vector<std::string> names = {"i", "j"};
    for (int n : {2, 4, 6}) {
      std::vector<std::string> word, eps;
      for (int t = 0; t < n; ++t) {
        word.push_back(names[rng.below(2)]);
        eps.push_back("f");
      }
      CHECK(clt_moment_multi(fams, eps, word) ==
            doctest::Approx(clt_moment(cov, word)).epsilon(1e-12));
    }
  }
}

TEST_CASE("clt_moment_multi: independence forces family-pure pairings") {
  CovSpec unit;
  unit.left = {"x"};
  unit.entries = {1.0};
  NamedCovs fams = {{"f", unit}, {"g", unit}};

  // Alternating families on all-left letters: the only kernel-refining
  // pairing would be the crossing {{1,3},{2,4}}, so the moment vanishes.
  CHECK(clt_moment_multi(fams, {"f", "g", "f", "g"}, {"x", "x", "x", "x"}) ==
        doctest::Approx(0.0));
  // Blocked families: exactly one pairing {{1,2},{3,4}} survives.
  CHECK(clt_moment_multi(fams, {"f", "f", "g", "g"}, {"x", "x", "x", "x"}) ==
        doctest::Approx(1.0));
}

TEST_CASE("clt_moment_multi: two-sided interleaving of independent families") {
  // With letters (i, j, i, j) and families (f, g, f, g), the pairing
  // {{1,2},{3,4}} is mixed-family, so only {{1,3},{2,4}} contributes:
  // c_f(i,i) * c_g(j,j) = 2 * 3.
  CovSpec f;
  f.left = {"i"};
  f.right = {"j"};
  f.entries = {2, 0, 0, 1};
  CovSpec g = f;
  g.entries = {1, 0, 0, 3};
  NamedCovs fams = {{"f", f}, {"g", g}};
  CHECK(clt_moment_multi(fams, {"f", "g", "f", "g"}, {"i", "j", "i", "j"}) ==
        doctest::Approx(6.0));
}

TEST_CASE("clt_moment_multi: argument validation") {
  CovSpec unit;
  unit.left = {"x"};
  unit.entries = {1.0};
  NamedCovs fams = {{"f", unit}, {"g", unit}};
  CHECK_THROWS_AS(
      (void)clt_moment_multi({}, {}, {}), ArgumentError);
  CHECK_THROWS_AS(
      (void)clt_moment_multi(fams, {"f"}, {"x", "x"}), ArgumentError);
  CHECK_THROWS_AS(
      (void)clt_moment_multi(fams, {"h", "h"}, {"x", "x"}), ArgumentError);

  CovSpec other;
  other.left = {"y"};
  other.entries = {1.0};
  NamedCovs mismatched = {{"f", unit}, {"g", other}};
  CHECK_THROWS_AS(
      (void)clt_moment_multi(mismatched, {"f", "f"}, {"x", "x"}),
      ArgumentError);
}

// ---------------------------------------------------------------------------
// free_moment_with_diagonals

TEST_CASE("alternating words with diagonals: frozen small cases") {
  CovSpec unit;
  unit.left = {"s"};
  unit.entries = {1.0};
  NamedCovs fams = {{"f", unit}};
  const DiagonalLimit diag = two_atom_diag(0.5, 0.0, 2.0);
  // Atom moments: phi(d) = 1, phi(d^2) = 2, phi(d^k) = 2^(k-1).

  // Length 2: the single pairing {{1,2}} has Kreweras complement
  // {{1},{2}}, contributing phi(d)^2 = 1.
  CHECK(free_moment_with_diagonals(fams, {"f"}, {"s"}, {"d"}, diag) == 0.0);
  CHECK(free_moment_with_diagonals(fams, {"f", "f"}, {"s", "s"}, {"d", "d"},
                                   diag) == doctest::Approx(1.0));

  // Length 4: pairings {{1,2},{3,4}} and {{1,4},{2,3}} have Kreweras
  // complements {{1},{2,4},{3}} and {{1,3},{2},{4}}, contributing
  // phi(d) phi(d^2) phi(d) = 2 each, so the moment is 4.
  CHECK(free_moment_with_diagonals(fams, {"f", "f", "f", "f"},
                                   {"s", "s", "s", "s"}, {"d", "d", "d", "d"},
                                   diag) == doctest::Approx(4.0));

  // Unit diagonal values collapse to the plain semicircle.
  DiagonalLimit ones;
  ones.symbols = {"d"};
  ones.atoms = {{1.0, {{"d", 1.0}}}};
  CHECK(free_moment_with_diagonals(fams, std::vector<std::string>(6, "f"),
                                   std::vector<std::string>(6, "s"),
                                   std::vector<std::string>(6, "d"), ones) ==
        doctest::Approx(5.0));
}

TEST_CASE("alternating words with unit atoms reduce to clt_moment_multi") {
  MiniRng rng(53);
  DiagonalLimit ones;
  ones.symbols = {"d"};
  ones.atoms = {{1.0, {{"d", 1.0}}}};
  for (int rep = 0; rep < 4; ++rep) {
    NamedCovs fams = {{"f", random_cov({"s", "t"}, {}, rng)},
                      {"g", random_cov({"s", "t"}, {}, rng)}};
    for (int n : {2, 4, 6}) {
      std::vector<std::string> alpha, idx, beta;
      for (int t = 0; t < n; ++t) {
        alpha.push_back(rng.below(2) ? "f" : "g");
        idx.push_back(rng.below(2) ? "s" : "t");
        beta.push_back("d");
      }
      CHECK(free_moment_with_diagonals(fams, alpha, idx, beta, ones) ==
            doctest::Approx(clt_moment_multi(fams, alpha, idx))
                .epsilon(1e-12));
    }
  }
}

TEST_CASE("alternating words with diagonals: validation") {
  CovSpec unit;
  unit.left = {"s"};
  unit.entries = {1.0};
  CovSpec twosided;
  twosided.left = {"s"};
  twosided.right = {"r"};
  twosided.entries = {1, 0, 0, 1};
  NamedCovs fams = {{"f", unit}, {"t", twosided}};
  const DiagonalLimit diag = two_atom_diag(0.5, 0.0, 2.0);

  CHECK_THROWS_AS(
      (void)free_moment_with_diagonals(fams, {"f"}, {"s", "s"}, {"d"}, diag),
      ArgumentError);
  CHECK_THROWS_AS(
      (void)free_moment_with_diagonals(fams, {"zz", "zz"}, {"s", "s"},
                                       {"d", "d"}, diag),
      ArgumentError);
  CHECK_THROWS_AS(
      (void)free_moment_with_diagonals(fams, {"t", "t"}, {"r", "r"},
                                       {"d", "d"}, diag),
      ArgumentError);  // right index in the all-left evaluator
  CHECK_THROWS_AS(
      (void)free_moment_with_diagonals(fams, {"f", "f"}, {"s", "s"},
                                       {"zz", "zz"}, diag),
      ArgumentError);
}

// ---------------------------------------------------------------------------
// bifree_moment_general

TEST_CASE("general evaluator agrees with clt_moment on one family") {
  MiniRng rng(71);
  for (int rep = 0; rep < 6; ++rep) {
    CovSpec cov = random_cov({"i", "k"}, {"j"}, rng);
    NamedFamilies fams;
    fams.emplace_back("f", CltFamily{cov});
    for (int n : {2, 4, 6, 8}) {
      std::vector<std::string> word;
      std::vector<GeneralLetter> letters;
      for (int t = 0; t < n; ++t) {
        const int id = rng.below(3);
        word.push_back(cov.name_of(id));
        letters.push_back({"f", cov.name_of(id), cov.side_of(id)});
      }
      CHECK(bifree_moment_general(fams, letters) ==
            doctest::Approx(clt_moment(cov, word)).epsilon(1e-10));
    }
  }
}

TEST_CASE("general evaluator: independent families have zero covariance") {
  CovSpec unit;
  unit.left = {"x"};
  unit.entries = {1.0};
  NamedFamilies fams;
  fams.emplace_back("f", CltFamily{unit});
  fams.emplace_back("g", CltFamily{unit});
  CHECK(bifree_moment_general(
            fams, {{"f", "x", Side::left}, {"g", "x", Side::left}}) == 0.0);
  // Pure odd words vanish: central-limit blocks only pair.
  CHECK(bifree_moment_general(fams, {{"f", "x", Side::left},
                                     {"f", "x", Side::left},
                                     {"f", "x", Side::left}}) == 0.0);
}

TEST_CASE("general evaluator matches the alternating-diagonal evaluator") {
  MiniRng rng(89);
  for (int rep = 0; rep < 4; ++rep) {
    CovSpec cov = random_cov({"s"}, {}, rng);
    const DiagonalLimit diag =
        two_atom_diag(0.25 + 0.5 * rng.uniform(), 2.0 * rng.uniform() - 1.0,
                      2.0 * rng.uniform() - 1.0);
    NamedFamilies fams;
    fams.emplace_back("f", CltFamily{cov});
    fams.emplace_back("d", make_diagonal_family(diag, 8));
    for (int m : {1, 2, 3, 4}) {
      std::vector<GeneralLetter> word;
      std::vector<std::string> alpha, idx, beta;
      for (int t = 0; t < m; ++t) {
        word.push_back({"f", "s", Side::left});
        word.push_back({"d", "d", Side::left});
        alpha.push_back("f");
        idx.push_back("s");
        beta.push_back("d");
      }
      CHECK(bifree_moment_general(fams, word) ==
            doctest::Approx(
                free_moment_with_diagonals({{"f", cov}}, alpha, idx, beta,
                                           diag))
                .epsilon(1e-10));
    }
  }
}

TEST_CASE("general evaluator recovers moment-family moments exactly") {
  // For a word drawn from a single moment family, summing bi-free cumulants
  // over all bi-non-crossing partitions must reproduce the oracle moment.
  MiniRng rng(97);
  std::vector<Symbol> alphabet = {{"a", Side::left}, {"b", Side::right}};
  for (int rep = 0; rep < 3; ++rep) {
    MomentOracle oracle(alphabet, 5);
    oracle.fill([&](std::span<const int>) { return 2.0 * rng.uniform() - 1.0; });
    NamedFamilies fams;
    fams.emplace_back("m", MomentFamily{oracle});
    for (int n = 1; n <= 5; ++n) {
      for (int trial = 0; trial < 8; ++trial) {
        std::vector<GeneralLetter> word;
        WordIds ids;
        for (int t = 0; t < n; ++t) {
          const int id = rng.below(2);
          word.push_back({"m", alphabet[static_cast<size_t>(id)].name,
                          alphabet[static_cast<size_t>(id)].side});
          ids.push_back(id);
        }
        const double expect = oracle(ids);
        CHECK(bifree_moment_general(fams, word) ==
              doctest::Approx(expect).epsilon(1e-10).scale(1.0));
      }
    }
  }
}

TEST_CASE("diagonal moment families are side- and order-blind") {
  const DiagonalLimit diag = two_atom_diag(0.5, 0.0, 2.0);
  NamedFamilies fams;
  fams.emplace_back("d", make_diagonal_family(diag, 4));
  const double ll = bifree_moment_general(
      fams, {{"d", "d", Side::left}, {"d", "d", Side::left}});
  const double lr = bifree_moment_general(
      fams, {{"d", "d", Side::left}, {"d", "d", Side::right}});
  const double rr = bifree_moment_general(
      fams, {{"d", "d", Side::right}, {"d", "d", Side::right}});
  CHECK(ll == doctest::Approx(2.0));
  CHECK(lr == doctest::Approx(ll));
  CHECK(rr == doctest::Approx(ll));
}

TEST_CASE("general evaluator: validation and size limits") {
  CovSpec unit;
  unit.left = {"x"};
  unit.right = {"y"};
  unit.entries = {1, 0, 0, 1};
  NamedFamilies fams;
  fams.emplace_back("f", CltFamily{unit});

  CHECK(bifree_moment_general(fams, {}) == 1.0);
  CHECK_THROWS_AS(
      (void)bifree_moment_general(fams, {{"g", "x", Side::left}}),
      ArgumentError);
  CHECK_THROWS_AS(
      (void)bifree_moment_general(fams, {{"f", "x", Side::right}}),
      ArgumentError);  // left index used on the right side

  NamedFamilies dup;
  dup.emplace_back("f", CltFamily{unit});
  dup.emplace_back("f", CltFamily{unit});
  CHECK_THROWS_AS(
      (void)bifree_moment_general(dup, {{"f", "x", Side::left}}),
      ArgumentError);

  std::vector<GeneralLetter> late(11, {"f", "x", Side::left});
  CHECK_THROWS_AS((void)bifree_moment_general(fams, late), SizeLimitError);
}
