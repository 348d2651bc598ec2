#include "bifree/selftest.hpp"

#include <cmath>
#include <cstdint>
#include <functional>
#include <set>
#include <sstream>

#include "bifree/bnc.hpp"
#include "bifree/ensemble.hpp"
#include "bifree/kernels.hpp"
#include "bifree/limit_moments.hpp"
#include "bifree/oracle.hpp"
#include "bifree/partition.hpp"
#include "bifree/philox.hpp"
#include "bifree/trace_mc.hpp"

namespace bifree {

namespace {

// Small independent number-theory oracles, deliberately not sharing code
// with the library paths they check.

unsigned long long binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  unsigned long long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

unsigned long long catalan(int n) { return binom(2 * n, n) / (n + 1); }

unsigned long long bell(int n) {
  std::vector<std::vector<unsigned long long>> tri{{1}};
  for (int i = 1; i <= n; ++i) {
    std::vector<unsigned long long> row{tri.back().back()};
    for (size_t k = 0; k < tri.back().size(); ++k)
      row.push_back(row.back() + tri.back()[k]);
    tri.push_back(std::move(row));
  }
  return tri[n][0];
}

unsigned long long double_factorial_odd(int n) {  // (n-1)!! for even n
  unsigned long long r = 1;
  for (int k = n - 1; k > 1; k -= 2) r *= k;
  return r;
}

// Deterministic little PRNG for the randomized checks.
struct MiniRng {
  std::uint64_t state;
  std::uint64_t next() { return state = splitmix64(state); }
  double uniform() { return u01_open(next()); }
  int below(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }
};

MomentOracle random_oracle(MiniRng& rng, int symbols, int max_len) {
  std::vector<Symbol> alphabet;
  for (int i = 0; i < symbols; ++i)
    alphabet.push_back({std::string(1, static_cast<char>('a' + i)),
                        rng.below(2) ? Side::right : Side::left});
  MomentOracle phi(std::move(alphabet), max_len);
  phi.fill([&](std::span<const int>) { return 2.0 * rng.uniform() - 1.0; });
  return phi;
}

CovSpec random_cov(MiniRng& rng, int n_left, int n_right) {
  CovSpec cov;
  for (int i = 0; i < n_left; ++i) cov.left.push_back("L" + std::to_string(i));
  for (int i = 0; i < n_right; ++i) cov.right.push_back("R" + std::to_string(i));
  const int d = cov.dim();
  // C = A A^T is PSD by construction.
  std::vector<double> a(static_cast<size_t>(d) * d);
  for (auto& x : a) x = 2.0 * rng.uniform() - 1.0;
  cov.entries.assign(static_cast<size_t>(d) * d, 0.0);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      double s = 0.0;
      for (int k = 0; k < d; ++k) s += a[i * d + k] * a[j * d + k];
      cov.entries[static_cast<size_t>(i) * d + j] = s;
    }
  return cov;
}

using Check = std::function<std::string()>;  // empty string means pass

std::string check_counts() {
  for (int n = 1; n <= 7; ++n) {
    if (enumerate_noncrossing(n, false).size() != catalan(n))
      return "NC(" + std::to_string(n) + ") != Catalan";
    if (enumerate_set_partitions(n).size() != bell(n))
      return "partitions(" + std::to_string(n) + ") != Bell";
  }
  for (int n = 2; n <= 8; n += 2)
    if (enumerate_pairings(n).size() != double_factorial_odd(n))
      return "pairings(" + std::to_string(n) + ") != (n-1)!!";
  return {};
}

std::string check_nc_filter_agreement() {
  for (int n = 1; n <= 6; ++n) {
    std::set<std::vector<int>> direct, filtered;
    for_each_noncrossing(n, false,
                         [&](const SetPartition& p) { direct.insert(p.rgs()); });
    for_each_set_partition(n, [&](const SetPartition& p) {
      if (is_noncrossing(p)) filtered.insert(p.rgs());
    });
    if (direct != filtered) return "mismatch at n=" + std::to_string(n);
  }
  return {};
}

std::string check_mobius() {
  for (int n = 1; n <= 7; ++n) {
    const long long expect = (n % 2 ? 1 : -1) * static_cast<long long>(catalan(n - 1));
    const long long got =
        nc_mobius(SetPartition::discrete(n), SetPartition::full(n));
    if (got != expect)
      return "mu(0,1) at n=" + std::to_string(n) + ": got " +
             std::to_string(got) + ", want " + std::to_string(expect);
  }
  // Defining identity: sum over [sigma, 1] of mu(rho, 1) is zero unless
  // sigma is already full.
  for (int n = 2; n <= 5; ++n) {
    const SetPartition one = SetPartition::full(n);
    bool ok = true;
    for_each_noncrossing(n, false, [&](const SetPartition& sigma) {
      long long total = 0;
      for_each_noncrossing(n, false, [&](const SetPartition& rho) {
        if (refines(sigma, rho)) total += nc_mobius(rho, one);
      });
      if (total != (sigma == one ? 1 : 0)) ok = false;
    });
    if (!ok) return "Moebius inversion identity failed at n=" + std::to_string(n);
  }
  return {};
}

SetPartition interleave(const SetPartition& p, const SetPartition& bars) {
  // p on odd points 2i-1, bars on even points 2i.
  std::vector<std::vector<int>> blocks;
  for (const auto& b : p.blocks()) {
    std::vector<int> nb;
    for (int v : b) nb.push_back(2 * v - 1);
    blocks.push_back(nb);
  }
  for (const auto& b : bars.blocks()) {
    std::vector<int> nb;
    for (int v : b) nb.push_back(2 * v);
    blocks.push_back(nb);
  }
  return SetPartition(2 * p.n(), std::move(blocks));
}

std::string check_kreweras() {
  for (int n = 1; n <= 7; ++n) {
    bool ok = true;
    for_each_noncrossing(n, false, [&](const SetPartition& p) {
      const SetPartition k = kreweras_complement(p);
      if (p.block_count() + k.block_count() != n + 1) ok = false;
      if (!is_noncrossing(interleave(p, k))) ok = false;
    });
    if (!ok) return "complement identity failed at n=" + std::to_string(n);
  }
  const SetPartition p(4, {{1, 2}, {3, 4}});
  if (kreweras_complement(p) != SetPartition(4, {{1}, {2, 4}, {3}}))
    return "K({{1,2},{3,4}}) wrong";
  return {};
}

std::string check_shuffle() {
  const SideMap lrlr = side_map_from_string("lrlr");
  const Permutation s = shuffle_permutation(lrlr);
  if (s.images() != std::vector<int>{1, 3, 4, 2}) return "s_chi(lrlr) wrong";
  const Permutation rev = shuffle_permutation(side_map_from_string("rrrr"));
  if (rev.images() != std::vector<int>{4, 3, 2, 1}) return "all-right not reversal";
  if (shuffle_permutation(side_map_from_string("lll")) !=
      Permutation::identity(3))
    return "all-left not identity";
  return {};
}

std::string check_bnc() {
  MiniRng rng{11};
  for (int n = 1; n <= 7; ++n) {
    SideMap chi(n);
    for (auto& s : chi) s = rng.below(2) ? Side::right : Side::left;
    if (enumerate_bnc(chi, false).size() != catalan(n))
      return "|BNC| != Catalan at n=" + std::to_string(n);
  }
  for (int n = 1; n <= 5; ++n) {
    for (int mask = 0; mask < (1 << n); ++mask) {
      SideMap chi(n);
      for (int k = 0; k < n; ++k)
        chi[k] = (mask >> k) & 1 ? Side::right : Side::left;
      std::set<std::vector<int>> via_enum, via_filter;
      for_each_bnc(chi, false,
                   [&](const SetPartition& p) { via_enum.insert(p.rgs()); });
      for_each_set_partition(n, [&](const SetPartition& p) {
        if (is_bi_noncrossing(p, chi)) via_filter.insert(p.rgs());
      });
      if (via_enum != via_filter)
        return "filter disagreement at n=" + std::to_string(n);
    }
  }
  return {};
}

std::string check_roundtrip() {
  MiniRng rng{2024};
  const MomentOracle phi = random_oracle(rng, 2, 5);
  const CumulantFn kappa = cumulant_fn_of(phi);
  WordIds w;
  std::function<std::string()> rec = [&]() -> std::string {
    if (!w.empty()) {
      const SideMap chi = phi.chi_of(w);
      const double back = moment_from_cumulants(kappa, chi, w);
      const double direct = phi(w);
      if (std::abs(back - direct) >
          1e-10 * std::max(1.0, std::abs(direct)))
        return "round trip off by " + std::to_string(back - direct);
    }
    if (w.size() == 5) return {};
    for (int id = 0; id < phi.alphabet_size(); ++id) {
      w.push_back(id);
      auto r = rec();
      w.pop_back();
      if (!r.empty()) return r;
    }
    return {};
  };
  return rec();
}

std::string check_all_left_agreement() {
  MiniRng rng{7};
  std::vector<Symbol> alphabet{{"x", Side::left}, {"y", Side::left}};
  MomentOracle phi(alphabet, 6);
  phi.fill([&](std::span<const int>) { return 2.0 * rng.uniform() - 1.0; });
  WordIds w;
  std::function<std::string()> rec = [&]() -> std::string {
    if (!w.empty()) {
      const double a = bifree_cumulant(phi, phi.chi_of(w), w);
      const double b = free_cumulant_recursive(phi, w);
      if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(b)))
        return "paths disagree by " + std::to_string(a - b);
    }
    if (w.size() == 6) return {};
    for (int id = 0; id < phi.alphabet_size(); ++id) {
      w.push_back(id);
      auto r = rec();
      w.pop_back();
      if (!r.empty()) return r;
    }
    return {};
  };
  return rec();
}

std::string check_clt_values() {
  CovSpec semi;
  semi.left = {"s"};
  semi.entries = {1.0};
  for (auto [n, want] : std::vector<std::pair<int, double>>{{2, 1}, {4, 2}, {6, 5}, {8, 14}}) {
    const double got = clt_moment(semi, std::vector<std::string>(n, "s"));
    if (std::abs(got - want) > 1e-12)
      return "semicircle moment m" + std::to_string(n) + " = " +
             std::to_string(got);
  }
  CovSpec two;
  two.left = {"i"};
  two.right = {"j"};
  two.entries = {1.0, 0.5, 0.5, 1.0};
  const double mixed = clt_moment(two, {"i", "j", "i", "j"});
  if (std::abs(mixed - 1.25) > 1e-12)
    return "lrlr moment = " + std::to_string(mixed);
  CovSpec scaled = two;
  for (auto& x : scaled.entries) x *= 4.0;
  if (std::abs(clt_moment(scaled, {"i", "j", "i", "j"}) - 16.0 * mixed) > 1e-9)
    return "quadratic scaling violated";
  return {};
}

std::string check_clt_vs_general() {
  MiniRng rng{99};
  for (int trial = 0; trial < 12; ++trial) {
    const CovSpec cov = random_cov(rng, 2, 1);
    const int n = 1 + rng.below(6);
    std::vector<std::string> indices;
    std::vector<GeneralLetter> letters;
    for (int k = 0; k < n; ++k) {
      const int idx = rng.below(cov.dim());
      indices.push_back(cov.name_of(idx));
      letters.push_back({"f", cov.name_of(idx), cov.side_of(idx)});
    }
    const double a = clt_moment(cov, indices);
    const double b = bifree_moment_general({{"f", CltFamily{cov}}}, letters);
    if (std::abs(a - b) > 1e-10 * std::max(1.0, std::abs(a)))
      return "trial " + std::to_string(trial) + ": " + std::to_string(a) +
             " vs " + std::to_string(b);
  }
  return {};
}

std::string check_vanishing() {
  // Two independent CLT families with 1 left + 1 right index each; moments
  // of the joint table come from the general evaluator, and all mixed
  // cumulants must vanish.
  CovSpec c1, c2;
  c1.left = {"i"};
  c1.right = {"j"};
  c1.entries = {1.0, 0.3, 0.3, 2.0};
  c2.left = {"i"};
  c2.right = {"j"};
  c2.entries = {0.5, -0.2, -0.2, 1.0};
  const NamedFamilies fams{{"f", CltFamily{c1}}, {"g", CltFamily{c2}}};

  std::vector<Symbol> alphabet{{"f.i", Side::left},
                               {"f.j", Side::right},
                               {"g.i", Side::left},
                               {"g.j", Side::right}};
  MomentOracle phi(alphabet, 4);
  phi.fill([&](std::span<const int> w) {
    std::vector<GeneralLetter> letters;
    for (int id : w) {
      const Symbol& sym = phi.symbol(id);
      letters.push_back({std::string(1, sym.name[0]),
                         sym.name.substr(2), sym.side});
    }
    return bifree_moment_general(fams, letters);
  });
  const auto report = check_bifree_vanishing(phi, {0, 0, 1, 1}, 4, 1e-9);
  if (!report.clean()) {
    std::ostringstream os;
    os << report.violations.size() << " violations, worst " << report.max_abs;
    return os.str();
  }
  return {};
}

std::string check_free_diag() {
  CovSpec cov;
  cov.left = {"s"};
  cov.entries = {1.0};
  const NamedCovs fams{{"f", cov}};
  DiagonalLimit unit;
  unit.symbols = {"d"};
  unit.atoms = {{1.0, {{"d", 1.0}}}};
  // With d == 1 the diagonals are invisible.
  for (int m = 1; m <= 4; ++m) {
    const double with_d = free_moment_with_diagonals(
        fams, std::vector<std::string>(m, "f"), std::vector<std::string>(m, "s"),
        std::vector<std::string>(m, "d"), unit);
    const double plain = clt_moment(cov, std::vector<std::string>(m, "s"));
    if (std::abs(with_d - plain) > 1e-12)
      return "unit diagonal changed the moment at m=" + std::to_string(m);
  }
  DiagonalLimit two;
  two.symbols = {"d"};
  two.atoms = {{0.5, {{"d", 0.0}}}, {0.5, {{"d", 2.0}}}};
  const double val = free_moment_with_diagonals(fams, {"f", "f", "f", "f"},
                                                {"s", "s", "s", "s"},
                                                {"d", "d", "d", "d"}, two);
  if (std::abs(val - 4.0) > 1e-12)
    return "4-slot diagonal word = " + std::to_string(val);
  return {};
}

std::string check_kernels() {
  MiniRng rng{5};
  const auto active = kernels::active_backend();
  for (int n : {1, 5, 32, 64}) {
    std::vector<double> a(static_cast<size_t>(n) * n), b(a.size()),
        c_ref(a.size()), c_act(a.size()), d(n);
    for (auto& x : a) x = 2.0 * rng.uniform() - 1.0;
    for (auto& x : b) x = 2.0 * rng.uniform() - 1.0;
    for (auto& x : d) x = 2.0 * rng.uniform() - 1.0;
    kernels::matmul_scalar(a.data(), b.data(), c_ref.data(), n);
    kernels::matmul(a.data(), b.data(), c_act.data(), n);
    for (size_t i = 0; i < c_ref.size(); ++i)
      if (std::abs(c_ref[i] - c_act[i]) >
          1e-12 * std::max(1.0, std::abs(c_ref[i])))
        return std::string("matmul mismatch on ") + kernels::name(active);
    const double t_ref = kernels::trace_product_scalar(a.data(), b.data(), n);
    const double t_act = kernels::trace_product(a.data(), b.data(), n);
    if (std::abs(t_ref - t_act) > 1e-12 * std::max(1.0, std::abs(t_ref)))
      return "trace_product mismatch";
    auto a2 = a;
    kernels::scale_rows_scalar(a.data(), d.data(), n);
    kernels::scale_rows(a2.data(), d.data(), n);
    if (a != a2) return "scale_rows mismatch";  // exact: same multiplies
    auto b2 = b;
    kernels::scale_cols_scalar(b.data(), d.data(), n);
    kernels::scale_cols(b2.data(), d.data(), n);
    if (b != b2) return "scale_cols mismatch";
  }
  return {};
}

std::string check_sqrt_factor() {
  MiniRng rng{31};
  const CovSpec cov = random_cov(rng, 2, 1);
  const Matrix L = sqrt_factor(cov);
  for (int i = 0; i < cov.dim(); ++i)
    for (int j = 0; j < cov.dim(); ++j) {
      double s = 0.0;
      for (int k = 0; k < cov.dim(); ++k) s += L.at(i, k) * L.at(j, k);
      if (std::abs(s - cov.c(i, j)) > 1e-10)
        return "L L^T differs from c at (" + std::to_string(i) + "," +
               std::to_string(j) + ")";
    }
  return {};
}

std::string check_sampler() {
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1.0, 0.5, 0.5, 1.0};
  EnsembleSpec spec{{{"f", cov}}, 8, EntryLaw::gaussian, 424242};
  const SampledFamily s1 = sample_family(spec, 3);
  const SampledFamily s2 = sample_family(spec, 3);
  const SampledFamily s3 = sample_family(spec, 4);
  if (s1.matrix(0, 0).a != s2.matrix(0, 0).a) return "same sample differs";
  if (s1.matrix(0, 0).a == s3.matrix(0, 0).a) return "distinct samples equal";
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      if (s1.matrix(0, 1).at(i, j) != s1.matrix(0, 1).at(j, i))
        return "not symmetric";

  CovSpec c1;
  c1.left = {"x"};
  c1.entries = {2.25};
  EnsembleSpec tiny{{{"f", c1}}, 1, EntryLaw::rademacher, 7};
  const double e = sample_family(tiny, 0).matrix(0, 0).at(0, 0);
  if (std::abs(e) != 1.5) return "N=1 rademacher entry " + std::to_string(e);
  return {};
}

std::string check_make_diagonals() {
  DiagonalLimit diag;
  diag.symbols = {"d"};
  diag.atoms = {{0.5, {{"d", -1.0}}}, {0.5, {{"d", 1.0}}}};
  const auto real = make_diagonals(diag, 5);
  const auto& d = real.at("d");
  double tr = 0.0;
  for (double v : d) tr += v;
  if (std::abs(tr / 5.0 - (-1.0 / 5.0)) > 1e-15)
    return "remainder allocation: trace/N = " + std::to_string(tr / 5.0);
  return {};
}

std::string check_realize() {
  // Hand-build a 2x2 sample and compare against explicit bookkeeping.
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1.0, 0.0, 0.0, 1.0};
  EnsembleSpec spec{{{"f", cov}}, 2, EntryLaw::gaussian, 5};
  SampledFamily sample = sample_family(spec, 0);
  const Matrix& A = sample.matrix(0, 0);
  const Matrix& B = sample.matrix(0, 1);
  // Word i^l j^r i^l j^r realizes as tr(A*A*B*B)/N: left letters in word
  // order, right letters reversed.
  Word w{{VarLetter{Side::left, "f", "i"}, VarLetter{Side::right, "f", "j"},
          VarLetter{Side::left, "f", "i"}, VarLetter{Side::right, "f", "j"}}};
  const double got = realize_word(w, spec, sample, {});
  double want = 0.0;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        for (int d = 0; d < 2; ++d)
          want += A.at(a, b) * A.at(b, c) * B.at(c, d) * B.at(d, a);
  want /= 2.0;
  if (std::abs(got - want) > 1e-14 * std::max(1.0, std::abs(want)))
    return "lrlr mismatch: " + std::to_string(got) + " vs " +
           std::to_string(want);
  return {};
}

std::string check_thread_independence() {
  CovSpec cov;
  cov.left = {"x"};
  cov.entries = {1.0};
  EnsembleSpec spec{{{"f", cov}}, 8, EntryLaw::centered_exponential, 99};
  Word w{{VarLetter{Side::left, "f", "x"}, VarLetter{Side::left, "f", "x"}}};
  const TraceEstimate e1 = estimate_moment(w, spec, std::nullopt, 50, 1);
  const TraceEstimate e3 = estimate_moment(w, spec, std::nullopt, 50, 3);
  if (e1.mean != e3.mean || e1.stderr_est != e3.stderr_est)
    return "estimates depend on thread count";
  return {};
}

std::string check_philox() {
  struct Vec {
    PhiloxCounter ctr;
    PhiloxKey key;
    PhiloxCounter want;
  };
  // Known-answer vectors for Philox4x32-10.
  const std::vector<Vec> vecs{
      {{0, 0, 0, 0}, {0, 0}, {0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}},
      {{0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
       {0xffffffffu, 0xffffffffu},
       {0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}},
      {{0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
       {0xa4093822u, 0x299f31d0u},
       {0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}}};
  for (const auto& v : vecs)
    if (philox4x32_10(v.ctr, v.key) != v.want) return "known-answer mismatch";
  return {};
}

std::string check_entry_laws() {
  for (EntryLaw law : {EntryLaw::gaussian, EntryLaw::rademacher,
                       EntryLaw::uniform_symmetric,
                       EntryLaw::centered_exponential}) {
    const PhiloxKey key{0xdeadbeefu, 0x12345678u};
    const int kDraws = 40000;
    double mean = 0.0, var = 0.0;
    std::vector<double> absm(7, 0.0);
    for (int i = 0; i < kDraws / 2; ++i) {
      double pair[2] = {0.0, 0.0};
      // Reuse the ensemble's transform indirectly: draw via a 1-dim family.
      const PhiloxCounter r = philox4x32_10(
          {static_cast<std::uint32_t>(i), 0, 0, 0}, key);
      const std::uint64_t b0 =
          static_cast<std::uint64_t>(r[0]) | (static_cast<std::uint64_t>(r[1]) << 32);
      const std::uint64_t b1 =
          static_cast<std::uint64_t>(r[2]) | (static_cast<std::uint64_t>(r[3]) << 32);
      switch (law) {
        case EntryLaw::gaussian: {
          const double rad = std::sqrt(-2.0 * std::log(u01_open(b0)));
          pair[0] = rad * std::cos(2.0 * 3.14159265358979323846 * u01_open(b1));
          pair[1] = rad * std::sin(2.0 * 3.14159265358979323846 * u01_open(b1));
          break;
        }
        case EntryLaw::rademacher:
          pair[0] = (b0 >> 63) ? 1.0 : -1.0;
          pair[1] = (b1 >> 63) ? 1.0 : -1.0;
          break;
        case EntryLaw::uniform_symmetric:
          pair[0] = std::sqrt(3.0) * (2.0 * u01_open(b0) - 1.0);
          pair[1] = std::sqrt(3.0) * (2.0 * u01_open(b1) - 1.0);
          break;
        case EntryLaw::centered_exponential:
          pair[0] = -std::log(u01_open(b0)) - 1.0;
          pair[1] = -std::log(u01_open(b1)) - 1.0;
          break;
      }
      for (double x : {pair[0], pair[1]}) {
        mean += x;
        var += x * x;
        double p = 1.0;
        for (int m = 1; m <= 6; ++m) {
          p *= std::abs(x);
          absm[m] += p;
        }
      }
    }
    mean /= kDraws;
    var = var / kDraws - mean * mean;
    if (std::abs(mean) > 0.05)
      return std::string(to_string(law)) + ": mean " + std::to_string(mean);
    if (std::abs(var - 1.0) > 0.08)
      return std::string(to_string(law)) + ": variance " + std::to_string(var);
    for (int m = 1; m <= 6; ++m) {
      const double emp = absm[m] / kDraws;
      const double bound = abs_moment_bound(law, m);
      // The bound is the exact absolute moment; the sample mean's spread
      // follows from the 2m-th moment (the exponential's high moments are
      // heavy-tailed, so the slack has to scale with it).
      const double se = std::sqrt(
          std::max(0.0, abs_moment_bound(law, 2 * m) - bound * bound) /
          kDraws);
      if (std::abs(emp - bound) > 8.0 * se + 0.05)
        return std::string(to_string(law)) + ": E|u|^" + std::to_string(m) +
               " = " + std::to_string(emp) + " vs exact " +
               std::to_string(bound);
    }
  }
  return {};
}

std::string check_ensemble_report() {
  CovSpec cov;
  cov.left = {"i"};
  cov.right = {"j"};
  cov.entries = {1.0, 0.5, 0.5, 1.0};
  CovSpec cov2;
  cov2.left = {"x"};
  cov2.entries = {1.0};
  EnsembleSpec spec{{{"f", cov}, {"g", cov2}}, 6, EntryLaw::uniform_symmetric,
                    31337};
  const EnsembleReport report = validate_ensemble(spec, 3000);
  if (!report.clean()) {
    for (const auto& row : report.rows)
      if (row.flagged)
        return row.quantity + ": z = " + std::to_string(row.z);
  }
  return {};
}

}  // namespace

std::vector<SelfTestResult> run_selftests() {
  const std::vector<std::pair<std::string, Check>> checks{
      {"partition-counts", check_counts},
      {"noncrossing-filter-agreement", check_nc_filter_agreement},
      {"mobius-function", check_mobius},
      {"kreweras-complement", check_kreweras},
      {"shuffle-permutation", check_shuffle},
      {"bnc-enumeration", check_bnc},
      {"moment-cumulant-roundtrip", check_roundtrip},
      {"all-left-cumulant-paths", check_all_left_agreement},
      {"clt-moments", check_clt_values},
      {"clt-vs-general-evaluator", check_clt_vs_general},
      {"mixed-cumulant-vanishing", check_vanishing},
      {"free-moments-with-diagonals", check_free_diag},
      {"kernel-backend-equivalence", check_kernels},
      {"sqrt-factor", check_sqrt_factor},
      {"sampler-determinism", check_sampler},
      {"diagonal-realization", check_make_diagonals},
      {"realize-word", check_realize},
      {"thread-count-independence", check_thread_independence},
      {"philox-vectors", check_philox},
      {"entry-law-moments", check_entry_laws},
      {"ensemble-statistics", check_ensemble_report},
  };
  std::vector<SelfTestResult> results;
  results.reserve(checks.size());
  for (const auto& [name, check] : checks) {
    SelfTestResult r;
    r.name = name;
    try {
      r.detail = check();
      r.pass = r.detail.empty();
    } catch (const std::exception& e) {
      r.pass = false;
      r.detail = std::string("exception: ") + e.what();
    }
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace bifree
