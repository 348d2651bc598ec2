#include "bifree/limit_moments.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "bifree/partition.hpp"

namespace bifree {

// ---------------------------------------------------------------------------
// CovSpec

int CovSpec::index_of(const std::string& name) const {
  for (size_t i = 0; i < left.size(); ++i)
    if (left[i] == name) return static_cast<int>(i);
  for (size_t i = 0; i < right.size(); ++i)
    if (right[i] == name) return static_cast<int>(left.size() + i);
  throw ArgumentError("CovSpec: unknown index '" + name + "'");
}

bool CovSpec::has_index(const std::string& name) const {
  return std::count(left.begin(), left.end(), name) +
             std::count(right.begin(), right.end(), name) >
         0;
}

Side CovSpec::side_of(int idx) const {
  if (idx < 0 || idx >= dim()) throw ArgumentError("CovSpec: index out of range");
  return idx < static_cast<int>(left.size()) ? Side::left : Side::right;
}

const std::string& CovSpec::name_of(int idx) const {
  if (idx < 0 || idx >= dim()) throw ArgumentError("CovSpec: index out of range");
  return idx < static_cast<int>(left.size())
             ? left[idx]
             : right[idx - left.size()];
}

Matrix CovSpec::as_matrix() const {
  Matrix m(dim());
  m.a = entries;
  return m;
}

void CovSpec::validate() const {
  const int d = dim();
  if (d == 0) throw ValidationError("cov", "no indices");
  if (static_cast<int>(entries.size()) != d * d)
    throw ValidationError("cov", "matrix must be " + std::to_string(d) + "x" +
                              std::to_string(d) + ", got " +
                              std::to_string(entries.size()) + " entries");
  std::set<std::string> names(left.begin(), left.end());
  names.insert(right.begin(), right.end());
  if (static_cast<int>(names.size()) != d)
    throw ValidationError("cov", "duplicate index name");
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      if (c(i, j) != c(j, i))
        throw ValidationError("cov", "matrix is not symmetric at (" +
                                  std::to_string(i) + "," + std::to_string(j) +
                                  ")");
  const auto eig = jacobi_eigen(as_matrix());
  for (double lam : eig.values)
    if (lam < -1e-12)
      throw NotPsdError("CovSpec: eigenvalue " + std::to_string(lam) +
                        " < -1e-12");
}

// ---------------------------------------------------------------------------
// DiagonalLimit

void DiagonalLimit::validate() const {
  if (symbols.empty()) throw ValidationError("diagonal.symbols", "empty");
  std::set<std::string> uniq(symbols.begin(), symbols.end());
  if (uniq.size() != symbols.size())
    throw ValidationError("diagonal.symbols", "duplicate symbol");
  if (atoms.empty()) throw ValidationError("diagonal.atoms", "empty");
  double total = 0.0;
  for (const auto& atom : atoms) {
    if (!(atom.weight > 0.0) || atom.weight > 1.0)
      throw ValidationError("diagonal.atoms",
                            "weights must lie in (0,1], got " +
                                std::to_string(atom.weight));
    total += atom.weight;
    for (const auto& sym : symbols)
      if (!atom.values.count(sym))
        throw ValidationError("diagonal.atoms",
                              "atom missing value for symbol '" + sym + "'");
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw ValidationError("diagonal.atoms", "weights sum to " +
                              std::to_string(total) + ", expected 1");
}

double DiagonalLimit::moment(const std::vector<std::string>& syms) const {
  double acc = 0.0;
  for (const auto& atom : atoms) {
    double prod = atom.weight;
    for (const auto& sym : syms) {
      auto it = atom.values.find(sym);
      if (it == atom.values.end())
        throw ArgumentError("DiagonalLimit: unknown symbol '" + sym + "'");
      prod *= it->second;
    }
    acc += prod;
  }
  return acc;
}

double DiagonalLimit::bound(const std::string& sym) const {
  double m = 0.0;
  bool found = false;
  for (const auto& atom : atoms) {
    auto it = atom.values.find(sym);
    if (it != atom.values.end()) {
      m = std::max(m, std::abs(it->second));
      found = true;
    }
  }
  if (!found) throw ArgumentError("DiagonalLimit: unknown symbol '" + sym + "'");
  return m;
}

// ---------------------------------------------------------------------------
// CLT moments

namespace {

constexpr int kMaxGeneralWord = 10;

// Positions of the word in shuffle order, as 0-based word positions:
// shuffle_order[k] = s_chi(k+1) - 1.
std::vector<int> shuffle_order(const SideMap& chi) {
  const Permutation s = shuffle_permutation(chi);
  std::vector<int> order(chi.size());
  for (size_t k = 0; k < chi.size(); ++k)
    order[k] = s(static_cast<int>(k) + 1) - 1;
  return order;
}

}  // namespace

double clt_moment(const CovSpec& cov, const std::vector<std::string>& indices) {
  cov.validate();
  const int n = static_cast<int>(indices.size());
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  if (n > kMaxEnumerationSize)
    throw SizeLimitError("clt_moment: word length " + std::to_string(n) +
                         " exceeds cap " + std::to_string(kMaxEnumerationSize));
  std::vector<int> idx(n);
  SideMap chi(n);
  for (int k = 0; k < n; ++k) {
    idx[k] = cov.index_of(indices[k]);
    chi[k] = cov.side_of(idx[k]);
  }
  const std::vector<int> order = shuffle_order(chi);
  double acc = 0.0;
  for_each_noncrossing(n, true, [&](const SetPartition& rho) {
    double prod = 1.0;
    for (const auto& pair : rho.blocks()) {
      const int x = order[pair[0] - 1], y = order[pair[1] - 1];
      prod *= cov.c(idx[x], idx[y]);
      if (prod == 0.0) break;
    }
    acc += prod;
  });
  return acc;
}

double clt_moment_multi(const NamedCovs& families,
                        const std::vector<std::string>& eps,
                        const std::vector<std::string>& indices) {
  if (families.empty()) throw ArgumentError("clt_moment_multi: no families");
  for (const auto& [fname, cov] : families) {
    cov.validate();
    if (cov.left != families.front().second.left ||
        cov.right != families.front().second.right)
      throw ArgumentError(
          "clt_moment_multi: families must share one index set; '" + fname +
          "' differs");
  }
  const int n = static_cast<int>(indices.size());
  if (static_cast<int>(eps.size()) != n)
    throw ArgumentError("clt_moment_multi: eps length != word length");
  if (n == 0) return 1.0;
  if (n % 2 != 0) return 0.0;
  if (n > kMaxEnumerationSize)
    throw SizeLimitError("clt_moment_multi: word too long");

  auto family_pos = [&](const std::string& name) {
    for (size_t f = 0; f < families.size(); ++f)
      if (families[f].first == name) return static_cast<int>(f);
    throw ArgumentError("clt_moment_multi: unknown family '" + name + "'");
  };
  const CovSpec& shape = families.front().second;
  std::vector<int> idx(n), fam(n);
  SideMap chi(n);
  for (int k = 0; k < n; ++k) {
    idx[k] = shape.index_of(indices[k]);
    chi[k] = shape.side_of(idx[k]);
    fam[k] = family_pos(eps[k]);
  }
  const std::vector<int> order = shuffle_order(chi);
  double acc = 0.0;
  for_each_noncrossing(n, true, [&](const SetPartition& rho) {
    double prod = 1.0;
    for (const auto& pair : rho.blocks()) {
      const int x = order[pair[0] - 1], y = order[pair[1] - 1];
      if (fam[x] != fam[y]) {
        prod = 0.0;
        break;
      }
      prod *= families[fam[x]].second.c(idx[x], idx[y]);
      if (prod == 0.0) break;
    }
    acc += prod;
  });
  return acc;
}

double free_moment_with_diagonals(const NamedCovs& families,
                                  const std::vector<std::string>& alpha,
                                  const std::vector<std::string>& indices,
                                  const std::vector<std::string>& beta,
                                  const DiagonalLimit& diag) {
  const int m = static_cast<int>(alpha.size());
  if (static_cast<int>(indices.size()) != m ||
      static_cast<int>(beta.size()) != m)
    throw ArgumentError(
        "free_moment_with_diagonals: alpha, indices, beta lengths differ");
  diag.validate();
  if (m == 0) return 1.0;
  if (m > kMaxEnumerationSize)
    throw SizeLimitError("free_moment_with_diagonals: word too long");

  for (const auto& [fname, cov] : families) cov.validate();
  auto family_of = [&](const std::string& name) -> const CovSpec& {
    for (const auto& [fname, cov] : families)
      if (fname == name) return cov;
    throw ArgumentError("free_moment_with_diagonals: unknown family '" + name +
                        "'");
  };
  std::vector<const CovSpec*> fam(m);
  std::vector<int> idx(m);
  for (int k = 0; k < m; ++k) {
    fam[k] = &family_of(alpha[k]);
    idx[k] = fam[k]->index_of(indices[k]);
    if (fam[k]->side_of(idx[k]) != Side::left)
      throw ArgumentError(
          "free_moment_with_diagonals: index '" + indices[k] +
          "' is not a left index; this evaluator models the all-left word");
    diag.bound(beta[k]);  // validates the symbol exists
  }
  if (m % 2 != 0) return 0.0;

  double acc = 0.0;
  for_each_noncrossing(m, true, [&](const SetPartition& rho) {
    double prod = 1.0;
    for (const auto& pair : rho.blocks()) {
      const int x = pair[0] - 1, y = pair[1] - 1;
      if (fam[x] != fam[y]) {
        prod = 0.0;
        break;
      }
      prod *= fam[x]->c(idx[x], idx[y]);
      if (prod == 0.0) break;
    }
    if (prod == 0.0) return;
    const SetPartition kc = kreweras_complement(rho);
    for (const auto& block : kc.blocks()) {
      std::vector<std::string> syms;
      syms.reserve(block.size());
      for (int v : block) syms.push_back(beta[v - 1]);
      prod *= diag.moment(syms);
      if (prod == 0.0) break;
    }
    acc += prod;
  });
  return acc;
}

// ---------------------------------------------------------------------------
// General interleaved moments

MomentFamily make_diagonal_family(const DiagonalLimit& diag, int max_len) {
  diag.validate();
  std::vector<Symbol> alphabet;
  alphabet.reserve(2 * diag.symbols.size());
  for (const auto& sym : diag.symbols) {
    alphabet.push_back({sym, Side::left});
    alphabet.push_back({sym, Side::right});
  }
  MomentOracle oracle(std::move(alphabet), max_len);
  oracle.fill([&](std::span<const int> word) {
    std::vector<std::string> syms;
    syms.reserve(word.size());
    for (int id : word) syms.push_back(oracle.symbol(id).name);
    return diag.moment(syms);
  });
  return MomentFamily{std::move(oracle)};
}

double bifree_moment_general(const NamedFamilies& families,
                             const std::vector<GeneralLetter>& word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return 1.0;
  if (n > kMaxGeneralWord)
    throw SizeLimitError("bifree_moment_general: word length " +
                         std::to_string(n) + " exceeds cap " +
                         std::to_string(kMaxGeneralWord));
  for (size_t f = 0; f < families.size(); ++f)
    for (size_t g = f + 1; g < families.size(); ++g)
      if (families[f].first == families[g].first)
        throw ArgumentError("bifree_moment_general: duplicate family '" +
                            families[f].first + "'");

  auto family_pos = [&](const std::string& name) {
    for (size_t f = 0; f < families.size(); ++f)
      if (families[f].first == name) return static_cast<int>(f);
    throw ArgumentError("bifree_moment_general: unknown family '" + name +
                        "'");
  };

  SideMap chi(n);
  std::vector<int> fam(n);
  // Resolved letter: covariance row for CLT letters, symbol id for
  // moment-family letters.
  std::vector<int> code(n);
  for (int k = 0; k < n; ++k) {
    const GeneralLetter& let = word[k];
    chi[k] = let.side;
    fam[k] = family_pos(let.family);
    const FamilySpec& spec = families[fam[k]].second;
    if (const auto* clt = std::get_if<CltFamily>(&spec)) {
      code[k] = clt->cov.index_of(let.symbol);
      if (clt->cov.side_of(code[k]) != let.side)
        throw ArgumentError("bifree_moment_general: index '" + let.symbol +
                            "' of family '" + let.family +
                            "' used on the wrong side");
    } else {
      code[k] = std::get<MomentFamily>(spec).oracle.symbol_id(let.symbol,
                                                              let.side);
    }
  }

  const std::vector<int> order = shuffle_order(chi);
  // Per-call cumulant cache for moment-family blocks.
  std::map<std::tuple<int, SideMap, WordIds>, double> cache;

  double acc = 0.0;
  for_each_noncrossing(n, false, [&](const SetPartition& rho) {
    double prod = 1.0;
    for (const auto& block : rho.blocks()) {
      // Map the block through s_chi and sort: actual word positions.
      std::vector<int> pos;
      pos.reserve(block.size());
      for (int v : block) pos.push_back(order[v - 1]);
      std::sort(pos.begin(), pos.end());

      const int f = fam[pos[0]];
      for (size_t t = 1; t < pos.size(); ++t)
        if (fam[pos[t]] != f) {
          prod = 0.0;  // mixed-family cumulants vanish
          break;
        }
      if (prod == 0.0) break;

      const FamilySpec& spec = families[f].second;
      if (const auto* clt = std::get_if<CltFamily>(&spec)) {
        // Central-limit cumulants: covariance on pairs, zero otherwise.
        if (pos.size() != 2) {
          prod = 0.0;
          break;
        }
        prod *= clt->cov.c(code[pos[0]], code[pos[1]]);
      } else {
        SideMap sub_chi;
        WordIds sub_word;
        for (int p : pos) {
          sub_chi.push_back(chi[p]);
          sub_word.push_back(code[p]);
        }
        auto key = std::make_tuple(f, sub_chi, sub_word);
        auto it = cache.find(key);
        if (it == cache.end())
          it = cache
                   .emplace(std::move(key),
                            bifree_cumulant(std::get<MomentFamily>(spec).oracle,
                                            sub_chi, sub_word))
                   .first;
        prod *= it->second;
      }
      if (prod == 0.0) break;
    }
    acc += prod;
  });
  return acc;
}

}  // namespace bifree
