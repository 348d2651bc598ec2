#include "bifree/trace_mc.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <thread>

#include "bifree/kernels.hpp"

namespace bifree {

Side side_of(const Letter& letter) {
  return std::visit([](const auto& l) { return l.side; }, letter);
}

bool Word::has_diag() const {
  for (const auto& l : letters)
    if (std::holds_alternative<DiagLetter>(l)) return true;
  return false;
}

std::string to_string(const Word& word) {
  std::string out;
  for (const auto& letter : word.letters) {
    if (!out.empty()) out += ' ';
    if (const auto* v = std::get_if<VarLetter>(&letter))
      out += v->family + "." + v->index + "^" + side_char(v->side);
    else {
      const auto& d = std::get<DiagLetter>(letter);
      out += d.symbol + "^" + side_char(d.side);
    }
  }
  return out.empty() ? "(empty)" : out;
}

void validate_word(const Word& word, const EnsembleSpec& spec,
                   const std::optional<DiagonalLimit>& diag) {
  for (int k = 0; k < word.size(); ++k) {
    const std::string at = "word[" + std::to_string(k) + "]";
    if (const auto* v = std::get_if<VarLetter>(&word.letters[k])) {
      const int f = [&] {
        try {
          return spec.family_pos(v->family);
        } catch (const ArgumentError& e) {
          throw ValidationError(at, e.what());
        }
      }();
      const CovSpec& cov = spec.families[f].second;
      if (!cov.has_index(v->index))
        throw ValidationError(at, "family '" + v->family +
                                      "' has no index '" + v->index + "'");
      if (cov.side_of(cov.index_of(v->index)) != v->side)
        throw ValidationError(
            at, "index '" + v->index + "' of family '" + v->family +
                    "' acts on the " +
                    (v->side == Side::left ? "right" : "left") +
                    ", not the " + (v->side == Side::left ? "left" : "right"));
    } else {
      const auto& d = std::get<DiagLetter>(word.letters[k]);
      if (!diag)
        throw ValidationError(at, "diagonal letter '" + d.symbol +
                                      "' but no diagonal limit configured");
      if (std::count(diag->symbols.begin(), diag->symbols.end(), d.symbol) == 0)
        throw ValidationError(at, "unknown diagonal symbol '" + d.symbol + "'");
    }
  }
}

// ---------------------------------------------------------------------------
// Realization

namespace {

// Running product that keeps pure-diagonal prefixes as vectors, so a
// diagonal letter never costs a dense multiply.
struct ProductAcc {
  int N;
  bool any = false;
  bool dense = false;
  std::vector<double> diag;
  Matrix mat;
  Matrix scratch;

  explicit ProductAcc(int n) : N(n) {}

  void push_matrix(const Matrix& x) {
    if (!any) {
      mat = x;
      dense = any = true;
    } else if (dense) {
      if (scratch.n != N) scratch = Matrix(N);
      kernels::matmul(mat.data(), x.data(), scratch.data(), N);
      std::swap(mat, scratch);
    } else {
      mat = x;
      kernels::scale_rows(mat.data(), diag.data(), N);
      dense = true;
    }
  }

  void push_diag(const std::vector<double>& d) {
    if (!any) {
      diag = d;
      any = true;
    } else if (dense) {
      kernels::scale_cols(mat.data(), d.data(), N);
    } else {
      for (int i = 0; i < N; ++i) diag[i] *= d[i];
    }
  }
};

double combined_trace(const ProductAcc& left, const ProductAcc& right) {
  const int N = left.N;
  double tr = 0.0;
  if (!left.any && !right.any) return static_cast<double>(N);
  if (!left.any) return combined_trace(right, left);
  if (!right.any) {
    if (left.dense)
      for (int i = 0; i < N; ++i) tr += left.mat.at(i, i);
    else
      for (int i = 0; i < N; ++i) tr += left.diag[i];
    return tr;
  }
  if (left.dense && right.dense)
    return kernels::trace_product(left.mat.data(), right.mat.data(), N);
  if (left.dense) {
    for (int i = 0; i < N; ++i) tr += left.mat.at(i, i) * right.diag[i];
    return tr;
  }
  if (right.dense) {
    for (int i = 0; i < N; ++i) tr += left.diag[i] * right.mat.at(i, i);
    return tr;
  }
  for (int i = 0; i < N; ++i) tr += left.diag[i] * right.diag[i];
  return tr;
}

}  // namespace

double realize_word(const Word& word, const EnsembleSpec& spec,
                    const SampledFamily& sample,
                    const std::map<std::string, std::vector<double>>& diagonals) {
  const int N = sample.N;
  ProductAcc left(N), right(N);

  auto feed = [&](ProductAcc& acc, const Letter& letter) {
    if (const auto* v = std::get_if<VarLetter>(&letter)) {
      const int f = spec.family_pos(v->family);
      acc.push_matrix(
          sample.matrix(f, spec.families[f].second.index_of(v->index)));
    } else {
      const auto& d = std::get<DiagLetter>(letter);
      auto it = diagonals.find(d.symbol);
      if (it == diagonals.end())
        throw ArgumentError("realize_word: no realization for diagonal '" +
                            d.symbol + "'");
      acc.push_diag(it->second);
    }
  };

  // Left operators compose in word order; right operators act on the
  // opposite side, so their matrix product runs in reverse word order.
  for (const auto& letter : word.letters)
    if (side_of(letter) == Side::left) feed(left, letter);
  for (auto it = word.letters.rbegin(); it != word.letters.rend(); ++it)
    if (side_of(*it) == Side::right) feed(right, *it);

  return combined_trace(left, right) / static_cast<double>(N);
}

// ---------------------------------------------------------------------------
// Estimation

namespace {

TraceEstimate reduce_samples(const std::vector<double>& values, int N) {
  TraceEstimate est;
  est.N = N;
  est.n_samples = static_cast<long long>(values.size());
  // Shift by the first sample: for constant data every deviation is
  // exactly zero, so the mean round-trips the sample value and the
  // standard error is exactly zero.
  const double shift = values[0];
  double sum_d = 0.0, sum_d2 = 0.0;
  for (double v : values) {
    const double d = v - shift;
    sum_d += d;
    sum_d2 += d * d;
  }
  const double n = static_cast<double>(values.size());
  est.mean = shift + sum_d / n;
  const double var =
      values.size() > 1
          ? std::max(0.0, (sum_d2 - sum_d * sum_d / n) / (n - 1.0))
          : 0.0;
  est.stderr_est = std::sqrt(var / n);
  return est;
}

}  // namespace

TraceEstimate estimate_moment(const Word& word, const EnsembleSpec& spec,
                              const std::optional<DiagonalLimit>& diag,
                              long long n_samples, int threads) {
  spec.validate();
  validate_word(word, spec, diag);
  if (n_samples < 1)
    throw ArgumentError("estimate_moment: n_samples must be >= 1");
  if (threads < 1) threads = 1;

  std::map<std::string, std::vector<double>> diagonals;
  if (diag && word.has_diag()) diagonals = make_diagonals(*diag, spec.N);

  std::vector<double> values(static_cast<size_t>(n_samples));
  auto worker = [&](long long lo, long long hi) {
    for (long long s = lo; s < hi; ++s) {
      const SampledFamily sample =
          sample_family(spec, static_cast<std::uint64_t>(s));
      values[static_cast<size_t>(s)] =
          realize_word(word, spec, sample, diagonals);
    }
  };

  if (threads == 1 || n_samples < 2 * threads) {
    worker(0, n_samples);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const long long chunk = (n_samples + threads - 1) / threads;
    for (int t = 0; t < threads; ++t) {
      const long long lo = t * chunk;
      const long long hi = std::min<long long>(n_samples, lo + chunk);
      if (lo >= hi) break;
      pool.emplace_back(worker, lo, hi);
    }
    for (auto& th : pool) th.join();
  }
  return reduce_samples(values, spec.N);
}

// ---------------------------------------------------------------------------
// Exact values and sweeps

const char* to_string(ExactVariant v) {
  switch (v) {
    case ExactVariant::clt: return "clt";
    case ExactVariant::clt_multi: return "clt_multi";
    case ExactVariant::free_diag: return "free_diag";
    case ExactVariant::bifree_general: return "bifree_general";
  }
  return "?";
}

ExactVariant select_exact_variant(const Word& word, const NamedCovs& families) {
  if (!word.has_diag()) {
    std::set<std::string> used;
    for (const auto& letter : word.letters)
      used.insert(std::get<VarLetter>(letter).family);
    if (used.size() <= 1) return ExactVariant::clt;
    // The dedicated multi-family evaluator needs one shared index set.
    const CovSpec* shape = nullptr;
    for (const auto& [name, cov] : families) {
      if (!used.count(name)) continue;
      if (!shape)
        shape = &cov;
      else if (cov.left != shape->left || cov.right != shape->right)
        return ExactVariant::bifree_general;
    }
    return ExactVariant::clt_multi;
  }
  // Y D Y D ... Y D with everything on the left has a closed form via the
  // Kreweras complement.
  if (word.size() % 2 != 0) return ExactVariant::bifree_general;
  for (int k = 0; k < word.size(); ++k) {
    if (side_of(word.letters[k]) != Side::left)
      return ExactVariant::bifree_general;
    const bool want_var = k % 2 == 0;
    if (std::holds_alternative<VarLetter>(word.letters[k]) != want_var)
      return ExactVariant::bifree_general;
  }
  return ExactVariant::free_diag;
}

ExactResult exact_moment(const Word& word, const NamedCovs& families,
                         const std::optional<DiagonalLimit>& diag) {
  ExactResult out;
  out.variant = select_exact_variant(word, families);
  if (word.size() == 0) {
    out.value = 1.0;
    return out;
  }
  switch (out.variant) {
    case ExactVariant::clt: {
      const auto& first = std::get<VarLetter>(word.letters.front());
      const CovSpec* cov = nullptr;
      for (const auto& [name, c] : families)
        if (name == first.family) cov = &c;
      if (!cov)
        throw ArgumentError("exact_moment: unknown family '" + first.family +
                            "'");
      std::vector<std::string> indices;
      for (const auto& letter : word.letters)
        indices.push_back(std::get<VarLetter>(letter).index);
      out.value = clt_moment(*cov, indices);
      return out;
    }
    case ExactVariant::clt_multi: {
      std::vector<std::string> eps, indices;
      std::set<std::string> used;
      for (const auto& letter : word.letters) {
        const auto& v = std::get<VarLetter>(letter);
        eps.push_back(v.family);
        indices.push_back(v.index);
        used.insert(v.family);
      }
      NamedCovs involved;
      for (const auto& fam : families)
        if (used.count(fam.first)) involved.push_back(fam);
      out.value = clt_moment_multi(involved, eps, indices);
      return out;
    }
    case ExactVariant::free_diag: {
      std::vector<std::string> alpha, indices, beta;
      for (int k = 0; k < word.size(); k += 2) {
        const auto& v = std::get<VarLetter>(word.letters[k]);
        alpha.push_back(v.family);
        indices.push_back(v.index);
        beta.push_back(std::get<DiagLetter>(word.letters[k + 1]).symbol);
      }
      if (!diag)
        throw ArgumentError("exact_moment: word has diagonal letters but no "
                            "diagonal limit was given");
      out.value = free_moment_with_diagonals(families, alpha, indices, beta,
                                             *diag);
      return out;
    }
    case ExactVariant::bifree_general: {
      NamedFamilies gen;
      for (const auto& [name, cov] : families)
        gen.emplace_back(name, CltFamily{cov});
      std::string diag_name;
      if (word.has_diag()) {
        if (!diag)
          throw ArgumentError("exact_moment: word has diagonal letters but "
                              "no diagonal limit was given");
        int diag_letters = 0;
        for (const auto& letter : word.letters)
          diag_letters += std::holds_alternative<DiagLetter>(letter);
        diag_name = "diagonal";
        while (std::any_of(gen.begin(), gen.end(), [&](const auto& fam) {
          return fam.first == diag_name;
        }))
          diag_name += "_";
        gen.emplace_back(diag_name, make_diagonal_family(*diag, diag_letters));
      }
      std::vector<GeneralLetter> letters;
      letters.reserve(word.letters.size());
      for (const auto& letter : word.letters) {
        if (const auto* v = std::get_if<VarLetter>(&letter))
          letters.push_back({v->family, v->index, v->side});
        else {
          const auto& d = std::get<DiagLetter>(letter);
          letters.push_back({diag_name, d.symbol, d.side});
        }
      }
      out.value = bifree_moment_general(gen, letters);
      return out;
    }
  }
  throw Error("exact_moment: unreachable");
}

std::vector<SweepRow> convergence_sweep(const Word& word,
                                        const EnsembleSpec& spec,
                                        const std::optional<DiagonalLimit>& diag,
                                        const std::vector<int>& Ns,
                                        long long n_samples, int threads) {
  if (Ns.empty()) throw ArgumentError("convergence_sweep: no matrix sizes");
  const ExactResult exact = exact_moment(word, spec.families, diag);
  std::vector<SweepRow> rows;
  rows.reserve(Ns.size());
  for (int n : Ns) {
    EnsembleSpec at_n = spec;
    at_n.N = n;
    const TraceEstimate est =
        estimate_moment(word, at_n, diag, n_samples, threads);
    SweepRow row;
    row.N = n;
    row.mean = est.mean;
    row.stderr_est = est.stderr_est;
    row.exact = exact.value;
    row.abs_err = std::abs(est.mean - exact.value);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace bifree
