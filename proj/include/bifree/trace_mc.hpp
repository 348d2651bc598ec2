#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "bifree/ensemble.hpp"
#include "bifree/limit_moments.hpp"

namespace bifree {

/// A sampled-matrix letter: family index z_i acting on the given side.
struct VarLetter {
  Side side = Side::left;
  std::string family;
  std::string index;

  friend bool operator==(const VarLetter&, const VarLetter&) = default;
};

/// A deterministic diagonal-matrix letter.
struct DiagLetter {
  Side side = Side::left;
  std::string symbol;

  friend bool operator==(const DiagLetter&, const DiagLetter&) = default;
};

using Letter = std::variant<VarLetter, DiagLetter>;

Side side_of(const Letter& letter);

/// The word whose mixed moment is being studied, in operator order.
struct Word {
  std::vector<Letter> letters;

  int size() const { return static_cast<int>(letters.size()); }
  bool has_diag() const;

  friend bool operator==(const Word&, const Word&) = default;
};

std::string to_string(const Word& word);

/// Check every letter against the ensemble: families and indices exist,
/// a letter's side matches its index's side in the covariance spec, and
/// diagonal symbols are declared. Throws ValidationError.
void validate_word(const Word& word, const EnsembleSpec& spec,
                   const std::optional<DiagonalLimit>& diag);

/// Evaluate one realization: left letters multiply in word order, right
/// letters in reverse word order (right multiplication acts on the
/// opposite side), and the result is the normalized trace
/// tr(P_left * P_right).
double realize_word(const Word& word, const EnsembleSpec& spec,
                    const SampledFamily& sample,
                    const std::map<std::string, std::vector<double>>& diagonals);

struct TraceEstimate {
  int N = 0;
  long long n_samples = 0;
  double mean = 0.0;
  double stderr_est = 0.0;
};

/// Mean and standard error of realize_word over samples 0..n_samples-1.
/// Per-sample values are stored in sample order and reduced sequentially,
/// so the result is independent of the thread count.
TraceEstimate estimate_moment(const Word& word, const EnsembleSpec& spec,
                              const std::optional<DiagonalLimit>& diag,
                              long long n_samples, int threads = 1);

/// Which closed-form evaluator matches a word's shape.
enum class ExactVariant { clt, clt_multi, free_diag, bifree_general };
const char* to_string(ExactVariant v);

ExactVariant select_exact_variant(const Word& word, const NamedCovs& families);

struct ExactResult {
  double value = 0.0;
  ExactVariant variant = ExactVariant::clt;
};

/// Exact limit moment of the word under the configured families.
ExactResult exact_moment(const Word& word, const NamedCovs& families,
                         const std::optional<DiagonalLimit>& diag);

struct SweepRow {
  int N = 0;
  double mean = 0.0;
  double stderr_est = 0.0;
  double exact = 0.0;
  double abs_err = 0.0;
};

/// Monte Carlo estimates across matrix sizes against the exact limit.
std::vector<SweepRow> convergence_sweep(const Word& word,
                                        const EnsembleSpec& spec,
                                        const std::optional<DiagonalLimit>& diag,
                                        const std::vector<int>& Ns,
                                        long long n_samples, int threads = 1);

}  // namespace bifree
