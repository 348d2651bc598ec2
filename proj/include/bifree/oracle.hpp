#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "bifree/bnc.hpp"
#include "bifree/partition.hpp"

namespace bifree {

/// One letter of a two-faced alphabet. The side is part of the symbol's
/// identity: a quantity acting on the left and "the same" quantity acting
/// on the right are two distinct symbols.
struct Symbol {
  std::string name;
  Side side = Side::left;

  friend bool operator==(const Symbol&, const Symbol&) = default;
};

/// A word over an oracle's alphabet, as symbol ids.
using WordIds = std::vector<int>;

struct WordIdsHash {
  size_t operator()(const WordIds& w) const {
    size_t h = 1469598103934665603ull;
    for (int v : w) {
      h ^= static_cast<size_t>(v) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

/// Total table of joint moments phi(word) for every word up to max_len.
/// The empty word evaluates to 1; querying a word that was never set (or
/// is too long) raises OracleGapError rather than inventing a value.
class MomentOracle {
 public:
  MomentOracle(std::vector<Symbol> alphabet, int max_len);

  int alphabet_size() const { return static_cast<int>(alphabet_.size()); }
  const std::vector<Symbol>& alphabet() const { return alphabet_; }
  const Symbol& symbol(int id) const;
  int symbol_id(const std::string& name, Side side) const;
  std::optional<int> find_symbol(const std::string& name, Side side) const;
  int max_len() const { return max_len_; }

  void set(std::span<const int> word, double value);
  double operator()(std::span<const int> word) const;
  bool has(std::span<const int> word) const;

  /// Populate every word of length 1..max_len from a generator.
  void fill(const std::function<double(std::span<const int>)>& gen);

  /// Side map induced by the symbols of a word.
  SideMap chi_of(std::span<const int> word) const;

 private:
  void check_word(std::span<const int> word) const;

  std::vector<Symbol> alphabet_;
  int max_len_;
  std::unordered_map<WordIds, double, WordIdsHash> table_;
};

/// phi_p(word) = product over blocks V of p (elements ascending) of
/// phi(word restricted to V).
double phi_over_partition(const MomentOracle& phi, const SetPartition& p,
                          std::span<const int> word);

/// The (l,r)-cumulant kappa_chi(word): Moebius inversion of phi over the
/// bi-non-crossing lattice,
///   kappa_chi(word) = sum over rho in NC(n) of
///                     phi_{s_chi . rho}(word) * mu(rho, 1_n).
double bifree_cumulant(const MomentOracle& phi, const SideMap& chi,
                       std::span<const int> word);

/// Classical free cumulant of a word, computed by the defining recursion
///   kappa(w) = phi(w) - sum over non-full pi in NC of prod kappa(w|_V),
/// with no Moebius function and no shuffle anywhere. For an all-left side
/// map this must agree with bifree_cumulant; keeping the code paths
/// disjoint is the point.
double free_cumulant_recursive(const MomentOracle& phi,
                               std::span<const int> word);

/// Total cumulant map: (side-map restriction, word) -> value.
using CumulantFn =
    std::function<double(const SideMap&, std::span<const int>)>;

/// Wrap an oracle's bifree_cumulant with a per-wrapper cache. The oracle
/// must outlive the returned function; the cache is not thread-safe, so
/// share one wrapper per thread of work.
CumulantFn cumulant_fn_of(const MomentOracle& phi);

/// kappa_p(word) = product over blocks V of p of kappa(chi|_V, word|_V).
double cumulant_over_partition(const CumulantFn& kappa, const SideMap& chi,
                               const SetPartition& p,
                               std::span<const int> word);

/// Inverse transform: phi(word) = sum over pi in BNC(n,chi) of
/// kappa_pi(word).
double moment_from_cumulants(const CumulantFn& kappa, const SideMap& chi,
                             std::span<const int> word);

struct VanishingViolation {
  WordIds word;
  double value = 0.0;
};

struct VanishingReport {
  long long words_checked = 0;
  double max_abs = 0.0;
  std::vector<VanishingViolation> violations;  // at most 16 retained

  bool clean() const { return violations.empty(); }
};

/// Sweep every word of length 2..max_n over the oracle's alphabet whose
/// family word (via family_of[symbol]) is not constant, and flag any
/// mixed-family cumulant exceeding tol. With independent families, every
/// mixed word must vanish.
VanishingReport check_bifree_vanishing(const MomentOracle& phi,
                                       const std::vector<int>& family_of,
                                       int max_n, double tol = 1e-9);

}  // namespace bifree
