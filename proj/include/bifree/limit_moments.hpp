#pragma once

#include <map>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "bifree/linalg.hpp"
#include "bifree/oracle.hpp"

namespace bifree {

/// Limit covariance of one two-faced family: named indices split into a
/// left group and a right group, with a symmetric PSD matrix over their
/// concatenation.
struct CovSpec {
  std::vector<std::string> left;
  std::vector<std::string> right;
  std::vector<double> entries;  // row-major dim() x dim()

  int dim() const { return static_cast<int>(left.size() + right.size()); }
  int index_of(const std::string& name) const;
  bool has_index(const std::string& name) const;
  Side side_of(int idx) const;
  const std::string& name_of(int idx) const;
  double c(int a, int b) const {
    return entries[static_cast<size_t>(a) * dim() + b];
  }
  Matrix as_matrix() const;

  /// Square shape, unique names, exact symmetry, eigenvalues >= -1e-12.
  void validate() const;

  friend bool operator==(const CovSpec&, const CovSpec&) = default;
};

/// One atom of a discrete limit distribution for diagonal symbols: a
/// weight plus a value for every symbol.
struct DiagonalAtom {
  double weight = 0.0;
  std::map<std::string, double> values;

  friend bool operator==(const DiagonalAtom&, const DiagonalAtom&) = default;
};

/// Joint limit law of a tuple of diagonal symbols: finitely many atoms
/// with weights summing to 1. Moments are plain weighted averages.
struct DiagonalLimit {
  std::vector<std::string> symbols;
  std::vector<DiagonalAtom> atoms;

  void validate() const;
  double moment(const std::vector<std::string>& syms) const;
  double bound(const std::string& sym) const;  // max |value| over atoms

  friend bool operator==(const DiagonalLimit&, const DiagonalLimit&) = default;
};

struct CltFamily {
  CovSpec cov;
};
struct MomentFamily {
  MomentOracle oracle;
};
using FamilySpec = std::variant<CltFamily, MomentFamily>;

using NamedCovs = std::vector<std::pair<std::string, CovSpec>>;
using NamedFamilies = std::vector<std::pair<std::string, FamilySpec>>;

/// Limit mixed moment of one central-limit family: sum over bi-non-
/// crossing pair partitions of the product of covariances. indices names
/// the letter at each position; sides come from the covariance spec.
double clt_moment(const CovSpec& cov, const std::vector<std::string>& indices);

/// Several independent central-limit families over a common index set:
/// only pairings whose pairs stay inside one family survive, i.e. the
/// pairing must refine the kernel of the family word eps.
double clt_moment_multi(const NamedCovs& families,
                        const std::vector<std::string>& eps,
                        const std::vector<std::string>& indices);

/// Alternating word Y D Y D ... Y D of left CLT letters and diagonal
/// letters: sum over non-crossing pair partitions p of the Y-slots,
/// family-pure, of the covariance product times the diagonal moments
/// grouped by the Kreweras complement of p.
double free_moment_with_diagonals(const NamedCovs& families,
                                  const std::vector<std::string>& alpha,
                                  const std::vector<std::string>& indices,
                                  const std::vector<std::string>& beta,
                                  const DiagonalLimit& diag);

struct GeneralLetter {
  std::string family;
  std::string symbol;  // index name (CLT) or oracle symbol name
  Side side = Side::left;
};

/// Mixed moment of arbitrarily interleaved independent families via the
/// cumulant expansion: sum over bi-non-crossing partitions of products of
/// per-block cumulants, where mixed-family blocks vanish, CLT blocks
/// contribute covariances on pairs (and nothing on other sizes), and
/// moment-family blocks use their oracle's bi-free cumulants.
double bifree_moment_general(const NamedFamilies& families,
                             const std::vector<GeneralLetter>& word);

/// A DiagonalLimit wrapped as a moment family: each symbol appears once
/// per side, and every word's moment is the atom-averaged product of
/// values, independent of sides and order.
MomentFamily make_diagonal_family(const DiagonalLimit& diag, int max_len);

}  // namespace bifree
