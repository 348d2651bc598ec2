#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "bifree/limit_moments.hpp"
#include "bifree/linalg.hpp"

namespace bifree {

/// Distribution of the standardized i.i.d. inputs u (mean 0, variance 1)
/// from which matrix entries are built.
enum class EntryLaw { gaussian, rademacher, uniform_symmetric, centered_exponential };

EntryLaw entry_law_from_string(const std::string& s);
const char* to_string(EntryLaw law);

/// Exact absolute moment E|u|^m of a law; serves as the bound table
/// guaranteeing all joint entry moments are finite and O(N^{-m/2}).
double abs_moment_bound(EntryLaw law, int m);

/// A concrete N x N realization plan for one or more two-faced families
/// sharing an entry law and a seed.
struct EnsembleSpec {
  NamedCovs families;
  int N = 0;
  EntryLaw law = EntryLaw::rademacher;
  std::uint64_t base_seed = 0;

  void validate() const;
  int family_pos(const std::string& name) const;
};

/// One sampled realization: matrices[f][l] is the N x N symmetric matrix
/// of family f's l-th index (order: left indices then right indices).
struct SampledFamily {
  int N = 0;
  std::vector<std::vector<Matrix>> matrices;

  const Matrix& matrix(int family, int index) const {
    return matrices.at(family).at(index);
  }
};

/// Symmetric PSD square root of the covariance, the mixing matrix L with
/// L L^T = cov.
Matrix sqrt_factor(const CovSpec& cov);

/// Deterministically realize sample number sample_index: entry (i,j), i<=j,
/// of family f gets the vector L*u with u drawn from the counter stream
/// keyed by (base_seed, f, sample_index); entries are v_l / sqrt(N) and the
/// matrices are filled symmetrically. Distinct positions consume disjoint
/// counters, so entries are independent by construction.
SampledFamily sample_family(const EnsembleSpec& spec,
                            std::uint64_t sample_index);

/// Deterministic diagonal realizations: each atom receives
/// floor(weight * N) consecutive positions, and the remainder goes to
/// atoms by descending weight (ties broken by atom order).
std::map<std::string, std::vector<double>> make_diagonals(
    const DiagonalLimit& diag, int N);

struct EnsembleCheckRow {
  std::string quantity;
  double estimate = 0.0;
  double target = 0.0;
  double stderr_est = 0.0;
  double z = 0.0;
  bool flagged = false;
};

struct EnsembleReport {
  int n_samples = 0;
  std::vector<EnsembleCheckRow> rows;

  int flag_count() const;
  bool clean() const { return flag_count() == 0; }
};

/// Empirical sanity check of the sampler against its contract: entry
/// means ~ 0, same-family entry products ~ c/N, cross-family products
/// ~ 0, absolute moments within the law's bound. Rows with |z| > 5 are
/// flagged.
EnsembleReport validate_ensemble(const EnsembleSpec& spec, int n_samples);

}  // namespace bifree
