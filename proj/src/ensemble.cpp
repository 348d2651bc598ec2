#include "bifree/ensemble.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

#include "bifree/philox.hpp"

namespace bifree {

// ---------------------------------------------------------------------------
// Entry laws

EntryLaw entry_law_from_string(const std::string& s) {
  if (s == "gaussian") return EntryLaw::gaussian;
  if (s == "rademacher") return EntryLaw::rademacher;
  if (s == "uniform_symmetric") return EntryLaw::uniform_symmetric;
  if (s == "centered_exponential") return EntryLaw::centered_exponential;
  throw ArgumentError("unknown entry law '" + s + "'");
}

const char* to_string(EntryLaw law) {
  switch (law) {
    case EntryLaw::gaussian: return "gaussian";
    case EntryLaw::rademacher: return "rademacher";
    case EntryLaw::uniform_symmetric: return "uniform_symmetric";
    case EntryLaw::centered_exponential: return "centered_exponential";
  }
  return "?";
}

double abs_moment_bound(EntryLaw law, int m) {
  if (m < 0 || m > 40)
    throw ArgumentError("abs_moment_bound: order must be in [0,40]");
  if (m == 0) return 1.0;
  switch (law) {
    case EntryLaw::gaussian:
      // E|Z|^m = 2^{m/2} Gamma((m+1)/2) / sqrt(pi)
      return std::pow(2.0, m / 2.0) * std::tgamma((m + 1) / 2.0) /
             std::sqrt(std::numbers::pi);
    case EntryLaw::rademacher:
      return 1.0;
    case EntryLaw::uniform_symmetric:
      // |u| ~ uniform on [0, sqrt(3)]
      return std::pow(std::sqrt(3.0), m) / (m + 1);
    case EntryLaw::centered_exponential: {
      // E|E-1|^m = e^{-1} (m! + I_m) with I_m = int_0^1 t^m e^t dt,
      // summed as the everywhere-positive series sum_j 1/(j! (m+j+1)).
      double fact = 1.0;
      for (int k = 2; k <= m; ++k) fact *= k;
      double series = 0.0, jfact = 1.0;
      for (int j = 0; j <= 30; ++j) {
        if (j > 0) jfact *= j;
        series += 1.0 / (jfact * (m + j + 1));
      }
      return (fact + series) / std::numbers::e;
    }
  }
  return 0.0;
}

// ---------------------------------------------------------------------------
// EnsembleSpec

void EnsembleSpec::validate() const {
  if (N < 1)
    throw ValidationError("N", "matrix size must be >= 1, got " +
                                   std::to_string(N));
  if (families.empty()) throw ValidationError("families", "none given");
  std::set<std::string> names;
  for (const auto& [name, cov] : families) {
    if (!names.insert(name).second)
      throw ValidationError("families", "duplicate family '" + name + "'");
    cov.validate();
  }
}

int EnsembleSpec::family_pos(const std::string& name) const {
  for (size_t f = 0; f < families.size(); ++f)
    if (families[f].first == name) return static_cast<int>(f);
  throw ArgumentError("EnsembleSpec: unknown family '" + name + "'");
}

Matrix sqrt_factor(const CovSpec& cov) {
  cov.validate();
  return symmetric_sqrt(cov.as_matrix());
}

// ---------------------------------------------------------------------------
// Sampling

namespace {

PhiloxKey stream_key(std::uint64_t base_seed, int family,
                     std::uint64_t sample_hi) {
  std::uint64_t k = splitmix64(base_seed);
  k = splitmix64(k ^ (static_cast<std::uint64_t>(family) + 1));
  k = splitmix64(k ^ sample_hi);
  return {static_cast<std::uint32_t>(k), static_cast<std::uint32_t>(k >> 32)};
}

// Fill out[0], out[1] with two standardized variates from counter block b
// of matrix position (i,j).
void draw_pair(EntryLaw law, const PhiloxKey& key, std::uint32_t i,
               std::uint32_t j, std::uint32_t b, std::uint32_t sample_lo,
               double* out) {
  const PhiloxCounter r = philox4x32_10({i, j, b, sample_lo}, key);
  const std::uint64_t bits0 =
      static_cast<std::uint64_t>(r[0]) | (static_cast<std::uint64_t>(r[1]) << 32);
  const std::uint64_t bits1 =
      static_cast<std::uint64_t>(r[2]) | (static_cast<std::uint64_t>(r[3]) << 32);
  switch (law) {
    case EntryLaw::gaussian: {
      const double radius = std::sqrt(-2.0 * std::log(u01_open(bits0)));
      const double angle = 2.0 * std::numbers::pi * u01_open(bits1);
      out[0] = radius * std::cos(angle);
      out[1] = radius * std::sin(angle);
      return;
    }
    case EntryLaw::rademacher:
      out[0] = (bits0 >> 63) ? 1.0 : -1.0;
      out[1] = (bits1 >> 63) ? 1.0 : -1.0;
      return;
    case EntryLaw::uniform_symmetric: {
      const double s3 = std::sqrt(3.0);
      out[0] = s3 * (2.0 * u01_open(bits0) - 1.0);
      out[1] = s3 * (2.0 * u01_open(bits1) - 1.0);
      return;
    }
    case EntryLaw::centered_exponential:
      out[0] = -std::log(u01_open(bits0)) - 1.0;
      out[1] = -std::log(u01_open(bits1)) - 1.0;
      return;
  }
}

}  // namespace

SampledFamily sample_family(const EnsembleSpec& spec,
                            std::uint64_t sample_index) {
  spec.validate();
  const int N = spec.N;
  const double scale = 1.0 / std::sqrt(static_cast<double>(N));
  const std::uint32_t sample_lo = static_cast<std::uint32_t>(sample_index);
  const std::uint64_t sample_hi = sample_index >> 32;

  SampledFamily out;
  out.N = N;
  out.matrices.resize(spec.families.size());

  std::vector<double> u, v;
  for (size_t f = 0; f < spec.families.size(); ++f) {
    const CovSpec& cov = spec.families[f].second;
    const int m = cov.dim();
    const Matrix L = sqrt_factor(cov);
    const PhiloxKey key = stream_key(spec.base_seed, static_cast<int>(f),
                                     sample_hi);
    auto& mats = out.matrices[f];
    mats.assign(m, Matrix(N));

    u.assign(m + 1, 0.0);  // one slack slot for the odd-m discard
    v.assign(m, 0.0);
    for (int i = 0; i < N; ++i) {
      for (int j = i; j < N; ++j) {
        for (int b = 0; 2 * b < m; ++b)
          draw_pair(spec.law, key, static_cast<std::uint32_t>(i),
                    static_cast<std::uint32_t>(j),
                    static_cast<std::uint32_t>(b), sample_lo, &u[2 * b]);
        for (int l = 0; l < m; ++l) {
          double s = 0.0;
          for (int k = 0; k < m; ++k) s += L.at(l, k) * u[k];
          v[l] = s * scale;
        }
        for (int l = 0; l < m; ++l) {
          mats[l].at(i, j) = v[l];
          mats[l].at(j, i) = v[l];
        }
      }
    }
  }
  return out;
}

std::map<std::string, std::vector<double>> make_diagonals(
    const DiagonalLimit& diag, int N) {
  diag.validate();
  if (N < 1) throw ArgumentError("make_diagonals: N must be >= 1");
  const int A = static_cast<int>(diag.atoms.size());

  std::vector<int> count(A);
  int assigned = 0;
  for (int a = 0; a < A; ++a) {
    count[a] = static_cast<int>(std::floor(diag.atoms[a].weight * N));
    assigned += count[a];
  }
  // Hand the leftover slots to the heaviest atoms, earliest-first on ties.
  std::vector<int> order(A);
  for (int a = 0; a < A; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return diag.atoms[a].weight > diag.atoms[b].weight;
  });
  for (int r = 0; r < N - assigned; ++r) ++count[order[r % A]];

  std::map<std::string, std::vector<double>> out;
  for (const auto& sym : diag.symbols) {
    std::vector<double> d(N);
    int pos = 0;
    for (int a = 0; a < A; ++a) {
      const double val = diag.atoms[a].values.at(sym);
      for (int k = 0; k < count[a]; ++k) d[pos++] = val;
    }
    out.emplace(sym, std::move(d));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Sampler sanity checks

int EnsembleReport::flag_count() const {
  int c = 0;
  for (const auto& row : rows) c += row.flagged;
  return c;
}

EnsembleReport validate_ensemble(const EnsembleSpec& spec, int n_samples) {
  spec.validate();
  if (n_samples < 2)
    throw ArgumentError("validate_ensemble: need at least 2 samples");
  const int N = spec.N;

  struct Probe {
    std::string label;
    double target;
    bool one_sided;  // flag only when the estimate exceeds the target
    std::function<double(const SampledFamily&)> value;
  };
  std::vector<Probe> probes;

  std::vector<std::pair<int, int>> positions{{0, 0}};
  if (N >= 2) positions.push_back({0, 1});
  if (N >= 3) positions.push_back({1, 2});

  const int F = static_cast<int>(spec.families.size());
  for (int f = 0; f < F; ++f) {
    const auto& [fname, cov] = spec.families[f];
    for (int l = 0; l < cov.dim(); ++l) {
      for (auto [i, j] : positions) {
        probes.push_back({"mean[" + fname + "." + cov.name_of(l) + "@(" +
                              std::to_string(i) + "," + std::to_string(j) + ")]",
                          0.0, false,
                          [f, l, i = i, j = j](const SampledFamily& s) {
                            return s.matrix(f, l).at(i, j);
                          }});
      }
      for (int l2 = l; l2 < cov.dim(); ++l2) {
        const auto [i, j] = positions.back();
        probes.push_back({"cov[" + fname + "." + cov.name_of(l) + "," + fname +
                              "." + cov.name_of(l2) + "@(" + std::to_string(i) +
                              "," + std::to_string(j) + ")]",
                          cov.c(l, l2) / N, false,
                          [f, l, l2, i = i, j = j](const SampledFamily& s) {
                            return s.matrix(f, l).at(i, j) *
                                   s.matrix(f, l2).at(j, i);
                          }});
      }
      // Absolute fourth moment against the Hoelder/Minkowski bound
      // (sum_k |L_{lk}|)^4 E|u|^4 / N^2.
      const Matrix L = sqrt_factor(cov);
      double row_abs = 0.0;
      for (int k = 0; k < cov.dim(); ++k) row_abs += std::abs(L.at(l, k));
      const double bound4 = std::pow(row_abs, 4) *
                            abs_moment_bound(spec.law, 4) /
                            (static_cast<double>(N) * N);
      const auto [i, j] = positions.back();
      probes.push_back({"abs4[" + fname + "." + cov.name_of(l) + "@(" +
                            std::to_string(i) + "," + std::to_string(j) + ")]",
                        bound4, true,
                        [f, l, i = i, j = j](const SampledFamily& s) {
                          return std::pow(std::abs(s.matrix(f, l).at(i, j)), 4);
                        }});
    }
  }
  for (int f1 = 0; f1 < F; ++f1)
    for (int f2 = f1 + 1; f2 < F; ++f2) {
      const auto [i, j] = positions.back();
      probes.push_back(
          {"cross[" + spec.families[f1].first + "." +
               spec.families[f1].second.name_of(0) + "," +
               spec.families[f2].first + "." +
               spec.families[f2].second.name_of(0) + "@(" + std::to_string(i) +
               "," + std::to_string(j) + ")]",
           0.0, false, [f1, f2, i = i, j = j](const SampledFamily& s) {
             return s.matrix(f1, 0).at(i, j) * s.matrix(f2, 0).at(j, i);
           }});
    }

  // One pass over the samples, shifted-data accumulation per probe.
  const size_t P = probes.size();
  std::vector<double> shift(P), sum_d(P, 0.0), sum_d2(P, 0.0);
  for (int s = 0; s < n_samples; ++s) {
    const SampledFamily sf = sample_family(spec, static_cast<std::uint64_t>(s));
    for (size_t p = 0; p < P; ++p) {
      const double value = probes[p].value(sf);
      if (s == 0) shift[p] = value;
      const double d = value - shift[p];
      sum_d[p] += d;
      sum_d2[p] += d * d;
    }
  }

  EnsembleReport report;
  report.n_samples = n_samples;
  for (size_t p = 0; p < P; ++p) {
    EnsembleCheckRow row;
    row.quantity = probes[p].label;
    row.target = probes[p].target;
    row.estimate = shift[p] + sum_d[p] / n_samples;
    const double var = std::max(
        0.0, (sum_d2[p] - sum_d[p] * sum_d[p] / n_samples) / (n_samples - 1));
    row.stderr_est = std::sqrt(var / n_samples);
    const double dev = row.estimate - row.target;
    if (row.stderr_est > 0.0)
      row.z = dev / row.stderr_est;
    else
      row.z = std::abs(dev) <= 1e-9
                  ? 0.0
                  : std::numeric_limits<double>::infinity();
    row.flagged = probes[p].one_sided ? row.z > 5.0 : std::abs(row.z) > 5.0;
    report.rows.push_back(std::move(row));
  }
  return report;
}

}  // namespace bifree
