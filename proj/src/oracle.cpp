#include "bifree/oracle.hpp"

#include <cmath>
#include <cstdint>
#include <map>
#include <memory>

namespace bifree {

namespace {

constexpr int kMaxCumulantLength = 10;
constexpr int kMaxVanishingLength = 8;
constexpr std::uint64_t kMaxTableEntries = 1u << 21;

WordIds subword(std::span<const int> word, const std::vector<int>& positions) {
  WordIds out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(word[p - 1]);
  return out;
}

SideMap sub_side_map(const SideMap& chi, const std::vector<int>& positions) {
  SideMap out;
  out.reserve(positions.size());
  for (int p : positions) out.push_back(chi[p - 1]);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------
// MomentOracle

MomentOracle::MomentOracle(std::vector<Symbol> alphabet, int max_len)
    : alphabet_(std::move(alphabet)), max_len_(max_len) {
  if (alphabet_.empty()) throw ArgumentError("MomentOracle: empty alphabet");
  if (max_len_ < 1) throw ArgumentError("MomentOracle: max_len must be >= 1");
  for (size_t i = 0; i < alphabet_.size(); ++i)
    for (size_t j = i + 1; j < alphabet_.size(); ++j)
      if (alphabet_[i] == alphabet_[j])
        throw ArgumentError("MomentOracle: duplicate symbol '" +
                            alphabet_[i].name + "'");
}

const Symbol& MomentOracle::symbol(int id) const {
  if (id < 0 || id >= alphabet_size())
    throw ArgumentError("MomentOracle: symbol id " + std::to_string(id) +
                        " out of range");
  return alphabet_[id];
}

std::optional<int> MomentOracle::find_symbol(const std::string& name,
                                             Side side) const {
  for (int i = 0; i < alphabet_size(); ++i)
    if (alphabet_[i].name == name && alphabet_[i].side == side) return i;
  return std::nullopt;
}

int MomentOracle::symbol_id(const std::string& name, Side side) const {
  if (auto id = find_symbol(name, side)) return *id;
  throw ArgumentError("MomentOracle: no symbol '" + name + "' on the " +
                      (side == Side::left ? "left" : "right"));
}

void MomentOracle::check_word(std::span<const int> word) const {
  if (static_cast<int>(word.size()) > max_len_)
    throw OracleGapError("MomentOracle: word of length " +
                         std::to_string(word.size()) +
                         " exceeds table depth " + std::to_string(max_len_));
  for (int id : word)
    if (id < 0 || id >= alphabet_size())
      throw ArgumentError("MomentOracle: symbol id " + std::to_string(id) +
                          " out of range");
}

void MomentOracle::set(std::span<const int> word, double value) {
  check_word(word);
  if (word.empty())
    throw ArgumentError("MomentOracle: the empty word is fixed at 1");
  table_[WordIds(word.begin(), word.end())] = value;
}

bool MomentOracle::has(std::span<const int> word) const {
  if (word.empty()) return true;
  if (static_cast<int>(word.size()) > max_len_) return false;
  return table_.count(WordIds(word.begin(), word.end())) > 0;
}

double MomentOracle::operator()(std::span<const int> word) const {
  check_word(word);
  if (word.empty()) return 1.0;
  auto it = table_.find(WordIds(word.begin(), word.end()));
  if (it == table_.end()) {
    std::string w;
    for (int id : word) w += symbol(id).name + " ";
    throw OracleGapError("MomentOracle: no entry for word [ " + w + "]");
  }
  return it->second;
}

void MomentOracle::fill(
    const std::function<double(std::span<const int>)>& gen) {
  std::uint64_t total = 0, pow = 1;
  for (int len = 1; len <= max_len_; ++len) {
    pow *= static_cast<std::uint64_t>(alphabet_size());
    total += pow;
    if (total > kMaxTableEntries)
      throw SizeLimitError("MomentOracle::fill: table would exceed " +
                           std::to_string(kMaxTableEntries) + " entries");
  }
  WordIds w;
  std::function<void()> rec = [&] {
    if (!w.empty()) set(w, gen(w));
    if (static_cast<int>(w.size()) == max_len_) return;
    for (int id = 0; id < alphabet_size(); ++id) {
      w.push_back(id);
      rec();
      w.pop_back();
    }
  };
  rec();
}

SideMap MomentOracle::chi_of(std::span<const int> word) const {
  SideMap chi;
  chi.reserve(word.size());
  for (int id : word) chi.push_back(symbol(id).side);
  return chi;
}

// ---------------------------------------------------------------------------
// Transforms

double phi_over_partition(const MomentOracle& phi, const SetPartition& p,
                          std::span<const int> word) {
  if (p.n() != static_cast<int>(word.size()))
    throw ArgumentError("phi_over_partition: partition size != word length");
  double prod = 1.0;
  for (const auto& block : p.blocks()) prod *= phi(subword(word, block));
  return prod;
}

double bifree_cumulant(const MomentOracle& phi, const SideMap& chi,
                       std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) throw ArgumentError("bifree_cumulant: empty word");
  if (static_cast<int>(chi.size()) != n)
    throw ArgumentError("bifree_cumulant: side map size != word length");
  if (n > kMaxCumulantLength)
    throw SizeLimitError("bifree_cumulant: word length " + std::to_string(n) +
                         " exceeds cap " + std::to_string(kMaxCumulantLength));
  const Permutation s = shuffle_permutation(chi);
  const SetPartition one = SetPartition::full(n);
  double acc = 0.0;
  for_each_noncrossing(n, false, [&](const SetPartition& rho) {
    acc += phi_over_partition(phi, relabel(rho, s), word) *
           static_cast<double>(nc_mobius(rho, one));
  });
  return acc;
}

namespace {

double free_cum_rec(const MomentOracle& phi, const WordIds& w,
                    std::map<WordIds, double>& memo) {
  if (auto it = memo.find(w); it != memo.end()) return it->second;
  const int n = static_cast<int>(w.size());
  double total = phi(w);
  for_each_noncrossing(n, false, [&](const SetPartition& p) {
    if (p.block_count() <= 1) return;
    double prod = 1.0;
    for (const auto& block : p.blocks()) {
      prod *= free_cum_rec(phi, subword(w, block), memo);
      if (prod == 0.0) break;
    }
    total -= prod;
  });
  memo.emplace(w, total);
  return total;
}

}  // namespace

double free_cumulant_recursive(const MomentOracle& phi,
                               std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) throw ArgumentError("free_cumulant_recursive: empty word");
  if (n > kMaxCumulantLength)
    throw SizeLimitError("free_cumulant_recursive: word too long");
  std::map<WordIds, double> memo;
  return free_cum_rec(phi, WordIds(word.begin(), word.end()), memo);
}

CumulantFn cumulant_fn_of(const MomentOracle& phi) {
  using Key = std::pair<SideMap, WordIds>;
  auto cache = std::make_shared<std::map<Key, double>>();
  return [&phi, cache](const SideMap& chi, std::span<const int> word) {
    Key key{chi, WordIds(word.begin(), word.end())};
    if (auto it = cache->find(key); it != cache->end()) return it->second;
    const double v = bifree_cumulant(phi, chi, word);
    cache->emplace(std::move(key), v);
    return v;
  };
}

double cumulant_over_partition(const CumulantFn& kappa, const SideMap& chi,
                               const SetPartition& p,
                               std::span<const int> word) {
  if (p.n() != static_cast<int>(word.size()) ||
      chi.size() != word.size())
    throw ArgumentError("cumulant_over_partition: size mismatch");
  double prod = 1.0;
  for (const auto& block : p.blocks()) {
    prod *= kappa(sub_side_map(chi, block), subword(word, block));
    if (prod == 0.0) break;
  }
  return prod;
}

double moment_from_cumulants(const CumulantFn& kappa, const SideMap& chi,
                             std::span<const int> word) {
  const int n = static_cast<int>(word.size());
  if (n == 0) return 1.0;
  if (static_cast<int>(chi.size()) != n)
    throw ArgumentError("moment_from_cumulants: side map size != word length");
  if (n > kMaxCumulantLength)
    throw SizeLimitError("moment_from_cumulants: word too long");
  double acc = 0.0;
  for_each_bnc(chi, false, [&](const SetPartition& pi) {
    acc += cumulant_over_partition(kappa, chi, pi, word);
  });
  return acc;
}

// ---------------------------------------------------------------------------
// Vanishing of mixed cumulants

VanishingReport check_bifree_vanishing(const MomentOracle& phi,
                                       const std::vector<int>& family_of,
                                       int max_n, double tol) {
  if (static_cast<int>(family_of.size()) != phi.alphabet_size())
    throw ArgumentError(
        "check_bifree_vanishing: family_of must assign every symbol");
  if (max_n > kMaxVanishingLength)
    throw SizeLimitError("check_bifree_vanishing: max_n " +
                         std::to_string(max_n) + " exceeds cap " +
                         std::to_string(kMaxVanishingLength));
  if (max_n > phi.max_len())
    throw ArgumentError(
        "check_bifree_vanishing: max_n exceeds the oracle's table depth");

  VanishingReport report;
  const int A = phi.alphabet_size();
  WordIds w;
  std::function<void()> rec = [&] {
    const int n = static_cast<int>(w.size());
    if (n >= 2) {
      bool mixed = false;
      for (int i = 1; i < n && !mixed; ++i)
        mixed = family_of[w[i]] != family_of[w[0]];
      if (mixed) {
        const double v = bifree_cumulant(phi, phi.chi_of(w), w);
        ++report.words_checked;
        report.max_abs = std::max(report.max_abs, std::abs(v));
        if (std::abs(v) > tol && report.violations.size() < 16)
          report.violations.push_back({w, v});
      }
    }
    if (n == max_n) return;
    for (int id = 0; id < A; ++id) {
      w.push_back(id);
      rec();
      w.pop_back();
    }
  };
  rec();
  return report;
}

}  // namespace bifree
