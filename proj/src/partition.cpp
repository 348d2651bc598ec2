#include "bifree/partition.hpp"

#include <algorithm>
#include <mutex>
#include <sstream>
#include <unordered_map>

namespace bifree {

namespace {

void check_enum_size(int n, const char* what) {
  if (n < 0) throw ArgumentError(std::string(what) + ": n must be >= 0");
  if (n > kMaxEnumerationSize)
    throw SizeLimitError(std::string(what) + ": n = " + std::to_string(n) +
                         " exceeds the enumeration cap " +
                         std::to_string(kMaxEnumerationSize));
}

}  // namespace

// ---------------------------------------------------------------------------
// Permutation

Permutation::Permutation(std::vector<int> images) : images_(std::move(images)) {
  const int n = static_cast<int>(images_.size());
  std::vector<bool> seen(n, false);
  for (int v : images_) {
    if (v < 1 || v > n || seen[v - 1])
      throw ArgumentError("Permutation: image list is not a bijection on {1,...," +
                          std::to_string(n) + "}");
    seen[v - 1] = true;
  }
}

Permutation Permutation::identity(int n) {
  std::vector<int> im(n);
  for (int i = 0; i < n; ++i) im[i] = i + 1;
  return Permutation(std::move(im));
}

Permutation Permutation::long_cycle(int n) {
  if (n < 1) throw ArgumentError("long_cycle: n must be >= 1");
  std::vector<int> im(n);
  for (int i = 0; i < n - 1; ++i) im[i] = i + 2;
  im[n - 1] = 1;
  return Permutation(std::move(im));
}

int Permutation::operator()(int i) const {
  if (i < 1 || i > n())
    throw ArgumentError("Permutation: point " + std::to_string(i) +
                        " outside {1,...," + std::to_string(n()) + "}");
  return images_[i - 1];
}

Permutation Permutation::inverse() const {
  std::vector<int> im(images_.size());
  for (int i = 0; i < n(); ++i) im[images_[i] - 1] = i + 1;
  return Permutation(std::move(im));
}

Permutation compose(const Permutation& f, const Permutation& g) {
  if (f.n() != g.n()) throw ArgumentError("compose: size mismatch");
  std::vector<int> im(f.n());
  for (int i = 1; i <= f.n(); ++i) im[i - 1] = f(g(i));
  return Permutation(std::move(im));
}

// ---------------------------------------------------------------------------
// SetPartition

SetPartition::SetPartition(int n, std::vector<std::vector<int>> blocks)
    : n_(n), blocks_(std::move(blocks)) {
  if (n < 0) throw ArgumentError("SetPartition: n must be >= 0");
  for (auto& b : blocks_) {
    if (b.empty()) throw ArgumentError("SetPartition: empty block");
    std::sort(b.begin(), b.end());
  }
  std::sort(blocks_.begin(), blocks_.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });
  block_index_.assign(n, -1);
  for (int bi = 0; bi < static_cast<int>(blocks_.size()); ++bi) {
    for (int v : blocks_[bi]) {
      if (v < 1 || v > n)
        throw ArgumentError("SetPartition: element " + std::to_string(v) +
                            " outside {1,...," + std::to_string(n) + "}");
      if (block_index_[v - 1] != -1)
        throw ArgumentError("SetPartition: element " + std::to_string(v) +
                            " appears twice");
      block_index_[v - 1] = bi;
    }
  }
  for (int i = 0; i < n; ++i)
    if (block_index_[i] == -1)
      throw ArgumentError("SetPartition: element " + std::to_string(i + 1) +
                          " missing");
}

SetPartition SetPartition::discrete(int n) {
  std::vector<std::vector<int>> blocks(n);
  for (int i = 0; i < n; ++i) blocks[i] = {i + 1};
  return SetPartition(n, std::move(blocks));
}

SetPartition SetPartition::full(int n) {
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  std::vector<std::vector<int>> blocks;
  if (n > 0) blocks.push_back(std::move(all));
  return SetPartition(n, std::move(blocks));
}

int SetPartition::block_of(int i) const {
  if (i < 1 || i > n_)
    throw ArgumentError("block_of: element " + std::to_string(i) +
                        " outside {1,...," + std::to_string(n_) + "}");
  return block_index_[i - 1];
}

bool SetPartition::is_pairing() const {
  for (const auto& b : blocks_)
    if (b.size() != 2) return false;
  return true;
}

std::string SetPartition::to_string() const {
  std::ostringstream os;
  os << '{';
  for (size_t bi = 0; bi < blocks_.size(); ++bi) {
    if (bi) os << ',';
    os << '{';
    for (size_t k = 0; k < blocks_[bi].size(); ++k) {
      if (k) os << ',';
      os << blocks_[bi][k];
    }
    os << '}';
  }
  os << '}';
  return os.str();
}

// ---------------------------------------------------------------------------
// Lattice predicates

bool is_noncrossing(const SetPartition& p) {
  // Walk 1..n keeping a stack of open blocks; a partition is non-crossing
  // exactly when every element either opens a new block or extends the
  // block currently on top.
  const int n = p.n();
  std::vector<int> first(p.block_count()), last(p.block_count());
  for (int bi = 0; bi < p.block_count(); ++bi) {
    first[bi] = p.blocks()[bi].front();
    last[bi] = p.blocks()[bi].back();
  }
  std::vector<int> stack;
  for (int i = 1; i <= n; ++i) {
    const int b = p.block_of(i);
    if (first[b] == i)
      stack.push_back(b);
    else if (stack.empty() || stack.back() != b)
      return false;
    if (last[b] == i) stack.pop_back();
  }
  return true;
}

bool refines(const SetPartition& p, const SetPartition& q) {
  if (p.n() != q.n()) throw ArgumentError("refines: ground sets differ");
  for (const auto& b : p.blocks()) {
    const int qb = q.block_of(b.front());
    for (int v : b)
      if (q.block_of(v) != qb) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------
// Enumeration

namespace {

void set_partition_rec(int n, int next, std::vector<std::vector<int>>& acc,
                       const PartitionVisitor& visit) {
  if (next > n) {
    visit(SetPartition(n, acc));
    return;
  }
  // Index, not iterate: the recursive call grows acc and may reallocate.
  for (size_t i = 0; i < acc.size(); ++i) {
    acc[i].push_back(next);
    set_partition_rec(n, next + 1, acc, visit);
    acc[i].pop_back();
  }
  acc.emplace_back(1, next);
  set_partition_rec(n, next + 1, acc, visit);
  acc.pop_back();
}

void pairing_rec(int n, std::vector<bool>& used,
                 std::vector<std::vector<int>>& acc,
                 const PartitionVisitor& visit) {
  int lo = 0;
  while (lo < n && used[lo]) ++lo;
  if (lo == n) {
    visit(SetPartition(n, acc));
    return;
  }
  used[lo] = true;
  for (int hi = lo + 1; hi < n; ++hi) {
    if (used[hi]) continue;
    used[hi] = true;
    acc.push_back({lo + 1, hi + 1});
    pairing_rec(n, used, acc, visit);
    acc.pop_back();
    used[hi] = false;
  }
  used[lo] = false;
}

// Direct generator for non-crossing partitions. Maintains a worklist of
// independent segments; the first element of the segment being processed
// picks the rest of its block, and the gaps between consecutive members
// become fresh segments (nothing may straddle a gap boundary without
// crossing the chosen block).
struct NcGenerator {
  int n;
  const PartitionVisitor& visit;
  std::vector<std::vector<int>> work = {};
  std::vector<std::vector<int>> acc = {};

  void run() {
    if (work.empty()) {
      visit(SetPartition(n, acc));
      return;
    }
    if (work.back().empty()) {
      work.pop_back();
      run();
      work.emplace_back();
      return;
    }
    std::vector<int> seg = work.back();
    work.pop_back();
    std::vector<int> block{seg[0]};
    choose(seg, 1, block);
    work.push_back(std::move(seg));
  }

  // block holds the members chosen so far; gap_start indexes the first
  // element of seg not yet assigned to a gap segment.
  void choose(const std::vector<int>& seg, int gap_start,
              std::vector<int>& block) {
    const int m = static_cast<int>(seg.size());
    work.emplace_back(seg.begin() + gap_start, seg.end());
    acc.push_back(block);
    run();
    acc.pop_back();
    work.pop_back();
    for (int i = gap_start; i < m; ++i) {
      work.emplace_back(seg.begin() + gap_start, seg.begin() + i);
      block.push_back(seg[i]);
      choose(seg, i + 1, block);
      block.pop_back();
      work.pop_back();
    }
  }
};

// Cached full lists of non-crossing partitions for the sizes the cumulant
// machinery hits in inner loops.
constexpr int kNcCacheMax = 10;

const std::vector<SetPartition>& cached_noncrossing(int n) {
  static std::mutex mu;
  static std::vector<std::vector<SetPartition>> cache(kNcCacheMax + 1);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (slot.empty()) {
    NcGenerator gen{n, [&](const SetPartition& p) { slot.push_back(p); }};
    if (n == 0)
      slot.push_back(SetPartition(0, {}));
    else {
      std::vector<int> all(n);
      for (int i = 0; i < n; ++i) all[i] = i + 1;
      gen.work.push_back(std::move(all));
      gen.run();
    }
  }
  return slot;
}

}  // namespace

void for_each_set_partition(int n, const PartitionVisitor& visit) {
  check_enum_size(n, "for_each_set_partition");
  std::vector<std::vector<int>> acc;
  set_partition_rec(n, 1, acc, visit);
}

void for_each_pairing(int n, const PartitionVisitor& visit) {
  check_enum_size(n, "for_each_pairing");
  if (n % 2 != 0) return;
  std::vector<bool> used(n, false);
  std::vector<std::vector<int>> acc;
  pairing_rec(n, used, acc, visit);
}

void for_each_noncrossing(int n, bool pairings_only,
                          const PartitionVisitor& visit) {
  check_enum_size(n, "for_each_noncrossing");
  if (pairings_only) {
    for_each_pairing(n, [&](const SetPartition& p) {
      if (is_noncrossing(p)) visit(p);
    });
    return;
  }
  if (n <= kNcCacheMax) {
    for (const auto& p : cached_noncrossing(n)) visit(p);
    return;
  }
  NcGenerator gen{n, visit};
  std::vector<int> all(n);
  for (int i = 0; i < n; ++i) all[i] = i + 1;
  gen.work.push_back(std::move(all));
  gen.run();
}

namespace {

std::vector<SetPartition> collect(int n,
                                  void (*each)(int, const PartitionVisitor&)) {
  std::vector<SetPartition> out;
  each(n, [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

}  // namespace

std::vector<SetPartition> enumerate_set_partitions(int n) {
  return collect(n, for_each_set_partition);
}

std::vector<SetPartition> enumerate_pairings(int n) {
  return collect(n, for_each_pairing);
}

std::vector<SetPartition> enumerate_noncrossing(int n, bool pairings_only) {
  std::vector<SetPartition> out;
  for_each_noncrossing(n, pairings_only,
                       [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

// ---------------------------------------------------------------------------
// Kreweras complement and friends

Permutation pairing_to_permutation(const SetPartition& p) {
  if (!p.is_pairing())
    throw ArgumentError("pairing_to_permutation: " + p.to_string() +
                        " is not a pairing");
  std::vector<int> im(p.n());
  for (const auto& b : p.blocks()) {
    im[b[0] - 1] = b[1];
    im[b[1] - 1] = b[0];
  }
  return Permutation(std::move(im));
}

SetPartition cycle_partition(const Permutation& perm) {
  const int n = perm.n();
  std::vector<bool> seen(n, false);
  std::vector<std::vector<int>> blocks;
  for (int i = 1; i <= n; ++i) {
    if (seen[i - 1]) continue;
    std::vector<int> orbit;
    int j = i;
    do {
      seen[j - 1] = true;
      orbit.push_back(j);
      j = perm(j);
    } while (j != i);
    blocks.push_back(std::move(orbit));
  }
  return SetPartition(n, std::move(blocks));
}

SetPartition kreweras_complement(const SetPartition& p) {
  if (!is_noncrossing(p))
    throw ArgumentError("kreweras_complement: " + p.to_string() +
                        " is crossing");
  const int n = p.n();
  if (n == 0) return p;
  // Encode p as a permutation: each block becomes the cycle traversing its
  // elements in increasing order.
  std::vector<int> enc(n);
  for (const auto& b : p.blocks()) {
    for (size_t k = 0; k + 1 < b.size(); ++k) enc[b[k] - 1] = b[k + 1];
    enc[b.back() - 1] = b.front();
  }
  const Permutation p_enc_inv = Permutation(std::move(enc)).inverse();
  return cycle_partition(compose(p_enc_inv, Permutation::long_cycle(n)));
}

// ---------------------------------------------------------------------------
// Moebius function on NC(n)

namespace {

struct IntervalKey {
  std::vector<int> data;
  bool operator==(const IntervalKey&) const = default;
};

struct IntervalKeyHash {
  size_t operator()(const IntervalKey& k) const {
    size_t h = 1469598103934665603ull;
    for (int v : k.data) {
      h ^= static_cast<size_t>(v) + 0x9e3779b9;
      h *= 1099511628211ull;
    }
    return h;
  }
};

using MobiusMemo = std::unordered_map<IntervalKey, long long, IntervalKeyHash>;

IntervalKey make_key(const SetPartition& s, const SetPartition& t) {
  IntervalKey k;
  k.data.reserve(2 * s.n() + 1);
  k.data.push_back(s.n());
  k.data.insert(k.data.end(), s.rgs().begin(), s.rgs().end());
  k.data.insert(k.data.end(), t.rgs().begin(), t.rgs().end());
  return k;
}

long long mobius_rec(const SetPartition& s, const SetPartition& t,
                     const std::vector<SetPartition>& all_nc,
                     MobiusMemo& memo) {
  if (s == t) return 1;
  auto key = make_key(s, t);
  if (auto it = memo.find(key); it != memo.end()) return it->second;
  long long acc = 0;
  for (const auto& rho : all_nc) {
    if (rho == t) continue;
    if (refines(s, rho) && refines(rho, t))
      acc += mobius_rec(s, rho, all_nc, memo);
  }
  const long long val = -acc;
  memo.emplace(std::move(key), val);
  return val;
}

}  // namespace

long long nc_mobius(const SetPartition& sigma, const SetPartition& tau) {
  if (sigma.n() != tau.n()) throw ArgumentError("nc_mobius: ground sets differ");
  if (!is_noncrossing(sigma) || !is_noncrossing(tau))
    throw ArgumentError("nc_mobius: arguments must be non-crossing");
  if (!refines(sigma, tau))
    throw ArgumentError("nc_mobius: " + sigma.to_string() +
                        " does not refine " + tau.to_string());
  const int n = sigma.n();
  check_enum_size(n, "nc_mobius");

  static std::mutex mu;
  static MobiusMemo memo;
  std::lock_guard<std::mutex> lock(mu);
  if (n <= kNcCacheMax) return mobius_rec(sigma, tau, cached_noncrossing(n), memo);
  return mobius_rec(sigma, tau, enumerate_noncrossing(n, false), memo);
}

}  // namespace bifree
