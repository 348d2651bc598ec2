#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "bifree/errors.hpp"

namespace bifree {

/// Hard cap for exhaustive enumeration of partitions of {1,...,n}.
/// Bell(12) ~ 4.2e6 is the largest family we are willing to walk.
inline constexpr int kMaxEnumerationSize = 12;

/// A permutation of {1,...,n}, stored as the image list (1-based).
class Permutation {
 public:
  explicit Permutation(std::vector<int> images);

  static Permutation identity(int n);
  /// The long cycle gamma: i -> i+1 for i < n, n -> 1.
  static Permutation long_cycle(int n);

  int n() const { return static_cast<int>(images_.size()); }
  int operator()(int i) const;  // 1-based application
  const std::vector<int>& images() const { return images_; }

  Permutation inverse() const;

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> images_;
};

/// Composition (f * g)(i) = f(g(i)): apply g first, then f.
Permutation compose(const Permutation& f, const Permutation& g);

/// A set partition of {1,...,n} in canonical form: every block sorted
/// ascending, blocks ordered by their least element.
class SetPartition {
 public:
  SetPartition(int n, std::vector<std::vector<int>> blocks);

  static SetPartition discrete(int n);  // n singleton blocks
  static SetPartition full(int n);      // one block {1,...,n}

  int n() const { return n_; }
  const std::vector<std::vector<int>>& blocks() const { return blocks_; }
  int block_count() const { return static_cast<int>(blocks_.size()); }

  /// Index into blocks() of the block containing element i (1-based).
  int block_of(int i) const;

  /// Restricted growth string: block_of for each element in order. Two
  /// partitions are equal iff their rgs vectors are equal; handy as a
  /// compact map key.
  const std::vector<int>& rgs() const { return block_index_; }

  bool is_pairing() const;

  std::string to_string() const;

  friend bool operator==(const SetPartition& a, const SetPartition& b) {
    return a.n_ == b.n_ && a.block_index_ == b.block_index_;
  }

 private:
  int n_ = 0;
  std::vector<std::vector<int>> blocks_;
  std::vector<int> block_index_;  // element i-1 -> block index
};

/// True iff no two blocks cross: there are no a < b < c < d with
/// a,c in one block and b,d in another.
bool is_noncrossing(const SetPartition& p);

/// True iff every block of p is contained in a block of q (p refines q).
/// Throws ArgumentError when the ground sets differ.
bool refines(const SetPartition& p, const SetPartition& q);

using PartitionVisitor = std::function<void(const SetPartition&)>;

/// Visit every partition of {1,...,n} exactly once. Throws SizeLimitError
/// beyond kMaxEnumerationSize.
void for_each_set_partition(int n, const PartitionVisitor& visit);

/// Visit every perfect matching of {1,...,n}; no-op for odd n > 0.
void for_each_pairing(int n, const PartitionVisitor& visit);

/// Visit every non-crossing partition (or pairing) of {1,...,n}. Generates
/// directly, without scanning all of Bell(n); agrees with filtering
/// for_each_set_partition by is_noncrossing.
void for_each_noncrossing(int n, bool pairings_only,
                          const PartitionVisitor& visit);

std::vector<SetPartition> enumerate_set_partitions(int n);
std::vector<SetPartition> enumerate_pairings(int n);
std::vector<SetPartition> enumerate_noncrossing(int n, bool pairings_only);

/// Partition of positions {1,...,labels.size()} grouping equal labels.
template <typename T>
SetPartition kernel_partition(const std::vector<T>& labels) {
  const int n = static_cast<int>(labels.size());
  std::map<T, int> first_seen;
  std::vector<std::vector<int>> blocks;
  for (int i = 0; i < n; ++i) {
    auto [it, inserted] =
        first_seen.emplace(labels[i], static_cast<int>(blocks.size()));
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(i + 1);
  }
  return SetPartition(n, std::move(blocks));
}

/// For a pairing, the involution swapping the two members of each pair.
/// Throws ArgumentError when p is not a pairing.
Permutation pairing_to_permutation(const SetPartition& p);

/// The partition of {1,...,n} into the orbits of a permutation.
SetPartition cycle_partition(const Permutation& perm);

/// Kreweras complement on the non-crossing lattice: encode p as the
/// permutation whose cycles are its blocks traversed increasingly, and
/// return the cycle partition of p^{-1} composed after the long cycle.
/// For a pairing this reduces to the orbits of i -> p~(gamma(i)).
/// Throws ArgumentError when p is crossing.
SetPartition kreweras_complement(const SetPartition& p);

/// Moebius function of the interval [sigma, tau] in the non-crossing
/// partition lattice, by the defining recursion with memoization.
/// Requires sigma, tau non-crossing with sigma refining tau.
long long nc_mobius(const SetPartition& sigma, const SetPartition& tau);

}  // namespace bifree
