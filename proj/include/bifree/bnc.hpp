#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bifree/partition.hpp"

namespace bifree {

enum class Side : std::uint8_t { left, right };

inline char side_char(Side s) { return s == Side::left ? 'l' : 'r'; }

/// chi: position k (1-based) -> side of the k-th letter.
using SideMap = std::vector<Side>;

SideMap side_map_from_string(const std::string& word);  // e.g. "lrlr"
std::string to_string(const SideMap& chi);

/// The shuffle permutation s_chi: list the left positions in increasing
/// order followed by the right positions in decreasing order; s_chi(k) is
/// the k-th entry of that list. It is the unique bijection putting the
/// left positions first in their original order and the right positions
/// after them reversed.
Permutation shuffle_permutation(const SideMap& chi);

/// p is bi-non-crossing for chi iff its pullback through s_chi is
/// non-crossing in the ordinary sense.
bool is_bi_noncrossing(const SetPartition& p, const SideMap& chi);

/// Push a partition forward through a permutation: blocks {s(x) : x in V}.
SetPartition relabel(const SetPartition& p, const Permutation& s);

using BncVisitor = PartitionVisitor;

/// Visit every bi-non-crossing partition (or pairing) for chi: the images
/// of the non-crossing ones under s_chi.
void for_each_bnc(const SideMap& chi, bool pairings_only,
                  const BncVisitor& visit);

std::vector<SetPartition> enumerate_bnc(const SideMap& chi, bool pairings_only);

}  // namespace bifree
