#include "bifree/bnc.hpp"

namespace bifree {

SideMap side_map_from_string(const std::string& word) {
  SideMap chi;
  chi.reserve(word.size());
  for (char c : word) {
    if (c == 'l' || c == 'L')
      chi.push_back(Side::left);
    else if (c == 'r' || c == 'R')
      chi.push_back(Side::right);
    else
      throw ParseError(std::string("side map: unexpected character '") + c +
                       "' (use 'l'/'r')");
  }
  return chi;
}

std::string to_string(const SideMap& chi) {
  std::string s;
  s.reserve(chi.size());
  for (Side v : chi) s.push_back(side_char(v));
  return s;
}

Permutation shuffle_permutation(const SideMap& chi) {
  const int n = static_cast<int>(chi.size());
  if (n == 0) throw ArgumentError("shuffle_permutation: empty side map");
  std::vector<int> order;
  order.reserve(n);
  for (int k = 1; k <= n; ++k)
    if (chi[k - 1] == Side::left) order.push_back(k);
  for (int k = n; k >= 1; --k)
    if (chi[k - 1] == Side::right) order.push_back(k);
  return Permutation(std::move(order));
}

SetPartition relabel(const SetPartition& p, const Permutation& s) {
  if (p.n() != s.n()) throw ArgumentError("relabel: size mismatch");
  std::vector<std::vector<int>> blocks;
  blocks.reserve(p.block_count());
  for (const auto& b : p.blocks()) {
    std::vector<int> nb;
    nb.reserve(b.size());
    for (int v : b) nb.push_back(s(v));
    blocks.push_back(std::move(nb));
  }
  return SetPartition(p.n(), std::move(blocks));
}

bool is_bi_noncrossing(const SetPartition& p, const SideMap& chi) {
  if (p.n() != static_cast<int>(chi.size()))
    throw ArgumentError("is_bi_noncrossing: partition size " +
                        std::to_string(p.n()) + " != side map size " +
                        std::to_string(chi.size()));
  return is_noncrossing(relabel(p, shuffle_permutation(chi).inverse()));
}

void for_each_bnc(const SideMap& chi, bool pairings_only,
                  const BncVisitor& visit) {
  const int n = static_cast<int>(chi.size());
  if (n == 0) throw ArgumentError("for_each_bnc: empty side map");
  const Permutation s = shuffle_permutation(chi);
  for_each_noncrossing(n, pairings_only, [&](const SetPartition& p) {
    visit(relabel(p, s));
  });
}

std::vector<SetPartition> enumerate_bnc(const SideMap& chi,
                                        bool pairings_only) {
  std::vector<SetPartition> out;
  for_each_bnc(chi, pairings_only,
               [&](const SetPartition& p) { out.push_back(p); });
  return out;
}

}  // namespace bifree
