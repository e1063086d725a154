#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <vector>

#include "qso/group.hpp"

namespace testsupport {

inline void factorizations_into(int n, int max_part, std::vector<int>& current,
                                std::vector<std::vector<int>>& out) {
  if (n == 1) {
    out.push_back(current);
    return;
  }
  for (int p = std::min(n, max_part); p >= 2; --p)
    if (n % p == 0) {
      current.push_back(p);
      factorizations_into(n / p, p, current, out);
      current.pop_back();
    }
}

// Every multiset of cyclic factors >= 2 with product in [min_order, max_order].
// Covers all Abelian isomorphism classes in range (some appear twice under
// different factorizations, which only adds coverage).
inline std::vector<std::vector<int>> group_shapes(int max_order, int min_order = 2) {
  std::vector<std::vector<int>> shapes;
  for (int n = min_order; n <= max_order; ++n) {
    std::vector<int> current;
    factorizations_into(n, n, current, shapes);
  }
  return shapes;
}

// Independent subgroup-enumeration oracle: closure of every subset of G.
inline std::vector<std::vector<int>> all_subgroups_by_subset_closure(const qso::Group& g) {
  const int n = g.order();
  std::set<std::vector<int>> found;
  for (std::uint32_t bits = 0; bits < (std::uint32_t{1} << n); ++bits) {
    std::vector<int> gens;
    for (int i = 0; i < n; ++i)
      if (bits & (std::uint32_t{1} << i)) gens.push_back(i);
    found.insert(qso::subgroup_closure(g, gens).members);
  }
  return {found.begin(), found.end()};
}

// Independent coset test: A is a coset iff A - min(A) is a subgroup.
inline bool is_coset_by_translation(const qso::Group& g, const std::vector<int>& a) {
  const int base = *std::min_element(a.begin(), a.end());
  std::set<int> shifted;
  for (int v : a) shifted.insert(g.sub(v, base));
  if (!shifted.count(0)) return false;
  for (int x : shifted) {
    if (!shifted.count(g.neg(x))) return false;
    for (int y : shifted)
      if (!shifted.count(g.add(x, y))) return false;
  }
  return true;
}

}  // namespace testsupport
