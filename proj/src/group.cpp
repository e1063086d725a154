#include "qso/group.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <stdexcept>

namespace qso {

namespace {

constexpr std::int64_t kMaxOrder = std::int64_t{1} << 26;

std::string canonical_label(const std::vector<int>& factors) {
  std::string label;
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (i > 0) label += 'x';
    label += 'Z';
    label += std::to_string(factors[i]);
  }
  return label;
}

}  // namespace

Group::Group(std::vector<int> factors) {
  if (factors.empty()) throw std::invalid_argument("group needs at least one cyclic factor");
  if (factors.size() > 32) throw std::invalid_argument("too many cyclic factors");
  std::int64_t order = 1;
  for (int m : factors) {
    if (m < 1) throw std::invalid_argument("cyclic factor must be at least 1");
    order *= m;
    if (order > kMaxOrder) throw std::invalid_argument("group order too large");
  }
  factors_ = std::move(factors);
  order_ = static_cast<int>(order);
  strides_.resize(factors_.size());
  std::int64_t stride = 1;
  for (std::size_t i = factors_.size(); i-- > 0;) {
    strides_[i] = stride;
    stride *= factors_[i];
  }
  label_ = canonical_label(factors_);
}

Group Group::parse(std::string_view text) {
  std::string s;
  for (char c : text)
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(c);
  if (s.empty()) throw std::invalid_argument("empty group descriptor");

  std::vector<int> factors;
  std::size_t i = 0;
  while (i < s.size()) {
    if (s[i] != 'Z' && s[i] != 'z')
      throw std::invalid_argument("bad group descriptor (expected 'Z'): " + std::string(text));
    ++i;
    std::size_t start = i;
    std::int64_t m = 0;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) {
      m = m * 10 + (s[i] - '0');
      if (m > kMaxOrder) throw std::invalid_argument("cyclic factor too large");
      ++i;
    }
    if (i == start)
      throw std::invalid_argument("bad group descriptor (missing factor order): " + std::string(text));
    if (m < 1) throw std::invalid_argument("cyclic factor must be at least 1: " + std::string(text));
    factors.push_back(static_cast<int>(m));
    if (i < s.size()) {
      if (s[i] != 'x' && s[i] != 'X')
        throw std::invalid_argument("bad group descriptor (expected 'x'): " + std::string(text));
      ++i;
      if (i == s.size())
        throw std::invalid_argument("bad group descriptor (trailing separator): " + std::string(text));
    }
  }
  return Group(std::move(factors));
}

Group Group::from_tables(std::string label, std::vector<std::int32_t> add_table,
                         std::vector<std::int32_t> neg_table) {
  const auto n = static_cast<std::int64_t>(neg_table.size());
  if (n < 1 || static_cast<std::int64_t>(add_table.size()) != n * n)
    throw std::invalid_argument("operation tables have inconsistent sizes");
  for (std::int32_t v : add_table)
    if (v < 0 || v >= n) throw std::invalid_argument("add table entry out of range");
  for (std::int32_t v : neg_table)
    if (v < 0 || v >= n) throw std::invalid_argument("neg table entry out of range");
  Group g;
  g.order_ = static_cast<int>(n);
  g.label_ = std::move(label);
  g.add_table_ = std::move(add_table);
  g.neg_table_ = std::move(neg_table);
  return g;
}

int Group::add(int a, int b) const {
  if (a < 0 || a >= order_ || b < 0 || b >= order_)
    throw std::out_of_range("element index out of range");
  if (!add_table_.empty())
    return add_table_[static_cast<std::size_t>(a) * order_ + b];
  int out = 0;
  for (std::size_t axis = factors_.size(); axis-- > 0;) {
    const int m = factors_[axis];
    int ra = a % m;
    a /= m;
    int rb = b % m;
    b /= m;
    int s = ra + rb;
    if (s >= m) s -= m;
    out += s * static_cast<int>(strides_[axis]);
  }
  return out;
}

int Group::neg(int a) const {
  if (a < 0 || a >= order_) throw std::out_of_range("element index out of range");
  if (!neg_table_.empty()) return neg_table_[a];
  int out = 0;
  for (std::size_t axis = factors_.size(); axis-- > 0;) {
    const int m = factors_[axis];
    int ra = a % m;
    a /= m;
    int s = ra == 0 ? 0 : m - ra;
    out += s * static_cast<int>(strides_[axis]);
  }
  return out;
}

Element Group::element(int index) const {
  if (!is_product()) throw std::logic_error("table-backed group has no residue form");
  if (index < 0 || index >= order_) throw std::out_of_range("element index out of range");
  Element residues(factors_.size());
  for (std::size_t axis = factors_.size(); axis-- > 0;) {
    residues[axis] = index % factors_[axis];
    index /= factors_[axis];
  }
  return residues;
}

int Group::index(std::span<const int> residues) const {
  if (!is_product()) throw std::logic_error("table-backed group has no residue form");
  if (residues.size() != factors_.size())
    throw std::invalid_argument("residue vector does not match the factor count");
  int out = 0;
  for (std::size_t axis = 0; axis < factors_.size(); ++axis) {
    const int m = factors_[axis];
    int r = residues[axis] % m;
    if (r < 0) r += m;
    out += r * static_cast<int>(strides_[axis]);
  }
  return out;
}

Subgroup trivial_subgroup(const Group& g) {
  Subgroup h;
  h.members = {0};
  h.mask.assign(g.order(), 0);
  h.mask[0] = 1;
  return h;
}

Subgroup full_subgroup(const Group& g) {
  Subgroup h;
  h.members.resize(g.order());
  for (int i = 0; i < g.order(); ++i) h.members[i] = i;
  h.mask.assign(g.order(), 1);
  return h;
}

Subgroup subgroup_closure(const Group& g, std::span<const int> generators) {
  const int n = g.order();
  std::vector<std::uint8_t> mask(n, 0);
  std::vector<int> members;
  auto insert = [&](int v) {
    if (!mask[v]) {
      mask[v] = 1;
      members.push_back(v);
    }
  };
  insert(0);
  for (int v : generators) {
    if (v < 0 || v >= n) throw std::invalid_argument("generator index out of range");
    insert(v);
    insert(g.neg(v));
  }
  // Grow to the fixpoint under addition; negation closure follows because
  // every generator entered together with its inverse.
  bool changed = true;
  while (changed) {
    changed = false;
    const std::size_t count = members.size();
    for (std::size_t i = 0; i < count; ++i)
      for (std::size_t j = i; j < count; ++j) {
        const int s = g.add(members[i], members[j]);
        if (!mask[s]) {
          mask[s] = 1;
          members.push_back(s);
          changed = true;
        }
      }
  }
  std::sort(members.begin(), members.end());
  return Subgroup{std::move(members), std::move(mask)};
}

bool is_subgroup(const Group& g, const Subgroup& h) {
  const int n = g.order();
  if (h.members.empty() || h.mask.size() != static_cast<std::size_t>(n)) return false;
  if (!h.contains(0)) return false;
  if (!std::is_sorted(h.members.begin(), h.members.end())) return false;
  std::size_t marked = 0;
  for (int v = 0; v < n; ++v)
    if (h.mask[v]) ++marked;
  if (marked != h.members.size()) return false;
  for (int a : h.members) {
    if (a < 0 || a >= n || !h.contains(a)) return false;
    if (!h.contains(g.neg(a))) return false;
    for (int b : h.members)
      if (!h.contains(g.add(a, b))) return false;
  }
  return true;
}

std::vector<Subgroup> enumerate_subgroups(const Group& g, int max_order) {
  if (g.order() > max_order)
    throw std::invalid_argument("group order " + std::to_string(g.order()) +
                                " exceeds the enumeration bound " + std::to_string(max_order));
  std::set<std::vector<int>> seen;
  std::vector<Subgroup> found;
  auto push = [&](Subgroup h) {
    if (seen.insert(h.members).second) found.push_back(std::move(h));
  };
  push(subgroup_closure(g, {}));
  // Every subgroup is reachable by adjoining one element at a time.
  for (std::size_t qi = 0; qi < found.size(); ++qi) {
    const std::vector<int> base = found[qi].members;
    for (int v = 0; v < g.order(); ++v) {
      if (std::binary_search(base.begin(), base.end(), v)) continue;
      std::vector<int> gens = base;
      gens.push_back(v);
      push(subgroup_closure(g, gens));
    }
  }
  std::sort(found.begin(), found.end(), [](const Subgroup& a, const Subgroup& b) {
    if (a.members.size() != b.members.size()) return a.members.size() < b.members.size();
    return a.members < b.members;
  });
  return found;
}

std::vector<Coset> cosets(const Group& g, const Subgroup& h) {
  if (!is_subgroup(g, h)) throw std::invalid_argument("not a subgroup of this group");
  const int n = g.order();
  std::vector<std::uint8_t> visited(n, 0);
  std::vector<Coset> out;
  for (int rep = 0; rep < n; ++rep) {
    if (visited[rep]) continue;
    Coset c;
    c.representative = rep;  // first unvisited index is the coset minimum
    c.members.reserve(h.members.size());
    for (int m : h.members) {
      const int v = g.add(rep, m);
      visited[v] = 1;
      c.members.push_back(v);
    }
    std::sort(c.members.begin(), c.members.end());
    out.push_back(std::move(c));
  }
  return out;
}

QuotientGroup quotient(const Group& g, const Subgroup& h) {
  auto cs = cosets(g, h);
  const int q = static_cast<int>(cs.size());
  std::vector<std::int32_t> projection(g.order(), -1);
  for (int ci = 0; ci < q; ++ci)
    for (int m : cs[ci].members) projection[m] = ci;

  std::vector<std::int32_t> add_table(static_cast<std::size_t>(q) * q);
  std::vector<std::int32_t> neg_table(q);
  for (int i = 0; i < q; ++i) {
    neg_table[i] = projection[g.neg(cs[i].representative)];
    for (int j = 0; j < q; ++j)
      add_table[static_cast<std::size_t>(i) * q + j] =
          projection[g.add(cs[i].representative, cs[j].representative)];
  }
  std::string label = g.label() + "/H" + std::to_string(h.order());
  QuotientGroup out{Group::from_tables(std::move(label), std::move(add_table), std::move(neg_table)),
                    std::move(cs), std::move(projection)};
  return out;
}

}  // namespace qso
