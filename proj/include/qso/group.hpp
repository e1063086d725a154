#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace qso {

// Residue vector of a group element, one entry per cyclic factor.
using Element = std::vector<int>;

// A finite Abelian group with flat-index element arithmetic.
//
// Product groups are ordered products of cyclic factors Z_m1 x ... x Z_mr.
// Elements are mixed-radix residue vectors, last factor fastest, so flat
// indices enumerate {0, ..., order-1}. Quotient groups carry explicit
// operation tables instead of factors (see quotient()).
class Group {
 public:
  explicit Group(std::vector<int> factors);

  // Parses descriptors of the form "Z<m>(xZ<m>)*", e.g. "Z4xZ2".
  // Case-insensitive, whitespace ignored. Factors must be >= 1.
  static Group parse(std::string_view text);

  static Group from_tables(std::string label, std::vector<std::int32_t> add_table,
                           std::vector<std::int32_t> neg_table);

  int order() const { return order_; }
  bool is_product() const { return !factors_.empty(); }
  const std::vector<int>& factors() const { return factors_; }
  const std::vector<std::int64_t>& strides() const { return strides_; }
  const std::string& label() const { return label_; }

  int add(int a, int b) const;
  int neg(int a) const;
  int sub(int a, int b) const { return add(a, neg(b)); }

  Element element(int index) const;                    // product groups only
  int index(std::span<const int> residues) const;      // reduces mod factors

 private:
  Group() = default;

  std::vector<int> factors_;
  std::vector<std::int64_t> strides_;
  int order_ = 0;
  std::string label_;
  std::vector<std::int32_t> add_table_;  // table-backed groups only
  std::vector<std::int32_t> neg_table_;
};

struct Subgroup {
  std::vector<int> members;        // sorted flat indices, always contains 0
  std::vector<std::uint8_t> mask;  // membership bitmap over the parent group

  int order() const { return static_cast<int>(members.size()); }
  bool contains(int g) const { return mask[static_cast<std::size_t>(g)] != 0; }
};

struct Coset {
  int representative = 0;   // minimum flat index in the coset
  std::vector<int> members; // sorted
};

// Coset structure of G/H together with the projection G -> G/H.
// `group` is a table-backed Group whose element i is cosets[i].
struct QuotientGroup {
  Group group;
  std::vector<Coset> cosets;            // sorted by representative; cosets[0] == H
  std::vector<std::int32_t> projection; // size |G|
};

inline constexpr int kDefaultEnumerationBound = 64;

Subgroup trivial_subgroup(const Group& g);
Subgroup full_subgroup(const Group& g);

// Smallest subgroup containing the generators (flat indices).
Subgroup subgroup_closure(const Group& g, std::span<const int> generators);

bool is_subgroup(const Group& g, const Subgroup& h);

// All subgroups, brute force, deduplicated, sorted by (order, members).
// Throws if |G| exceeds max_order.
std::vector<Subgroup> enumerate_subgroups(const Group& g,
                                          int max_order = kDefaultEnumerationBound);

// Partition of G into cosets of H, sorted by representative.
std::vector<Coset> cosets(const Group& g, const Subgroup& h);

QuotientGroup quotient(const Group& g, const Subgroup& h);

}  // namespace qso
