#include <doctest.h>

#include <set>

#include "qso/group.hpp"
#include "support.hpp"

using namespace qso;

TEST_SUITE_BEGIN("group");

TEST_CASE("descriptor parsing") {
  CHECK(Group::parse("Z3").factors() == std::vector<int>{3});
  CHECK(Group::parse("Z3").order() == 3);
  CHECK(Group::parse("Z4xZ2").factors() == std::vector<int>{4, 2});
  CHECK(Group::parse("Z4xZ2").order() == 8);
  CHECK(Group::parse(" z4 X z2 ").label() == "Z4xZ2");
  CHECK(Group::parse("Z1").order() == 1);

  CHECK_THROWS_AS(Group::parse("Z0"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse(""), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("Zx"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("4"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("Z4x"), std::invalid_argument);
  CHECK_THROWS_AS(Group::parse("Z-3"), std::invalid_argument);
}

TEST_CASE("add and negate") {
  const Group z4({4});
  CHECK(z4.add(3, 2) == 1);
  CHECK(z4.add(3, 0) == 3);

  const Group z5({5});
  CHECK(z5.neg(2) == 3);
  CHECK(z5.neg(0) == 0);

  const Group g({4, 2});
  const int a = g.index(std::vector<int>{3, 1});
  const int b = g.index(std::vector<int>{1, 1});
  CHECK(g.add(a, b) == g.index(std::vector<int>{0, 0}));
  CHECK(g.neg(a) == g.index(std::vector<int>{1, 1}));
  CHECK(g.element(a) == Element{3, 1});

  CHECK_THROWS_AS(g.index(std::vector<int>{1}), std::invalid_argument);
  CHECK_THROWS_AS(g.add(0, 8), std::out_of_range);
}

TEST_CASE("group laws hold exhaustively on small shapes") {
  for (const auto& factors : {std::vector<int>{6}, {4, 2}, {2, 3}, {12}, {2, 2, 2}}) {
    const Group g(factors);
    const int n = g.order();
    for (int a = 0; a < n; ++a) {
      CHECK(g.add(a, 0) == a);
      CHECK(g.add(a, g.neg(a)) == 0);
      for (int b = 0; b < n; ++b) {
        CHECK(g.add(a, b) == g.add(b, a));
        for (int c = 0; c < n; ++c)
          CHECK(g.add(g.add(a, b), c) == g.add(a, g.add(b, c)));
      }
    }
  }
}

TEST_CASE("subgroup closure") {
  const Group z6({6});
  CHECK(subgroup_closure(z6, std::vector<int>{2}).members == std::vector<int>{0, 2, 4});

  const Group z4({4});
  CHECK(subgroup_closure(z4, {}).members == std::vector<int>{0});

  const Group v({2, 2});
  const std::vector<int> gens{v.index(std::vector<int>{1, 0}), v.index(std::vector<int>{0, 1})};
  CHECK(subgroup_closure(v, gens).order() == 4);

  for (const auto& factors : testsupport::group_shapes(12)) {
    const Group g(factors);
    for (int v2 = 0; v2 < g.order(); ++v2) {
      const auto h = subgroup_closure(g, std::vector<int>{v2});
      CHECK(is_subgroup(g, h));
      CHECK(g.order() % h.order() == 0);  // Lagrange
    }
  }
}

TEST_CASE("enumerate_subgroups matches the subset-closure oracle") {
  CHECK(enumerate_subgroups(Group({4})).size() == 3);
  CHECK(enumerate_subgroups(Group({2, 2})).size() == 5);
  CHECK(enumerate_subgroups(Group({1})).size() == 1);
  CHECK_THROWS_AS(enumerate_subgroups(Group({128})), std::invalid_argument);

  for (const auto& factors : testsupport::group_shapes(16)) {
    const Group g(factors);
    const auto oracle = testsupport::all_subgroups_by_subset_closure(g);
    const auto fast = enumerate_subgroups(g);
    REQUIRE(fast.size() == oracle.size());
    std::set<std::vector<int>> fast_sets;
    for (const auto& h : fast) {
      CHECK(is_subgroup(g, h));
      CHECK(g.order() % h.order() == 0);
      fast_sets.insert(h.members);
    }
    for (const auto& members : oracle) CHECK(fast_sets.count(members) == 1);
  }
}

TEST_CASE("cosets partition the group") {
  const Group z6({6});
  const auto h = subgroup_closure(z6, std::vector<int>{3});
  const auto cs = cosets(z6, h);
  REQUIRE(cs.size() == 3);
  CHECK(cs[0].members == std::vector<int>{0, 3});
  CHECK(cs[1].members == std::vector<int>{1, 4});
  CHECK(cs[2].members == std::vector<int>{2, 5});

  const Group z4({4});
  CHECK(cosets(z4, full_subgroup(z4)).size() == 1);
  CHECK(cosets(z4, trivial_subgroup(z4)).size() == 4);

  for (const auto& factors : testsupport::group_shapes(16)) {
    const Group g(factors);
    for (const auto& sub : enumerate_subgroups(g)) {
      const auto parts = cosets(g, sub);
      CHECK(parts.size() == static_cast<std::size_t>(g.order() / sub.order()));
      std::vector<std::uint8_t> hit(g.order(), 0);
      for (const auto& c : parts) {
        CHECK(c.representative == c.members.front());
        CHECK(c.members.size() == static_cast<std::size_t>(sub.order()));
        for (int m : c.members) {
          CHECK(hit[m] == 0);
          hit[m] = 1;
        }
      }
      for (int flag : hit) CHECK(flag == 1);
    }
  }

  Subgroup broken;  // {0, 1} in Z4 is not closed
  broken.members = {0, 1};
  broken.mask = {1, 1, 0, 0};
  CHECK_THROWS_AS(cosets(z4, broken), std::invalid_argument);
}

TEST_CASE("quotient projection is a homomorphism") {
  const Group z4({4});
  const auto q = quotient(z4, subgroup_closure(z4, std::vector<int>{2}));
  CHECK(q.group.order() == 2);

  const auto qid = quotient(z4, trivial_subgroup(z4));
  CHECK(qid.group.order() == 4);
  for (int i = 0; i < 4; ++i) CHECK(qid.projection[i] == i);

  CHECK(quotient(z4, full_subgroup(z4)).group.order() == 1);

  for (const auto& factors : testsupport::group_shapes(16)) {
    const Group g(factors);
    for (const auto& sub : enumerate_subgroups(g)) {
      const auto q2 = quotient(g, sub);
      for (int ci = 0; ci < q2.group.order(); ++ci)
        CHECK(q2.cosets[ci].members.size() == static_cast<std::size_t>(sub.order()));
      for (int a = 0; a < g.order(); ++a) {
        CHECK(q2.projection[a] >= 0);
        for (int b = 0; b < g.order(); ++b)
          CHECK(q2.projection[g.add(a, b)] ==
                q2.group.add(q2.projection[a], q2.projection[b]));
      }
    }
  }
}

TEST_SUITE_END();
