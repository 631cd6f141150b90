#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "support.hpp"

namespace twirl {
namespace {

std::set<std::set<int>> brute_force_classes(const FiniteGroup& g) {
  std::set<std::set<int>> out;
  for (int x = 0; x < g.order(); ++x) {
    std::set<int> cls;
    for (int h = 0; h < g.order(); ++h) cls.insert(g.mul(g.mul(h, x), g.inverse(h)));
    out.insert(cls);
  }
  return out;
}

std::set<std::set<int>> as_sets(const ConjugacyClasses& c) {
  std::set<std::set<int>> out;
  for (const auto& cls : c.classes) out.insert(std::set<int>(cls.begin(), cls.end()));
  return out;
}

TEST(Group, BuiltinsHaveExpectedOrderAndClassCount) {
  struct Case {
    GroupPtr g;
    int order;
    int classes;
  };
  const std::vector<Case> cases{{build_cyclic(1), 1, 1},      {build_cyclic(6), 6, 6},
                                {build_dihedral(4), 8, 5},    {build_dihedral(5), 10, 4},
                                {build_symmetric(3), 6, 3},   {build_symmetric(4), 24, 5},
                                {build_quaternion(), 8, 5},   {testing::quaternion_from_matrices(), 8, 5}};
  for (const auto& c : cases) {
    EXPECT_EQ(c.g->order(), c.order);
    EXPECT_EQ(c.g->conjugacy_classes().count(), c.classes);
  }
}

TEST(Group, ConjugacyClassesMatchBruteForce) {
  for (const auto& g : {build_symmetric(4), build_dihedral(6), build_quaternion(),
                        build_direct_product(*build_symmetric(3), *build_cyclic(2))}) {
    EXPECT_EQ(as_sets(g->conjugacy_classes()), brute_force_classes(*g));
    const auto& cls = g->conjugacy_classes();
    for (int x = 0; x < g->order(); ++x) {
      const auto& mine = cls.classes[cls.class_of[x]];
      EXPECT_NE(std::find(mine.begin(), mine.end(), x), mine.end());
    }
  }
}

TEST(Group, AbelianDetection) {
  EXPECT_TRUE(build_cyclic(5)->is_abelian());
  EXPECT_FALSE(build_symmetric(3)->is_abelian());
  EXPECT_FALSE(build_quaternion()->is_abelian());
}

TEST(Group, InversesAndIdentity) {
  const auto g = build_dihedral(5);
  for (int x = 0; x < g->order(); ++x) {
    EXPECT_EQ(g->mul(x, g->inverse(x)), g->identity());
    EXPECT_EQ(g->mul(g->identity(), x), x);
  }
}

TEST(Group, ElementOrders) {
  const auto q = build_quaternion();
  std::multiset<int> orders;
  for (int x = 0; x < 8; ++x) orders.insert(q->element_order(x));
  EXPECT_EQ(orders, (std::multiset<int>{1, 2, 4, 4, 4, 4, 4, 4}));
}

TEST(Group, DirectProductOrder) {
  const auto p = build_direct_product(*build_cyclic(2), *build_cyclic(3));
  EXPECT_EQ(p->order(), 6);
  EXPECT_TRUE(p->is_abelian());
  EXPECT_EQ(p->conjugacy_classes().count(), 6);
}

TEST(Group, RejectsNonLatinTable) {
  EXPECT_THROW(build_from_cayley_table({"a", "b"}, {{0, 0}, {1, 0}}), Error);
}

TEST(Group, RejectsLatinSquareWithoutAssociativity) {
  // Latin square with identity 0 that is not associative.
  const std::vector<std::vector<int>> t{
      {0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  try {
    build_from_cayley_table({"e", "a", "b", "c", "d"}, t);
    FAIL() << "accepted a loop that is not a group";
  } catch (const Error& e) {
    EXPECT_TRUE(e.code() == ErrorCode::not_a_group || e.code() == ErrorCode::invalid_table);
  }
}

TEST(Group, RejectsBadSizes) {
  EXPECT_THROW(build_cyclic(0), Error);
  EXPECT_THROW(build_dihedral(0), Error);
  EXPECT_THROW(build_from_cayley_table({"a"}, {{1}}), Error);
}

TEST(Group, PermutationsEnumerated) {
  const auto perms = enumerate_permutations(4);
  EXPECT_EQ(perms.size(), 24u);
  EXPECT_EQ(std::set<std::vector<int>>(perms.begin(), perms.end()).size(), 24u);
}

}  // namespace
}  // namespace twirl
