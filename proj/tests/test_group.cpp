#include <haarsys/group.hpp>

#include <gtest/gtest.h>

#include <map>

using namespace haarsys;

namespace {

// Brute-force group axioms, written independently of check_group_table.
bool is_group(const CayleyTable& t) {
  const std::size_t n = t.size();
  if (n == 0) return false;
  for (const auto& row : t) {
    if (row.size() != n) return false;
    for (Element v : row) {
      if (v >= n) return false;
    }
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c) {
        if (t[t[a][b]][c] != t[a][t[b][c]]) return false;
      }
    }
  }
  for (Element e = 0; e < n; ++e) {
    bool neutral = true;
    for (Element a = 0; a < n; ++a) neutral = neutral && t[e][a] == a && t[a][e] == a;
    if (!neutral) continue;
    for (Element a = 0; a < n; ++a) {
      bool has_inverse = false;
      for (Element b = 0; b < n; ++b) has_inverse = has_inverse || (t[a][b] == e && t[b][a] == e);
      if (!has_inverse) return false;
    }
    return true;
  }
  return false;
}

std::map<std::size_t, std::size_t> order_profile(const FiniteGroup& g) {
  std::map<std::size_t, std::size_t> out;
  for (Element a = 0; a < g.order(); ++a) ++out[g.element_order(a)];
  return out;
}

}  // namespace

TEST(Group, NamedGroupsSatisfyTheAxioms) {
  for (const char* name : {"trivial", "Z/2", "Z/3", "Z/4", "V4", "S3", "Z/6", "D4", "Q8", "Z/8", "Z/4xZ/2", "Z/2xZ/2xZ/2", "D5"}) {
    const FiniteGroup g = group_by_name(name);
    EXPECT_TRUE(is_group(g.table())) << name;
    EXPECT_FALSE(check_group_table(g.table()).has_value()) << name;
  }
}

TEST(Group, OrdersAndCommutativity) {
  EXPECT_EQ(cyclic_group(5).order(), 5u);
  EXPECT_EQ(dihedral_group(4).order(), 8u);
  EXPECT_FALSE(symmetric_group_3().is_abelian());
  EXPECT_FALSE(quaternion_group().is_abelian());
  EXPECT_TRUE(group_by_name("V4").is_abelian());
  EXPECT_EQ(direct_product(cyclic_group(2), cyclic_group(3)).order(), 6u);
}

TEST(Group, ElementOrderProfiles) {
  // Q8: one element of order 1, one of order 2, six of order 4.
  EXPECT_EQ(order_profile(quaternion_group()), (std::map<std::size_t, std::size_t>{{1, 1}, {2, 1}, {4, 6}}));
  // D4: five involutions, two elements of order 4.
  EXPECT_EQ(order_profile(dihedral_group(4)), (std::map<std::size_t, std::size_t>{{1, 1}, {2, 5}, {4, 2}}));
  EXPECT_EQ(order_profile(symmetric_group_3()), (std::map<std::size_t, std::size_t>{{1, 1}, {2, 3}, {3, 2}}));
}

TEST(Group, SubgroupCounts) {
  const std::map<std::string, std::size_t> expected{{"trivial", 1}, {"Z/2", 2}, {"Z/4", 3}, {"V4", 5},      {"S3", 6},
                                                    {"Z/6", 4},     {"Z/8", 4}, {"D4", 10}, {"Q8", 6},      {"Z/4xZ/2", 8},
                                                    {"Z/2xZ/2xZ/2", 16}};
  for (const auto& [name, count] : expected) {
    const FiniteGroup g = group_by_name(name);
    const auto subgroups = all_subgroups(g);
    EXPECT_EQ(subgroups.size(), count) << name;
    for (const auto& s : subgroups) {
      EXPECT_FALSE(check_subgroup(g, s).has_value()) << name;
      EXPECT_TRUE(is_group(restrict_to(g, s).table())) << name;
    }
  }
}

TEST(Group, IsomorphismTypes) {
  EXPECT_EQ(isomorphism_type(group_by_name("trivial")), "trivial");
  EXPECT_EQ(isomorphism_type(cyclic_group(4)), "Z/4");
  EXPECT_EQ(isomorphism_type(direct_product(cyclic_group(2), cyclic_group(2))), "Z/2xZ/2");
  EXPECT_EQ(isomorphism_type(symmetric_group_3()), "S3");
  EXPECT_EQ(isomorphism_type(dihedral_group(4)), "D4");
  EXPECT_EQ(isomorphism_type(quaternion_group()), "Q8");
  EXPECT_EQ(isomorphism_type(direct_product(cyclic_group(4), cyclic_group(2))), "Z/4xZ/2");
  EXPECT_EQ(isomorphism_type(direct_product(cyclic_group(2), cyclic_group(3))), "Z/6");
}

TEST(Group, DefectiveTablesAreNamed) {
  using K = GroupDefect::Kind;
  EXPECT_EQ(check_group_table({})->kind, K::empty);
  EXPECT_EQ(check_group_table({{0, 1}, {1}})->kind, K::not_square);
  EXPECT_EQ(check_group_table({{0, 2}, {1, 0}})->kind, K::out_of_range);
  EXPECT_EQ(check_group_table({{0, 0}, {0, 0}})->kind, K::no_identity);
  EXPECT_EQ(check_group_table({{0, 1}, {1, 1}})->kind, K::no_inverse);
  // Smallest loop that is not a group: every element is its own inverse.
  const CayleyTable loop{{0, 1, 2, 3, 4}, {1, 0, 3, 4, 2}, {2, 4, 0, 1, 3}, {3, 2, 4, 0, 1}, {4, 3, 1, 2, 0}};
  ASSERT_FALSE(is_group(loop));
  EXPECT_EQ(check_group_table(loop)->kind, K::non_associative);
  EXPECT_THROW(FiniteGroup{loop}, GroupTableError);
}

TEST(Group, SubgroupDefects) {
  using K = SubgroupDefect::Kind;
  const FiniteGroup z4 = cyclic_group(4);
  EXPECT_EQ(check_subgroup(z4, {0, 1})->kind, K::not_closed);
  EXPECT_EQ(check_subgroup(z4, {2})->kind, K::missing_identity);
  EXPECT_EQ(check_subgroup(z4, {0, 0})->kind, K::duplicate);
  EXPECT_EQ(check_subgroup(z4, {0, 9})->kind, K::out_of_range);
  EXPECT_EQ(generated_subgroup(z4, {2}), (std::vector<Element>{0, 2}));
}

TEST(Group, UnknownNamesAreRejected) {
  EXPECT_THROW(group_by_name("Z/0"), std::invalid_argument);
  EXPECT_THROW(group_by_name("PSL(2,7)"), std::invalid_argument);
}
