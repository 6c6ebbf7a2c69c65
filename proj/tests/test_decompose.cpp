#include "oracles.hpp"

#include <haarsys/decompose.hpp>
#include <haarsys/generators.hpp>

#include <gtest/gtest.h>

using namespace haarsys;

namespace {

FiniteGroupoid sign_action() { return action_groupoid(cyclic_group(4), 2, {{0, 1, 0, 1}, {1, 0, 1, 0}}); }

FiniteGroupoid pair2_times_z2_bundle() {
  return product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2), cyclic_group(2)}));
}

}  // namespace

TEST(Stability, PrincipalGroupoidHasTrivialFibers) {
  const IsotropyBundle iso = stability_groupoid(pair_groupoid(3));
  for (const auto& f : iso.fibers) EXPECT_EQ(f.size(), 1u);
  EXPECT_EQ(iso.groupoid.arrow_count(), 3u);
}

TEST(Stability, BundleIsItsOwnStabilityGroupoid) {
  const FiniteGroupoid g = group_bundle({cyclic_group(2), symmetric_group_3()});
  const IsotropyBundle iso = stability_groupoid(g);
  EXPECT_EQ(iso.groupoid.arrow_count(), g.arrow_count());
  EXPECT_EQ(iso.groupoid, g);
  EXPECT_EQ(isomorphism_type(iso.groups[1]), "S3");
}

TEST(Stability, SignActionFibersAreZ2) {
  const IsotropyBundle iso = stability_groupoid(sign_action());
  ASSERT_EQ(iso.groups.size(), 2u);
  for (const auto& h : iso.groups) EXPECT_EQ(isomorphism_type(h), "Z/2");
  EXPECT_TRUE(validate_groupoid(iso.groupoid).ok());
}

TEST(Orbits, Examples) {
  EXPECT_EQ(orbit_partition(pair_groupoid(4)).classes.size(), 1u);
  EXPECT_EQ(orbit_partition(group_bundle({cyclic_group(2), FiniteGroup{}, cyclic_group(3)})).classes.size(), 3u);
  const OrbitPartition p = orbit_partition(disjoint_union({pair_groupoid(2), group_bundle({cyclic_group(2)})}));
  EXPECT_EQ(p.classes, (std::vector<std::vector<ObjectId>>{{0, 1}, {2}}));
  EXPECT_TRUE(p.related(0, 1));
  EXPECT_FALSE(p.related(1, 2));
}

TEST(Orbits, MatchBreadthFirstSearch) {
  RandomSource rng(5);
  for (int trial = 0; trial < 40; ++trial) {
    const FiniteGroupoid g = random_groupoid(rng).groupoid;
    const auto expected = oracle::orbits(g.tables());
    const OrbitPartition p = orbit_partition(g);
    ASSERT_EQ(p.classes.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
      EXPECT_EQ(std::set<ObjectId>(p.classes[i].begin(), p.classes[i].end()), expected[i]);
    }
  }
}

TEST(Quotient, PrincipalGroupoidIsUnchanged) {
  const FiniteGroupoid g = pair_groupoid(3);
  const PrincipalQuotient q = quotient_principal(g);
  EXPECT_TRUE(q.well_defined);
  EXPECT_EQ(q.quotient.arrow_count(), 9u);
  EXPECT_TRUE(oracle::isomorphic(q.quotient.tables(), g.tables()));
}

TEST(Quotient, OneGroupCollapsesToOneArrow) {
  const PrincipalQuotient q = quotient_principal(group_bundle({cyclic_group(2)}));
  EXPECT_EQ(q.quotient.arrow_count(), 1u);
  EXPECT_EQ(q.representative, (std::vector<ArrowId>{0}));
}

TEST(Quotient, PairTimesGroupCollapsesToPair) {
  const FiniteGroupoid g = product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2)}));
  const PrincipalQuotient q = quotient_principal(g);
  EXPECT_TRUE(oracle::isomorphic(q.quotient.tables(), pair_groupoid(2).tables()));
  for (ArrowId c = 0; c < q.quotient.arrow_count(); ++c) EXPECT_EQ(q.members(g, c).size(), 2u);
}

TEST(Quotient, PairTimesBundleCollapsesToTwoPairs) {
  const PrincipalQuotient q = quotient_principal(pair2_times_z2_bundle());
  EXPECT_TRUE(oracle::isomorphic(q.quotient.tables(), disjoint_union({pair_groupoid(2), pair_groupoid(2)}).tables()));
}

TEST(Quotient, ClassesMatchHomSetsOnRandomGroupoids) {
  RandomSource rng(9);
  for (int trial = 0; trial < 40; ++trial) {
    const FiniteGroupoid g = random_groupoid(rng).groupoid;
    const PrincipalQuotient q = quotient_principal(g);
    EXPECT_TRUE(q.well_defined);
    EXPECT_TRUE(validate_groupoid(q.quotient).ok());
    for (const Arrow& a : g.arrows()) {
      const ArrowId c = q.class_of[a.id];
      EXPECT_EQ(q.quotient.source(c), a.src);
      EXPECT_EQ(q.quotient.range(c), a.dst);
      EXPECT_LE(q.representative[c], a.id);
      EXPECT_EQ(class_of(g, a.id).size(), hom_set(g, a.src, a.src).size());
    }
    // Principal: at most one arrow between any two objects.
    std::set<std::pair<ObjectId, ObjectId>> ends;
    for (const Arrow& c : q.quotient.arrows()) EXPECT_TRUE(ends.emplace(c.src, c.dst).second);
  }
}

TEST(ClassOf, Examples) {
  const FiniteGroupoid p = pair_groupoid(3);
  EXPECT_EQ(class_of(p, p.identity(1)), (std::vector<ArrowId>{p.identity(1)}));
  const FiniteGroupoid g = product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2)}));
  for (ArrowId a = 0; a < g.arrow_count(); ++a) EXPECT_EQ(class_of(g, a).size(), 2u);
}
