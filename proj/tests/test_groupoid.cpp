#include "oracles.hpp"

#include <haarsys/decompose.hpp>
#include <haarsys/generators.hpp>
#include <haarsys/groupoid.hpp>

#include <gtest/gtest.h>

using namespace haarsys;

TEST(PairGroupoid, SingleObject) {
  const FiniteGroupoid g = pair_groupoid(1);
  ASSERT_EQ(g.arrow_count(), 1u);
  EXPECT_EQ(g.identity(0), 0u);
  EXPECT_EQ(g.inverse(0), 0u);
  EXPECT_EQ(g.compose(0, 0), 0u);
}

TEST(PairGroupoid, ComposesThroughTheMiddleObject) {
  const FiniteGroupoid g = pair_groupoid(3);
  // (0,1)(1,2) = (0,2) with (x, y) stored as x*3 + y.
  EXPECT_EQ(g.compose(0 * 3 + 1, 1 * 3 + 2), 0u * 3 + 2);
  EXPECT_EQ(g.compose(0 * 3 + 1, 0 * 3 + 2), npos);
}

TEST(PairGroupoid, FiberSizes) {
  const FiniteGroupoid g = pair_groupoid(3);
  EXPECT_EQ(g.arrow_count(), 9u);
  for (ObjectId x = 0; x < 3; ++x) {
    EXPECT_EQ(fiber(g, x, FiberKind::range).size(), 3u);
    EXPECT_EQ(fiber(g, x, FiberKind::source).size(), 3u);
    for (ObjectId y = 0; y < 3; ++y) EXPECT_EQ(hom_set(g, x, y).size(), 1u);
  }
  EXPECT_THROW(fiber(g, 3, FiberKind::range), std::out_of_range);
  EXPECT_THROW(pair_groupoid(0), std::invalid_argument);
}

TEST(PairGroupoid, ValidForSmallSizes) {
  for (std::size_t n = 1; n <= 6; ++n) {
    const FiniteGroupoid g = pair_groupoid(n);
    EXPECT_TRUE(validate_groupoid(g).ok()) << n;
    EXPECT_TRUE(oracle::is_groupoid(g.tables())) << n;
  }
}

TEST(GroupBundle, TwoFibers) {
  const FiniteGroupoid g = group_bundle({cyclic_group(2), FiniteGroup{}});
  EXPECT_EQ(g.arrow_count(), 3u);
  EXPECT_EQ(g.object_count(), 2u);
  EXPECT_TRUE(validate_groupoid(g).ok());
}

TEST(GroupBundle, SingleGroupIsTheGroup) {
  const FiniteGroup s3 = symmetric_group_3();
  const FiniteGroupoid g = group_bundle({s3});
  ASSERT_EQ(g.arrow_count(), 6u);
  for (Element a = 0; a < 6; ++a) {
    for (Element b = 0; b < 6; ++b) EXPECT_EQ(g.compose(a, b), s3.mul(a, b));
  }
  EXPECT_TRUE(validate_groupoid(g).ok());
}

TEST(GroupBundle, EmptyBundle) {
  const FiniteGroupoid g = group_bundle(std::vector<FiniteGroup>{});
  EXPECT_EQ(g.object_count(), 0u);
  EXPECT_EQ(g.arrow_count(), 0u);
  EXPECT_TRUE(validate_groupoid(g).ok());
}

TEST(ActionGroupoid, TrivialActionIsAllIsotropy) {
  const FiniteGroupoid g = action_groupoid(cyclic_group(2), 2, {{0, 0}, {1, 1}});
  EXPECT_EQ(g.arrow_count(), 4u);
  for (const Arrow& a : g.arrows()) EXPECT_EQ(a.src, a.dst);
  EXPECT_TRUE(validate_groupoid(g).ok());
}

TEST(ActionGroupoid, SwapIsThePairGroupoid) {
  const FiniteGroupoid g = action_groupoid(cyclic_group(2), 2, {{0, 1}, {1, 0}});
  EXPECT_EQ(g.arrow_count(), 4u);
  EXPECT_TRUE(validate_groupoid(g).ok());
  EXPECT_TRUE(oracle::isomorphic(g.tables(), pair_groupoid(2).tables()));
  EXPECT_FALSE(oracle::isomorphic(g.tables(), group_bundle({cyclic_group(2)}).tables()));
}

TEST(ActionGroupoid, SignActionHasIsotropyOfOrderTwo) {
  const FiniteGroupoid g = action_groupoid(cyclic_group(4), 2, {{0, 1, 0, 1}, {1, 0, 1, 0}});
  EXPECT_TRUE(validate_groupoid(g).ok());
  EXPECT_EQ(hom_set(g, 0, 0).size(), 2u);
  EXPECT_EQ(hom_set(g, 1, 1).size(), 2u);
}

TEST(ActionGroupoid, RejectsNonActions) {
  EXPECT_THROW(action_groupoid(cyclic_group(2), 2, {{1, 0}, {0, 1}}), ActionError);
  EXPECT_THROW(action_groupoid(cyclic_group(3), 3, {{0, 1, 2}, {1, 0, 2}, {2, 2, 2}}), ActionError);
}

TEST(ProductGroupoid, PairTimesBundle) {
  const FiniteGroupoid g = product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2), cyclic_group(2)}));
  EXPECT_EQ(g.arrow_count(), 16u);
  EXPECT_EQ(g.object_count(), 4u);
  EXPECT_TRUE(validate_groupoid(g).ok());
  EXPECT_TRUE(oracle::is_groupoid(g.tables()));
}

TEST(DisjointUnion, KeepsComponentsApart) {
  const FiniteGroupoid g = disjoint_union({pair_groupoid(2), group_bundle({cyclic_group(2)})});
  EXPECT_EQ(g.object_count(), 3u);
  EXPECT_EQ(g.arrow_count(), 6u);
  EXPECT_TRUE(validate_groupoid(g).ok());
}

TEST(Validate, RedirectedInverseIsCited) {
  GroupoidTables t = pair_groupoid(3).tables();
  for (auto& [a, b] : t.inverse) {
    if (a == 1) b = 2;
  }
  const ValidationReport r = validate_groupoid(t);
  EXPECT_TRUE(r.structural.empty());
  EXPECT_FALSE(r.ok());
  EXPECT_TRUE(r.cites("inverse-right", {1}));
  EXPECT_FALSE(oracle::is_groupoid(t));
}

TEST(Validate, StructuralDefectsAreReportedSeparately) {
  GroupoidTables t = pair_groupoid(2).tables();
  t.inverse.pop_back();
  t.compose.push_back(t.compose.front());
  const ValidationReport r = validate_groupoid(t);
  EXPECT_TRUE(r.axioms.empty());
  EXPECT_TRUE(r.cites("inverse-table", {3}));
  EXPECT_TRUE(r.cites("duplicate-compose", {t.compose.front()[0], t.compose.front()[1]}));
  EXPECT_THROW(FiniteGroupoid{t}, StructuralError);

  GroupoidTables dangling = pair_groupoid(2).tables();
  dangling.compose.push_back({0, 7, 1});
  EXPECT_TRUE(validate_groupoid(dangling).cites("dangling-arrow", {0, 7, 1}));
}

TEST(Validate, AgreesWithOracleOnRandomMutations) {
  RandomSource rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    GroupoidTables t = random_groupoid(rng).groupoid.tables();
    ASSERT_TRUE(validate_groupoid(t).ok());
    const std::size_t n = t.arrows.size();
    if (n == 1) continue;
    switch (rng.between(0, 2)) {
      case 0: {
        auto& entry = t.compose[static_cast<std::size_t>(rng.between(0, static_cast<long>(t.compose.size()) - 1))];
        entry[2] = (entry[2] + static_cast<ArrowId>(rng.between(1, static_cast<long>(n) - 1))) % n;
        break;
      }
      case 1: {
        auto& entry = t.inverse[static_cast<std::size_t>(rng.between(0, static_cast<long>(n) - 1))];
        entry.second = (entry.second + static_cast<ArrowId>(rng.between(1, static_cast<long>(n) - 1))) % n;
        break;
      }
      default: {
        auto& entry = t.identity[static_cast<std::size_t>(rng.between(0, static_cast<long>(t.objects) - 1))];
        entry.second = (entry.second + static_cast<ArrowId>(rng.between(1, static_cast<long>(n) - 1))) % n;
      }
    }
    EXPECT_EQ(validate_groupoid(t).ok(), oracle::is_groupoid(t)) << trial;
    EXPECT_FALSE(validate_groupoid(t).ok()) << trial;
  }
}

TEST(Actions, RightTranslationByIsotropyIsFree) {
  for (const FiniteGroupoid& g : {pair_groupoid(3), action_groupoid(cyclic_group(4), 2, {{0, 1, 0, 1}, {1, 0, 1, 0}}),
                                  product_groupoid(pair_groupoid(2), group_bundle({symmetric_group_3()}))}) {
    const FreeProperReport r = verify_free_proper(isotropy_action(g));
    EXPECT_TRUE(r.action_issues.empty());
    EXPECT_TRUE(r.free);
    EXPECT_TRUE(r.proper);
    EXPECT_EQ(r.max_graph_fiber, 1u);
  }
}

TEST(Actions, TrivialActionIsNotFree) {
  GroupoidAction a;
  a.actor = group_bundle({cyclic_group(2)});
  a.space_size = 1;
  a.anchor = {0};
  a.act = {0, 0};
  const FreeProperReport r = verify_free_proper(a);
  EXPECT_FALSE(r.free);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(*r.witness, (std::pair<std::size_t, ArrowId>{0, 1}));
  EXPECT_EQ(r.max_graph_fiber, 2u);
}

TEST(Actions, BrokenActionsAreReported) {
  GroupoidAction a;
  a.actor = group_bundle({cyclic_group(2)});
  a.space_size = 2;
  a.anchor = {0, 0};
  a.act = {1, 1, 0, 0};
  const auto issues = check_action(a);
  ASSERT_FALSE(issues.empty());
  EXPECT_EQ(issues.front().rule, "action-identity");
}
