#include <haarsys/convolution.hpp>
#include <haarsys/generators.hpp>

#include <gtest/gtest.h>

using namespace haarsys;

namespace {

MeasureFamily counting(const FiniteGroupoid& g) {
  return family_from_weights(g, std::vector<Rational>(g.arrow_count(), Rational(1)));
}

MeasureFamily synthesized(const FiniteGroupoid& g, RandomSource& rng) {
  std::vector<Rational> scale(g.object_count()), lambda(g.object_count());
  for (auto& s : scale) s = rng.positive_rational();
  for (auto& l : lambda) l = rng.positive_rational();
  return synthesize_haar(g, uniform_coherent_system(stability_groupoid(g), scale),
                         principal_haar_from_lambda(quotient_principal(g), lambda));
}

// (f*h)(x) = sum over y of f(y) h(y^-1 x), straight from the Cayley table.
std::vector<Rational> group_algebra_product(const FiniteGroup& grp, const std::vector<Rational>& f,
                                            const std::vector<Rational>& h) {
  std::vector<Rational> out(grp.order());
  for (Element x = 0; x < grp.order(); ++x) {
    for (Element y = 0; y < grp.order(); ++y) out[x] += f[y] * h[grp.mul(grp.inverse(y), x)];
  }
  return out;
}

}  // namespace

TEST(Convolve, IdentityIndicatorIsIdempotent) {
  const FiniteGroupoid g = pair_groupoid(2);
  GroupoidFunction delta(g.arrow_count());
  for (ObjectId x = 0; x < 2; ++x) delta[g.identity(x)] = 1;
  EXPECT_EQ(convolve(delta, delta, g, counting(g)), delta);
}

TEST(Convolve, NoComposablePairsGiveZero) {
  const FiniteGroupoid g = disjoint_union({pair_groupoid(2), group_bundle({cyclic_group(2)})});
  GroupoidFunction f(g.arrow_count()), h(g.arrow_count());
  for (ArrowId a : g.range_fiber(0)) f[a] = 1;
  for (ArrowId a : g.range_fiber(2)) h[a] = 1;
  EXPECT_EQ(convolve(f, h, g, counting(g)), GroupoidFunction(g.arrow_count()));
}

TEST(Convolve, MatchesGroupAlgebraOnOneObject) {
  RandomSource rng(71);
  for (const char* name : {"Z/2", "S3", "Q8"}) {
    const FiniteGroup grp = group_by_name(name);
    const FiniteGroupoid g = group_bundle({grp});
    for (int trial = 0; trial < 10; ++trial) {
      const auto f = rng.function(grp.order()), h = rng.function(grp.order());
      EXPECT_EQ(convolve(f, h, g, counting(g)), group_algebra_product(grp, f, h)) << name;
    }
  }
}

TEST(Convolve, BilinearAndRejectsNonHaar) {
  const FiniteGroupoid g = product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2)}));
  RandomSource rng(73);
  const MeasureFamily mu = synthesized(g, rng);
  const auto f = rng.function(g.arrow_count()), f2 = rng.function(g.arrow_count()), h = rng.function(g.arrow_count());
  const Rational t = rng.rational();
  GroupoidFunction combo(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) combo[i] = f[i] + t * f2[i];
  const auto a = convolve(f, h, g, mu), b = convolve(f2, h, g, mu), c = convolve(combo, h, g, mu);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_EQ(c[i], a[i] + t * b[i]);

  MeasureFamily skewed = mu;
  skewed.fibers[0].weights.begin()->second += 1;
  EXPECT_THROW(convolve(f, h, g, skewed), std::invalid_argument);
  EXPECT_THROW(convolve(GroupoidFunction(3), h, g, mu), std::invalid_argument);
}

TEST(Involution, Examples) {
  const FiniteGroupoid g = product_groupoid(pair_groupoid(3), group_bundle({symmetric_group_3()}));
  RandomSource rng(79);
  const MeasureFamily mu = synthesized(g, rng);
  for (int trial = 0; trial < 10; ++trial) {
    const auto f = rng.function(g.arrow_count()), h = rng.function(g.arrow_count());
    EXPECT_EQ(involution(involution(f, g), g), f);
    EXPECT_EQ(involution(convolve(f, h, g, mu), g), convolve(involution(h, g), involution(f, g), g, mu));
  }

  const FiniteGroupoid v4 = group_bundle({group_by_name("V4")});
  const auto f = rng.function(4);
  EXPECT_EQ(involution(f, v4), f);
}

TEST(Unit, DeltaIsATwoSidedUnit) {
  RandomSource rng(83);
  for (int trial = 0; trial < 20; ++trial) {
    const FiniteGroupoid g = random_groupoid(rng).groupoid;
    const MeasureFamily mu = synthesized(g, rng);
    const GroupoidFunction delta = unit_function(g, mu);
    const auto f = rng.function(g.arrow_count());
    EXPECT_EQ(convolve(delta, f, g, mu), f);
    EXPECT_EQ(convolve(f, delta, g, mu), f);
  }
}

TEST(Associativity, CountingOnPair3) {
  const FiniteGroupoid g = pair_groupoid(3);
  RandomSource rng(89);
  for (int trial = 0; trial < 20; ++trial) {
    const auto r = check_associativity(rng.function(9), rng.function(9), rng.function(9), g, counting(g));
    EXPECT_TRUE(r.system_is_haar);
    EXPECT_TRUE(r.ok());
  }
}

TEST(Associativity, SynthesizedSystemsOnRandomGroupoids) {
  RandomSource rng(97);
  for (int trial = 0; trial < 20; ++trial) {
    const auto gen = random_groupoid(rng);
    const FiniteGroupoid& g = gen.groupoid;
    const MeasureFamily mu = synthesized(g, rng);
    const std::size_t n = g.arrow_count();
    EXPECT_TRUE(check_associativity(rng.function(n), rng.function(n), rng.function(n), g, mu).ok()) << gen.description;
  }
}

TEST(Associativity, PerturbedSystemFailsWithinTwoHundredTriples) {
  const FiniteGroupoid g = product_groupoid(pair_groupoid(2), group_bundle({cyclic_group(2)}));
  RandomSource rng(101);
  MeasureFamily mu = synthesized(g, rng);
  mu.fibers[1].weights.rbegin()->second *= 3;
  ASSERT_FALSE(verify_haar(g, mu).ok());
  bool failed = false;
  for (int trial = 0; trial < 200 && !failed; ++trial) {
    const auto r = check_associativity(rng.function(8), rng.function(8), rng.function(8), g, mu);
    EXPECT_FALSE(r.system_is_haar);
    failed = !r.ok();
  }
  EXPECT_TRUE(failed);
}
