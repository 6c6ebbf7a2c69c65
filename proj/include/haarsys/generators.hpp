#pragma once

#include <haarsys/group.hpp>
#include <haarsys/groupoid.hpp>
#include <haarsys/rational.hpp>
#include <haarsys/stepbundle.hpp>

#include <cstdint>
#include <map>
#include <random>
#include <set>
#include <string>
#include <vector>

namespace haarsys {

/// Seeded source of the random inputs used by property checks. Draws are
/// reduced with plain modulo so that a seed gives the same stream on every
/// standard library.
class RandomSource {
 public:
  explicit RandomSource(std::uint64_t seed) : engine_(seed) {}

  /// Uniform-ish integer in [lo, hi].
  long between(long lo, long hi) {
    return lo + static_cast<long>(engine_() % static_cast<std::uint64_t>(hi - lo + 1));
  }

  bool coin() { return engine_() % 2 == 0; }

  template <class T>
  const T& pick(const std::vector<T>& items) {
    return items[static_cast<std::size_t>(between(0, static_cast<long>(items.size()) - 1))];
  }

  /// p/q with |p| <= max_num and 1 <= q <= max_den.
  Rational rational(long max_num = 6, long max_den = 4) {
    Rational q(between(-max_num, max_num), between(1, max_den));
    q.canonicalize();
    return q;
  }

  Rational positive_rational(long max_num = 6, long max_den = 4) {
    Rational q(between(1, max_num), between(1, max_den));
    q.canonicalize();
    return q;
  }

  std::vector<Rational> function(std::size_t n) {
    std::vector<Rational> f(n);
    for (auto& v : f) v = rational();
    return f;
  }

 private:
  std::mt19937_64 engine_;
};

/// Groups of order at most 8 used as random fibers and actors.
inline std::vector<std::string> small_group_names(std::size_t max_order = 8) {
  std::vector<std::string> out;
  for (const char* name : {"trivial", "Z/2", "Z/3", "Z/4", "V4", "Z/5", "S3", "Z/6", "Z/7", "Z/8", "D4", "Q8", "Z/4xZ/2"}) {
    if (group_by_name(name).order() <= max_order) out.emplace_back(name);
  }
  return out;
}

/// Right action of `group` on the right cosets of `subgroup`, as an action
/// table act[x][h] = x.h. Coset x is the one containing the x-th smallest
/// coset representative.
inline std::vector<std::vector<std::size_t>> coset_action(const FiniteGroup& group, const std::vector<Element>& subgroup) {
  std::map<std::set<Element>, std::size_t> index;
  std::vector<std::set<Element>> cosets;
  auto coset_of = [&](Element f) {
    std::set<Element> c;
    for (Element k : subgroup) c.insert(group.mul(k, f));
    return c;
  };
  for (Element f = 0; f < group.order(); ++f) {
    auto c = coset_of(f);
    if (index.emplace(c, cosets.size()).second) cosets.push_back(std::move(c));
  }
  std::vector<std::vector<std::size_t>> act(cosets.size(), std::vector<std::size_t>(group.order()));
  for (std::size_t x = 0; x < cosets.size(); ++x) {
    const Element f = *cosets[x].begin();
    for (Element h = 0; h < group.order(); ++h) act[x][h] = index.at(coset_of(group.mul(f, h)));
  }
  return act;
}

struct GeneratedGroupoid {
  std::string description;
  FiniteGroupoid groupoid;
};

/// Products of pair groupoids with group bundles, action groupoids with
/// nontrivial isotropy, and disjoint unions of the two. Sizes stay below
/// about 150 arrows.
inline GeneratedGroupoid random_groupoid(RandomSource& rng) {
  const auto groups = small_group_names(4);
  auto product_instance = [&]() -> GeneratedGroupoid {
    const auto n = static_cast<std::size_t>(rng.between(1, 3));
    const auto k = static_cast<std::size_t>(rng.between(1, 3));
    std::vector<FiniteGroup> fibers;
    std::string desc = "pair" + std::to_string(n) + " x bundle(";
    for (std::size_t i = 0; i < k; ++i) {
      const auto& name = rng.pick(groups);
      fibers.push_back(group_by_name(name));
      desc += (i ? "," : "") + name;
    }
    return {desc + ")", product_groupoid(pair_groupoid(n), group_bundle(fibers))};
  };
  auto action_instance = [&]() -> GeneratedGroupoid {
    const std::string name = rng.pick(small_group_names(8));
    const FiniteGroup group = group_by_name(name);
    const auto subgroups = all_subgroups(group);
    const auto& h = rng.pick(subgroups);
    const auto act = coset_action(group, h);
    return {name + " on cosets of a subgroup of order " + std::to_string(h.size()),
            action_groupoid(group, act.size(), act)};
  };
  switch (rng.between(0, 2)) {
    case 0: return product_instance();
    case 1: return action_instance();
    default: {
      auto a = product_instance();
      auto b = action_instance();
      return {"union of " + a.description + " and " + b.description, disjoint_union({a.groupoid, b.groupoid})};
    }
  }
}

/// Random step subgroup bundle with at most `max_breakpoints` breakpoints
/// in total. Point groups are drawn either from the subgroups contained in
/// both neighboring pieces or from all subgroups, so that open and non-open
/// bundles both occur often.
inline StepSubgroupBundle random_step_bundle(RandomSource& rng, std::size_t max_breakpoints = 5) {
  StepSubgroupBundle b;
  b.ambient = group_by_name(rng.pick(small_group_names(8)));
  const auto subgroups = all_subgroups(b.ambient);
  std::set<Rational> interior;
  const long wanted = rng.between(0, static_cast<long>(max_breakpoints) - 2);
  while (static_cast<long>(interior.size()) < wanted) {
    Rational x(rng.between(1, 11), 12);
    x.canonicalize();
    interior.insert(x);
  }
  b.breakpoints.push_back(0);
  b.breakpoints.insert(b.breakpoints.end(), interior.begin(), interior.end());
  b.breakpoints.push_back(1);
  for (std::size_t i = 0; i + 1 < b.breakpoints.size(); ++i) b.pieces.push_back(rng.pick(subgroups));
  const bool aim_open = rng.coin();
  for (std::size_t j = 0; j < b.breakpoints.size(); ++j) {
    if (!aim_open) {
      b.points.push_back(rng.pick(subgroups));
      continue;
    }
    std::vector<std::vector<Element>> fitting;
    for (const auto& s : subgroups) {
      bool inside = true;
      for (Element g : s) {
        if (j > 0) inside = inside && StepSubgroupBundle::has(b.pieces[j - 1], g);
        if (j < b.pieces.size()) inside = inside && StepSubgroupBundle::has(b.pieces[j], g);
      }
      if (inside) fitting.push_back(s);
    }
    b.points.push_back(rng.pick(fitting));
  }
  return b;
}

/// Random piecewise-linear test function that is admissible for `b`:
/// continuous along every sheet where it stays in the bundle, zero on a
/// quarter of each piece next to a point where its sheet leaves the
/// bundle, and arbitrary off the bundle.
inline SheetFunction random_admissible(RandomSource& rng, const StepSubgroupBundle& b) {
  SheetFunction phi;
  const auto& bp = b.breakpoints;
  for (Element g = 0; g < b.ambient.order(); ++g) {
    std::vector<Rational> at(bp.size());
    for (std::size_t j = 0; j < bp.size(); ++j) {
      at[j] = StepSubgroupBundle::has(b.points[j], g) ? rng.rational() : Rational(0);
    }
    std::vector<std::pair<Rational, Rational>> inner(b.pieces.size());  // one-sided limits per piece
    std::vector<Knot> knots;
    for (std::size_t i = 0; i < b.pieces.size(); ++i) {
      const bool on = StepSubgroupBundle::has(b.pieces[i], g);
      const bool left_in = StepSubgroupBundle::has(b.points[i], g);
      const bool right_in = StepSubgroupBundle::has(b.points[i + 1], g);
      inner[i].first = !on ? rng.rational() : left_in ? at[i] : Rational(0);
      inner[i].second = !on ? rng.rational() : right_in ? at[i + 1] : Rational(0);
    }
    for (std::size_t j = 0; j < bp.size(); ++j) {
      if (j > 0) knots.push_back({bp[j], inner[j - 1].second});
      knots.push_back({bp[j], at[j]});
      if (j + 1 < bp.size()) {
        knots.push_back({bp[j], inner[j].first});
        const Rational len = bp[j + 1] - bp[j];
        const bool on = StepSubgroupBundle::has(b.pieces[j], g);
        const bool left_in = StepSubgroupBundle::has(b.points[j], g);
        const bool right_in = StepSubgroupBundle::has(b.points[j + 1], g);
        if (on && !left_in) knots.push_back({bp[j] + len / 4, 0});
        knots.push_back({bp[j] + len / 2, rng.rational()});
        if (on && !right_in) knots.push_back({bp[j + 1] - len / 4, 0});
      }
    }
    phi.sheets.push_back(from_knots(knots));
  }
  return phi;
}

}  // namespace haarsys
