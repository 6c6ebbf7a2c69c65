#pragma once

#include <haarsys/groupoid.hpp>
#include <haarsys/io.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace haarsys {

/// A named input shipped with the library, usable as `--example NAME`.
struct BuiltinExample {
  std::string name;
  std::string description;
  Manifest manifest;
};

namespace detail {

inline Manifest make_manifest(ManifestKind kind, std::string name, json payload) {
  return Manifest{kind, std::move(name), std::nullopt, std::move(payload)};
}

inline json knots(std::initializer_list<std::pair<const char*, const char*>> list) {
  json out = json::array();
  for (const auto& [x, y] : list) out.push_back({x, y});
  return out;
}

// Pair groupoid on three objects with the inverse of arrow 1 = (0,1)
// pointed at arrow 2 = (0,2) instead of arrow 3 = (1,0).
inline json broken_pair3() {
  GroupoidTables t = pair_groupoid(3).tables();
  for (auto& [a, b] : t.inverse) {
    if (a == 1) b = 2;
  }
  return write_tables(t);
}

inline std::vector<BuiltinExample> make_builtin_examples() {
  using K = ManifestKind;
  std::vector<BuiltinExample> out;
  auto add = [&](std::string name, std::string description, K kind, json payload) {
    out.push_back({name, std::move(description), make_manifest(kind, name, std::move(payload))});
  };

  add("pair1", "pair groupoid on one object", K::groupoid, {{"pair", 1}});
  add("pair2", "pair groupoid on two objects", K::groupoid, {{"pair", 2}});
  add("pair3", "pair groupoid on three objects", K::groupoid, {{"pair", 3}});
  add("pair5", "pair groupoid on five objects", K::groupoid, {{"pair", 5}});
  add("pair2xZ2", "pair groupoid on two objects times the group Z/2", K::groupoid,
      {{"product", json::array({{{"pair", 2}}, {{"bundle", {"Z/2"}}}})}});
  add("pair2xZ2-bundle", "pair groupoid on two objects times the bundle (Z/2, Z/2)", K::groupoid,
      {{"product", json::array({{{"pair", 2}}, {{"bundle", {"Z/2", "Z/2"}}}})}});
  add("bundle-Z2-trivial", "group bundle with fibers Z/2 and the trivial group", K::groupoid,
      {{"bundle", {"Z/2", "trivial"}}});
  add("bundle-Z2-S3", "group bundle with fibers Z/2 and S3", K::groupoid, {{"bundle", {"Z/2", "S3"}}});
  add("S3", "the group S3 as a one-object groupoid", K::groupoid, {{"bundle", {"S3"}}});
  add("z2-trivial-action", "Z/2 acting trivially on two points", K::groupoid,
      {{"action", {{"group", "Z/2"}, {"points", 2}, {"act", {{0, 0}, {1, 1}}}}}});
  add("z2-swap", "Z/2 swapping two points", K::groupoid,
      {{"action", {{"group", "Z/2"}, {"points", 2}, {"act", {{0, 1}, {1, 0}}}}}});
  add("z4-sign-action", "Z/4 acting on two points through Z/4 -> Z/2", K::groupoid,
      {{"action", {{"group", "Z/4"}, {"points", 2}, {"act", {{0, 1, 0, 1}, {1, 0, 1, 0}}}}}});
  add("pair2-plus-Z2", "disjoint union of pair2 and the group Z/2", K::groupoid,
      {{"union", json::array({{{"pair", 2}}, {{"bundle", {"Z/2"}}}})}});
  add("broken", "pair3 with one inverse entry redirected", K::groupoid, broken_pair3());

  add("pair2-skewed", "non-invariant family on pair2: weights (1,1) at object 0, (1,2) at object 1", K::system,
      json::array({{{"x", 0}, {"weights", {{0, "1"}, {1, "1"}}}}, {{"x", 1}, {"weights", {{2, "1"}, {3, "2"}}}}}));
  add("pair3-counting", "counting measures on pair3", K::system, [] {
    json fibers = json::array();
    for (int x = 0; x < 3; ++x) {
      fibers.push_back({{"x", x}, {"weights", {{3 * x, "1"}, {3 * x + 1, "1"}, {3 * x + 2, "1"}}}});
    }
    return fibers;
  }());

  auto z2 = json("Z/2");
  add("drop-bundle", "Z/2 over [0,1/2], trivial over (1/2,1]", K::bundle,
      {{"ambient", z2}, {"breakpoints", {"0", "1/2", "1"}}, {"pieces", {{0, 1}, {0}}}, {"points", {{0, 1}, {0, 1}, {0}}}});
  add("isolated-drop-bundle", "Z/2 everywhere except the trivial group at 1/2", K::bundle,
      {{"ambient", z2}, {"breakpoints", {"0", "1/2", "1"}}, {"pieces", {{0, 1}, {0, 1}}}, {"points", {{0, 1}, {0}, {0, 1}}}});
  add("constant-bundle", "Z/2 over all of [0,1]", K::bundle,
      {{"ambient", z2}, {"breakpoints", {"0", "1"}}, {"pieces", {{0, 1}}}, {"points", {{0, 1}, {0, 1}}}});
  add("z4-not-closed-bundle", "Z/4 ambient with the non-subgroup {0,1} as a piece", K::bundle,
      {{"ambient", "Z/4"}, {"breakpoints", {"0", "1"}}, {"pieces", {{0, 1}}}, {"points", {{0}, {0}}}});

  add("unit-scale", "scale 1 for a coherent family", K::system, {{"scale", knots({{"0", "1"}, {"1", "1"}})}});
  add("linear-scale", "scale 1+x for a coherent family", K::system, {{"scale", knots({{"0", "1"}, {"1", "2"}})}});
  add("tent-at-half", "sheet 1 rises to 1 at x=1/2, sheet 0 is zero", K::function,
      {{"sheets", {json::array(), knots({{"0", "0"}, {"1/2", "1"}, {"1", "0"}})}}});
  add("notch-at-half", "sheet 0 is 1, sheet 1 vanishes on [1/4, 3/4]", K::function,
      {{"sheets", {knots({{"0", "1"}, {"1", "1"}}), knots({{"0", "1"}, {"1/4", "0"}, {"3/4", "0"}, {"1", "1"}})}}});
  add("vee-at-half", "sheet 0 is 1, sheet 1 touches 0 only at x=1/2", K::function,
      {{"sheets", {knots({{"0", "1"}, {"1", "1"}}), knots({{"0", "1"}, {"1/2", "0"}, {"1", "1"}})}}});
  return out;
}

}  // namespace detail

inline const std::vector<BuiltinExample>& builtin_examples() {
  static const std::vector<BuiltinExample> examples = detail::make_builtin_examples();
  return examples;
}

inline std::optional<Manifest> find_example(std::string_view name) {
  for (const auto& e : builtin_examples()) {
    if (e.name == name) return e.manifest;
  }
  return std::nullopt;
}

}  // namespace haarsys
