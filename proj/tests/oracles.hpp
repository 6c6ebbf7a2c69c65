#pragma once

// Reference computations for the tests. They work from the raw tables or
// from closed forms and share no code with the library's checkers.

#include <haarsys/groupoid.hpp>
#include <haarsys/rational.hpp>

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <utility>
#include <vector>

namespace oracle {

using haarsys::ArrowId;
using haarsys::GroupoidTables;
using haarsys::ObjectId;
using haarsys::Rational;

/// Groupoid axioms straight from the tables, using maps throughout.
inline bool is_groupoid(const GroupoidTables& t) {
  const std::size_t n = t.arrows.size();
  std::map<ArrowId, std::pair<ObjectId, ObjectId>> ends;  // id -> (src, dst)
  for (const auto& a : t.arrows) {
    if (a.src >= t.objects || a.dst >= t.objects || ends.count(a.id)) return false;
    ends[a.id] = {a.src, a.dst};
  }
  if (ends.size() != n || (n > 0 && ends.rbegin()->first != n - 1)) return false;
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> mul;
  for (const auto& [a, b, c] : t.compose) {
    if (!ends.count(a) || !ends.count(b) || !ends.count(c) || !mul.emplace(std::pair{a, b}, c).second) return false;
  }
  std::map<ArrowId, ArrowId> inv;
  for (const auto& [a, b] : t.inverse) {
    if (!ends.count(a) || !ends.count(b) || !inv.emplace(a, b).second) return false;
  }
  std::map<ObjectId, ArrowId> unit;
  for (const auto& [x, a] : t.identity) {
    if (x >= t.objects || !ends.count(a) || !unit.emplace(x, a).second) return false;
  }
  if (inv.size() != n || unit.size() != t.objects) return false;

  auto src = [&](ArrowId a) { return ends.at(a).first; };
  auto dst = [&](ArrowId a) { return ends.at(a).second; };
  auto product = [&](ArrowId a, ArrowId b) -> std::optional<ArrowId> {
    auto it = mul.find({a, b});
    if (it == mul.end()) return std::nullopt;
    return it->second;
  };
  for (const auto& [a, ea] : ends) {
    for (const auto& [b, eb] : ends) {
      const auto ab = product(a, b);
      if (ab.has_value() != (ea.first == eb.second)) return false;
      if (ab && (dst(*ab) != ea.second || src(*ab) != eb.first)) return false;
    }
  }
  for (const auto& [ab_pair, ab] : mul) {
    const auto [a, b] = ab_pair;
    for (const auto& [c, ec] : ends) {
      if (ec.second != src(b)) continue;
      const auto bc = product(b, c);
      if (!bc || product(ab, c) != product(a, *bc)) return false;
    }
  }
  for (const auto& [x, e] : unit) {
    if (src(e) != x || dst(e) != x) return false;
  }
  for (const auto& [a, ea] : ends) {
    if (product(unit.at(ea.second), a) != a || product(a, unit.at(ea.first)) != a) return false;
    if (product(a, inv.at(a)) != unit.at(ea.second) || product(inv.at(a), a) != unit.at(ea.first)) return false;
  }
  return true;
}

/// On a finite groupoid a weight family is left invariant exactly when the
/// weight of an arrow depends only on its source: for k, k' with the same
/// source, translation by k' k^-1 moves k to k'.
inline bool depends_only_on_source(const GroupoidTables& t, const std::vector<Rational>& w) {
  std::map<ObjectId, Rational> seen;
  for (const auto& a : t.arrows) {
    auto [it, fresh] = seen.emplace(a.src, w.at(a.id));
    if (!fresh && it->second != w.at(a.id)) return false;
  }
  return true;
}

/// Haar weights w(k) = c(s(k)) for a per-object constant c.
inline std::vector<Rational> source_weights(const GroupoidTables& t, const std::vector<Rational>& c) {
  std::vector<Rational> w(t.arrows.size());
  for (const auto& a : t.arrows) w[a.id] = c.at(a.src);
  return w;
}

/// Objects connected by arrows, by breadth-first search.
inline std::vector<std::set<ObjectId>> orbits(const GroupoidTables& t) {
  std::vector<std::vector<ObjectId>> adj(t.objects);
  for (const auto& a : t.arrows) {
    adj[a.src].push_back(a.dst);
    adj[a.dst].push_back(a.src);
  }
  std::vector<bool> seen(t.objects, false);
  std::vector<std::set<ObjectId>> out;
  for (ObjectId start = 0; start < t.objects; ++start) {
    if (seen[start]) continue;
    std::set<ObjectId> orbit{start};
    std::vector<ObjectId> queue{start};
    seen[start] = true;
    while (!queue.empty()) {
      const ObjectId x = queue.back();
      queue.pop_back();
      for (ObjectId y : adj[x]) {
        if (!seen[y]) {
          seen[y] = true;
          orbit.insert(y);
          queue.push_back(y);
        }
      }
    }
    out.push_back(std::move(orbit));
  }
  return out;
}

/// Whether two small groupoids are isomorphic, by trying every object
/// bijection and every arrow bijection compatible with it.
inline bool isomorphic(const GroupoidTables& a, const GroupoidTables& b) {
  if (a.objects != b.objects || a.arrows.size() != b.arrows.size()) return false;
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> mul_a, mul_b;
  for (const auto& [x, y, z] : a.compose) mul_a[{x, y}] = z;
  for (const auto& [x, y, z] : b.compose) mul_b[{x, y}] = z;
  std::vector<ObjectId> objs(a.objects);
  std::iota(objs.begin(), objs.end(), ObjectId{0});
  std::vector<ArrowId> arrows(a.arrows.size());
  do {
    std::iota(arrows.begin(), arrows.end(), ArrowId{0});
    do {
      bool ok = true;
      for (const auto& arr : a.arrows) {
        const auto& image = b.arrows[arrows[arr.id]];
        ok = ok && image.src == objs[arr.src] && image.dst == objs[arr.dst];
      }
      for (const auto& [xy, z] : mul_a) {
        if (!ok) break;
        auto it = mul_b.find({arrows[xy.first], arrows[xy.second]});
        ok = it != mul_b.end() && it->second == arrows[z];
      }
      if (ok) return true;
    } while (std::next_permutation(arrows.begin(), arrows.end()));
  } while (std::next_permutation(objs.begin(), objs.end()));
  return false;
}

}  // namespace oracle
