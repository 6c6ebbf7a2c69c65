#pragma once

#include <haarsys/group.hpp>

#include <algorithm>
#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haarsys {

using ObjectId = std::size_t;
using ArrowId = std::size_t;

inline constexpr std::size_t npos = std::numeric_limits<std::size_t>::max();

/// An arrow g with source s(g) = src and range r(g) = dst.
struct Arrow {
  ArrowId id = 0;
  ObjectId src = 0;
  ObjectId dst = 0;

  bool operator==(const Arrow&) const = default;
};

/// Raw table description of a groupoid, as it appears in input files.
/// `compose` entries are (a, b, a*b); the product a*b is meant to exist
/// exactly when s(a) = r(b).
struct GroupoidTables {
  std::size_t objects = 0;
  std::vector<Arrow> arrows;
  std::vector<std::array<ArrowId, 3>> compose;
  std::vector<std::pair<ArrowId, ArrowId>> inverse;
  std::vector<std::pair<ObjectId, ArrowId>> identity;
};

/// One broken rule, with the arrows (or objects) that exhibit it.
struct Violation {
  std::string rule;
  std::vector<std::size_t> witness;
  std::string detail;

  bool operator==(const Violation&) const = default;
};

/// Structural problems (dangling ids, missing or conflicting entries) are
/// kept apart from axiom failures; axioms are only checked on tables that
/// are structurally sound.
struct ValidationReport {
  std::vector<Violation> structural;
  std::vector<Violation> axioms;

  bool ok() const { return structural.empty() && axioms.empty(); }

  bool cites(const std::string& rule, const std::vector<std::size_t>& witness) const {
    for (const auto* list : {&structural, &axioms}) {
      for (const auto& v : *list) {
        if (v.rule == rule && v.witness == witness) return true;
      }
    }
    return false;
  }
};

/// Structural soundness of raw tables: every id in range, arrow ids dense
/// and in order, inverse and identity maps total and single-valued, no
/// pair composed twice.
inline std::vector<Violation> check_structure(const GroupoidTables& t) {
  std::vector<Violation> out;
  const std::size_t n = t.arrows.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Arrow& a = t.arrows[i];
    if (a.id != i) out.push_back({"arrow-id", {i}, "arrow ids must be 0..|G|-1 in order"});
    if (a.src >= t.objects) out.push_back({"dangling-object", {a.id, a.src}, "arrow source is not an object"});
    if (a.dst >= t.objects) out.push_back({"dangling-object", {a.id, a.dst}, "arrow range is not an object"});
  }
  std::map<std::pair<ArrowId, ArrowId>, ArrowId> seen;
  for (const auto& [a, b, c] : t.compose) {
    if (a >= n || b >= n || c >= n) {
      out.push_back({"dangling-arrow", {a, b, c}, "compose entry references an unknown arrow"});
      continue;
    }
    if (!seen.emplace(std::pair{a, b}, c).second) {
      out.push_back({"duplicate-compose", {a, b}, "pair composed more than once"});
    }
  }
  std::vector<int> inverse_count(n, 0);
  for (const auto& [a, b] : t.inverse) {
    if (a >= n || b >= n) {
      out.push_back({"dangling-arrow", {a, b}, "inverse entry references an unknown arrow"});
      continue;
    }
    ++inverse_count[a];
  }
  for (std::size_t a = 0; a < n; ++a) {
    if (inverse_count[a] != 1) out.push_back({"inverse-table", {a}, "arrow needs exactly one inverse entry"});
  }
  std::vector<int> identity_count(t.objects, 0);
  for (const auto& [x, a] : t.identity) {
    if (x >= t.objects || a >= n) {
      out.push_back({"dangling-identity", {x, a}, "identity entry references an unknown object or arrow"});
      continue;
    }
    ++identity_count[x];
  }
  for (std::size_t x = 0; x < t.objects; ++x) {
    if (identity_count[x] != 1) out.push_back({"identity-table", {x}, "object needs exactly one identity entry"});
  }
  return out;
}

class StructuralError : public std::invalid_argument {
 public:
  explicit StructuralError(std::vector<Violation> issues)
      : std::invalid_argument("malformed groupoid tables: " + issues.front().rule + " " + issues.front().detail),
        issues_(std::move(issues)) {}
  const std::vector<Violation>& issues() const { return issues_; }

 private:
  std::vector<Violation> issues_;
};

/// A finite groupoid with explicit tables. Composition is stored densely so
/// lookups are O(1); a missing product is `npos`. Construction only
/// requires structural soundness, so values violating the groupoid axioms
/// can exist and be diagnosed with validate_groupoid.
class FiniteGroupoid {
 public:
  FiniteGroupoid() = default;

  explicit FiniteGroupoid(const GroupoidTables& t) {
    if (auto issues = check_structure(t); !issues.empty()) throw StructuralError(std::move(issues));
    objects_ = t.objects;
    arrows_ = t.arrows;
    const std::size_t n = arrows_.size();
    compose_.assign(n * n, npos);
    for (const auto& [a, b, c] : t.compose) compose_[a * n + b] = c;
    inverse_.assign(n, npos);
    for (const auto& [a, b] : t.inverse) inverse_[a] = b;
    identity_.assign(objects_, npos);
    for (const auto& [x, a] : t.identity) identity_[x] = a;
    range_fibers_.assign(objects_, {});
    source_fibers_.assign(objects_, {});
    for (const Arrow& a : arrows_) {
      range_fibers_[a.dst].push_back(a.id);
      source_fibers_[a.src].push_back(a.id);
    }
  }

  std::size_t object_count() const { return objects_; }
  std::size_t arrow_count() const { return arrows_.size(); }
  const std::vector<Arrow>& arrows() const { return arrows_; }

  ObjectId source(ArrowId a) const { return arrows_[a].src; }
  ObjectId range(ArrowId a) const { return arrows_[a].dst; }
  bool composable(ArrowId a, ArrowId b) const { return source(a) == range(b); }

  /// a*b, or npos where the table has no entry.
  ArrowId compose(ArrowId a, ArrowId b) const { return compose_[a * arrows_.size() + b]; }
  ArrowId inverse(ArrowId a) const { return inverse_[a]; }
  ArrowId identity(ObjectId x) const { return identity_[x]; }

  /// G^x, ascending ids.
  const std::vector<ArrowId>& range_fiber(ObjectId x) const { return range_fibers_.at(x); }
  /// G_x, ascending ids.
  const std::vector<ArrowId>& source_fiber(ObjectId x) const { return source_fibers_.at(x); }

  GroupoidTables tables() const {
    GroupoidTables t;
    t.objects = objects_;
    t.arrows = arrows_;
    const std::size_t n = arrows_.size();
    for (ArrowId a = 0; a < n; ++a) {
      for (ArrowId b = 0; b < n; ++b) {
        if (compose(a, b) != npos) t.compose.push_back({a, b, compose(a, b)});
      }
      t.inverse.emplace_back(a, inverse_[a]);
    }
    for (ObjectId x = 0; x < objects_; ++x) t.identity.emplace_back(x, identity_[x]);
    return t;
  }

  bool operator==(const FiniteGroupoid& o) const {
    return objects_ == o.objects_ && arrows_ == o.arrows_ && compose_ == o.compose_ && inverse_ == o.inverse_ &&
           identity_ == o.identity_;
  }

 private:
  std::size_t objects_ = 0;
  std::vector<Arrow> arrows_;
  std::vector<ArrowId> compose_;
  std::vector<ArrowId> inverse_;
  std::vector<ArrowId> identity_;
  std::vector<std::vector<ArrowId>> range_fibers_;
  std::vector<std::vector<ArrowId>> source_fibers_;
};

// ---------------------------------------------------------------------------
// Axiom validation

/// Checks every groupoid axiom exhaustively. Rules and their witnesses:
///   composition-domain     (a, b)     product present iff s(a) = r(b)
///   composition-endpoints  (a, b)     r(ab) = r(a) and s(ab) = s(b)
///   associativity          (a, b, c)  (ab)c = a(bc)
///   identity-endpoints     (x)        s(1_x) = r(1_x) = x
///   identity-neutral       (a)        1_{r(a)} a = a = a 1_{s(a)}
///   inverse-endpoints      (a)        r(a^-1) = s(a), s(a^-1) = r(a)
///   inverse-right          (a)        a a^-1 = 1_{r(a)}
///   inverse-left           (a)        a^-1 a = 1_{s(a)}
inline ValidationReport validate_groupoid(const FiniteGroupoid& g) {
  ValidationReport report;
  auto& out = report.axioms;
  const std::size_t n = g.arrow_count();

  for (ArrowId a = 0; a < n; ++a) {
    for (ArrowId b = 0; b < n; ++b) {
      const ArrowId ab = g.compose(a, b);
      if (g.composable(a, b) != (ab != npos)) {
        out.push_back({"composition-domain", {a, b},
                       ab == npos ? "composable pair has no product" : "non-composable pair has a product"});
        continue;
      }
      if (ab != npos && (g.range(ab) != g.range(a) || g.source(ab) != g.source(b))) {
        out.push_back({"composition-endpoints", {a, b}, "product has the wrong range or source"});
      }
    }
  }
  for (ArrowId a = 0; a < n; ++a) {
    for (ArrowId b : g.range_fiber(g.source(a))) {
      const ArrowId ab = g.compose(a, b);
      if (ab == npos) continue;
      for (ArrowId c : g.range_fiber(g.source(b))) {
        const ArrowId bc = g.compose(b, c);
        if (bc == npos) continue;
        const ArrowId left = g.compose(ab, c);
        const ArrowId right = g.compose(a, bc);
        if (left != right || left == npos) out.push_back({"associativity", {a, b, c}, "(ab)c differs from a(bc)"});
      }
    }
  }
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const ArrowId e = g.identity(x);
    if (g.source(e) != x || g.range(e) != x) out.push_back({"identity-endpoints", {x}, "identity is not a loop at x"});
  }
  for (ArrowId a = 0; a < n; ++a) {
    const ArrowId left = g.compose(g.identity(g.range(a)), a);
    const ArrowId right = g.compose(a, g.identity(g.source(a)));
    if (left != a || right != a) out.push_back({"identity-neutral", {a}, "identity does not act neutrally"});
  }
  for (ArrowId a = 0; a < n; ++a) {
    const ArrowId inv = g.inverse(a);
    if (g.range(inv) != g.source(a) || g.source(inv) != g.range(a)) {
      out.push_back({"inverse-endpoints", {a}, "inverse has the wrong range or source"});
    }
    if (g.compose(a, inv) != g.identity(g.range(a))) {
      out.push_back({"inverse-right", {a}, "a a^-1 is not the identity at r(a)"});
    }
    if (g.compose(inv, a) != g.identity(g.source(a))) {
      out.push_back({"inverse-left", {a}, "a^-1 a is not the identity at s(a)"});
    }
  }
  return report;
}

/// Validates raw tables, reporting structural defects distinctly. Axioms
/// are checked only once the tables are structurally sound.
inline ValidationReport validate_groupoid(const GroupoidTables& t) {
  ValidationReport report;
  report.structural = check_structure(t);
  if (report.structural.empty()) report.axioms = validate_groupoid(FiniteGroupoid(t)).axioms;
  return report;
}

// ---------------------------------------------------------------------------
// Fibers

enum class FiberKind { source, range, both };

/// G_x, G^x, or G_x^y (source x, range y) for FiberKind::both.
inline std::vector<ArrowId> fiber(const FiniteGroupoid& g, ObjectId x, FiberKind kind, ObjectId y = 0) {
  if (x >= g.object_count()) throw std::out_of_range("object " + std::to_string(x) + " does not exist");
  switch (kind) {
    case FiberKind::source: return g.source_fiber(x);
    case FiberKind::range: return g.range_fiber(x);
    case FiberKind::both: break;
  }
  if (y >= g.object_count()) throw std::out_of_range("object " + std::to_string(y) + " does not exist");
  std::vector<ArrowId> out;
  for (ArrowId a : g.source_fiber(x)) {
    if (g.range(a) == y) out.push_back(a);
  }
  return out;
}

/// G_x^y with the source first, matching the usual notation.
inline std::vector<ArrowId> hom_set(const FiniteGroupoid& g, ObjectId source, ObjectId range) {
  return fiber(g, source, FiberKind::both, range);
}

// ---------------------------------------------------------------------------
// Constructors

/// Pair groupoid on n objects: arrow (x, y) has id x*n + y, range x and
/// source y, and (x, y)(y, z) = (x, z).
inline FiniteGroupoid pair_groupoid(std::size_t n) {
  if (n == 0) throw std::invalid_argument("pair groupoid needs at least one object");
  GroupoidTables t;
  t.objects = n;
  auto id = [n](std::size_t x, std::size_t y) { return x * n + y; };
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) t.arrows.push_back({id(x, y), y, x});
  }
  for (std::size_t x = 0; x < n; ++x) {
    t.identity.emplace_back(x, id(x, x));
    for (std::size_t y = 0; y < n; ++y) {
      t.inverse.emplace_back(id(x, y), id(y, x));
      for (std::size_t z = 0; z < n; ++z) t.compose.push_back({id(x, y), id(y, z), id(x, z)});
    }
  }
  return FiniteGroupoid(t);
}

/// Bundle of groups: object i carries groups[i]; arrow ids run fiber by
/// fiber, element order preserved.
inline FiniteGroupoid group_bundle(const std::vector<FiniteGroup>& groups) {
  GroupoidTables t;
  t.objects = groups.size();
  std::size_t offset = 0;
  for (ObjectId x = 0; x < groups.size(); ++x) {
    const FiniteGroup& grp = groups[x];
    for (Element a = 0; a < grp.order(); ++a) t.arrows.push_back({offset + a, x, x});
    t.identity.emplace_back(x, offset + grp.identity());
    for (Element a = 0; a < grp.order(); ++a) {
      t.inverse.emplace_back(offset + a, offset + grp.inverse(a));
      for (Element b = 0; b < grp.order(); ++b) t.compose.push_back({offset + a, offset + b, offset + grp.mul(a, b)});
    }
    offset += grp.order();
  }
  return FiniteGroupoid(t);
}

/// Builds a bundle from raw tables, rejecting non-groups with the failing
/// elements.
inline FiniteGroupoid group_bundle(const std::vector<CayleyTable>& tables) {
  std::vector<FiniteGroup> groups;
  groups.reserve(tables.size());
  for (const auto& t : tables) groups.emplace_back(t);
  return group_bundle(groups);
}

class ActionError : public std::invalid_argument {
 public:
  ActionError(const std::string& what, std::vector<std::size_t> witness)
      : std::invalid_argument(what), witness_(std::move(witness)) {}
  const std::vector<std::size_t>& witness() const { return witness_; }

 private:
  std::vector<std::size_t> witness_;
};

/// Action groupoid of a right action x.h of `group` on `points` points,
/// act[x][h] = x.h. Arrow (x, h) has id x*|H| + h, range x and source x.h;
/// (x, h)(x.h, k) = (x, hk).
inline FiniteGroupoid action_groupoid(const FiniteGroup& group, std::size_t points,
                                      const std::vector<std::vector<std::size_t>>& act) {
  const std::size_t m = group.order();
  if (act.size() != points) throw ActionError("action table needs one row per point", {act.size()});
  for (std::size_t x = 0; x < points; ++x) {
    if (act[x].size() != m) throw ActionError("action row has the wrong length", {x});
    for (Element h = 0; h < m; ++h) {
      if (act[x][h] >= points) throw ActionError("action maps outside the point set", {x, h});
    }
    if (act[x][group.identity()] != x) throw ActionError("identity does not act trivially", {x});
    for (Element h = 0; h < m; ++h) {
      for (Element k = 0; k < m; ++k) {
        if (act[act[x][h]][k] != act[x][group.mul(h, k)]) throw ActionError("(x.h).k differs from x.(hk)", {x, h, k});
      }
    }
  }
  GroupoidTables t;
  t.objects = points;
  auto id = [m](std::size_t x, Element h) { return x * m + h; };
  for (std::size_t x = 0; x < points; ++x) {
    for (Element h = 0; h < m; ++h) t.arrows.push_back({id(x, h), act[x][h], x});
  }
  for (std::size_t x = 0; x < points; ++x) {
    t.identity.emplace_back(x, id(x, group.identity()));
    for (Element h = 0; h < m; ++h) {
      const std::size_t y = act[x][h];
      t.inverse.emplace_back(id(x, h), id(y, group.inverse(h)));
      for (Element k = 0; k < m; ++k) t.compose.push_back({id(x, h), id(y, k), id(x, group.mul(h, k))});
    }
  }
  return FiniteGroupoid(t);
}

/// Cartesian product; object (x1, x2) is x1*|X2| + x2 and arrow (a1, a2) is
/// a1*|G2| + a2, with componentwise structure.
inline FiniteGroupoid product_groupoid(const FiniteGroupoid& g1, const FiniteGroupoid& g2) {
  const std::size_t n2 = g2.arrow_count(), x2 = g2.object_count();
  GroupoidTables t;
  t.objects = g1.object_count() * x2;
  auto obj = [x2](ObjectId a, ObjectId b) { return a * x2 + b; };
  auto arr = [n2](ArrowId a, ArrowId b) { return a * n2 + b; };
  for (const Arrow& a : g1.arrows()) {
    for (const Arrow& b : g2.arrows()) t.arrows.push_back({arr(a.id, b.id), obj(a.src, b.src), obj(a.dst, b.dst)});
  }
  for (ObjectId a = 0; a < g1.object_count(); ++a) {
    for (ObjectId b = 0; b < x2; ++b) t.identity.emplace_back(obj(a, b), arr(g1.identity(a), g2.identity(b)));
  }
  for (ArrowId a1 = 0; a1 < g1.arrow_count(); ++a1) {
    for (ArrowId a2 = 0; a2 < n2; ++a2) {
      t.inverse.emplace_back(arr(a1, a2), arr(g1.inverse(a1), g2.inverse(a2)));
      for (ArrowId b1 : g1.range_fiber(g1.source(a1))) {
        const ArrowId c1 = g1.compose(a1, b1);
        if (c1 == npos) continue;
        for (ArrowId b2 : g2.range_fiber(g2.source(a2))) {
          const ArrowId c2 = g2.compose(a2, b2);
          if (c2 != npos) t.compose.push_back({arr(a1, a2), arr(b1, b2), arr(c1, c2)});
        }
      }
    }
  }
  return FiniteGroupoid(t);
}

/// Disjoint union; objects and arrows of later parts are shifted past
/// those of earlier parts.
inline FiniteGroupoid disjoint_union(const std::vector<FiniteGroupoid>& parts) {
  GroupoidTables t;
  std::size_t obj_offset = 0, arr_offset = 0;
  for (const auto& p : parts) {
    const auto pt = p.tables();
    for (const Arrow& a : pt.arrows) t.arrows.push_back({a.id + arr_offset, a.src + obj_offset, a.dst + obj_offset});
    for (const auto& [a, b, c] : pt.compose) t.compose.push_back({a + arr_offset, b + arr_offset, c + arr_offset});
    for (const auto& [a, b] : pt.inverse) t.inverse.emplace_back(a + arr_offset, b + arr_offset);
    for (const auto& [x, a] : pt.identity) t.identity.emplace_back(x + obj_offset, a + arr_offset);
    obj_offset += p.object_count();
    arr_offset += p.arrow_count();
  }
  t.objects = obj_offset;
  return FiniteGroupoid(t);
}

// ---------------------------------------------------------------------------
// Actions

/// Right action of a groupoid H on a finite set Z = {0, ..., space_size-1}
/// along the anchor rho: Z -> X. `act` is dense, act[z*|H| + h] = z.h or
/// npos where rho(z) != r(h).
struct GroupoidAction {
  FiniteGroupoid actor;
  std::size_t space_size = 0;
  std::vector<ObjectId> anchor;
  std::vector<std::size_t> act;

  std::size_t apply(std::size_t z, ArrowId h) const { return act[z * actor.arrow_count() + h]; }
};

inline std::vector<Violation> check_action(const GroupoidAction& a) {
  std::vector<Violation> out;
  const FiniteGroupoid& h = a.actor;
  if (a.anchor.size() != a.space_size || a.act.size() != a.space_size * h.arrow_count()) {
    out.push_back({"action-shape", {}, "anchor or action table has the wrong size"});
    return out;
  }
  for (std::size_t z = 0; z < a.space_size; ++z) {
    if (a.anchor[z] >= h.object_count()) {
      out.push_back({"action-anchor", {z}, "anchor is not an object of the acting groupoid"});
      return out;
    }
  }
  for (std::size_t z = 0; z < a.space_size; ++z) {
    for (ArrowId g = 0; g < h.arrow_count(); ++g) {
      const std::size_t zg = a.apply(z, g);
      const bool defined = a.anchor[z] == h.range(g);
      if (defined != (zg != npos) || (zg != npos && zg >= a.space_size)) {
        out.push_back({"action-domain", {z, g}, "z.h must be defined exactly when rho(z) = r(h)"});
        continue;
      }
      if (zg != npos && a.anchor[zg] != h.source(g)) out.push_back({"action-anchor", {z, g}, "rho(zh) != s(h)"});
    }
    if (a.apply(z, h.identity(a.anchor[z])) != z) out.push_back({"action-identity", {z}, "z.1 != z"});
  }
  for (std::size_t z = 0; z < a.space_size; ++z) {
    for (ArrowId g : h.range_fiber(a.anchor[z])) {
      const std::size_t zg = a.apply(z, g);
      if (zg == npos || zg >= a.space_size) continue;
      for (ArrowId k : h.range_fiber(h.source(g))) {
        const ArrowId gk = h.compose(g, k);
        if (gk == npos) continue;
        if (a.apply(z, gk) != a.apply(zg, k)) out.push_back({"action-compatibility", {z, g, k}, "z(hk) != (zh)k"});
      }
    }
  }
  return out;
}

struct FreeProperReport {
  std::vector<Violation> action_issues;
  bool free = true;
  /// First (z, h) with z.h = z and h not an identity.
  std::optional<std::pair<std::size_t, ArrowId>> witness;
  /// Always true here: every map between finite discrete spaces is proper.
  bool proper = true;
  /// Largest preimage of a point under (z, h) -> (zh, z).
  std::size_t max_graph_fiber = 0;
  std::size_t orbit_count = 0;
};

inline FreeProperReport verify_free_proper(const GroupoidAction& a) {
  FreeProperReport report;
  report.action_issues = check_action(a);
  if (!report.action_issues.empty()) {
    report.free = false;
    return report;
  }
  const FiniteGroupoid& h = a.actor;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> graph_fibers;
  std::vector<std::size_t> orbit(a.space_size, npos);
  for (std::size_t z = 0; z < a.space_size; ++z) {
    for (ArrowId g : h.range_fiber(a.anchor[z])) {
      const std::size_t zg = a.apply(z, g);
      if (zg == z && g != h.identity(h.source(g)) && report.free) {
        report.free = false;
        report.witness = std::pair{z, g};
      }
      const std::size_t size = ++graph_fibers[{zg, z}];
      report.max_graph_fiber = std::max(report.max_graph_fiber, size);
    }
    if (orbit[z] == npos) {
      for (ArrowId g : h.range_fiber(a.anchor[z])) orbit[a.apply(z, g)] = report.orbit_count;
      ++report.orbit_count;
    }
  }
  return report;
}

}  // namespace haarsys
