#pragma once

#include <haarsys/group.hpp>
#include <haarsys/groupoid.hpp>

#include <cstddef>
#include <map>
#include <numeric>
#include <stdexcept>
#include <utility>
#include <vector>

namespace haarsys {

/// The stability groupoid G' = {g : r(g) = s(g)}, kept both as a groupoid
/// in its own right and as one group per object.
struct IsotropyBundle {
  /// G' with its own dense arrow ids; arrow i is embedding[i] in G.
  FiniteGroupoid groupoid;
  std::vector<ArrowId> embedding;
  /// fibers[x] lists the arrows of G_x^x (ids in G, ascending); element i
  /// of groups[x] is fibers[x][i].
  std::vector<std::vector<ArrowId>> fibers;
  std::vector<FiniteGroup> groups;
};

inline IsotropyBundle stability_groupoid(const FiniteGroupoid& g) {
  IsotropyBundle out;
  std::vector<ArrowId> local(g.arrow_count(), npos);
  GroupoidTables t;
  t.objects = g.object_count();
  for (const Arrow& a : g.arrows()) {
    if (a.src != a.dst) continue;
    local[a.id] = out.embedding.size();
    t.arrows.push_back({out.embedding.size(), a.src, a.dst});
    out.embedding.push_back(a.id);
  }
  for (std::size_t i = 0; i < out.embedding.size(); ++i) {
    const ArrowId a = out.embedding[i];
    t.inverse.emplace_back(i, local[g.inverse(a)]);
    for (ArrowId b : g.range_fiber(g.source(a))) {
      if (local[b] == npos) continue;
      t.compose.push_back({i, local[b], local[g.compose(a, b)]});
    }
  }
  for (ObjectId x = 0; x < g.object_count(); ++x) t.identity.emplace_back(x, local[g.identity(x)]);
  out.groupoid = FiniteGroupoid(t);

  out.fibers.resize(g.object_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    out.fibers[x] = hom_set(g, x, x);
    std::map<ArrowId, Element> index;
    for (std::size_t i = 0; i < out.fibers[x].size(); ++i) index[out.fibers[x][i]] = i;
    CayleyTable table(out.fibers[x].size(), std::vector<Element>(out.fibers[x].size()));
    for (std::size_t i = 0; i < out.fibers[x].size(); ++i) {
      for (std::size_t j = 0; j < out.fibers[x].size(); ++j) {
        table[i][j] = index.at(g.compose(out.fibers[x][i], out.fibers[x][j]));
      }
    }
    out.groups.emplace_back(std::move(table));
  }
  return out;
}

/// Orbits of the groupoid on its objects, i.e. the classes of E(G).
struct OrbitPartition {
  std::vector<std::size_t> class_of;
  /// Each class ascending; classes ordered by smallest member.
  std::vector<std::vector<ObjectId>> classes;

  bool related(ObjectId x, ObjectId y) const { return class_of.at(x) == class_of.at(y); }
};

namespace detail {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }

  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace detail

inline OrbitPartition orbit_partition(const FiniteGroupoid& g) {
  detail::DisjointSets sets(g.object_count());
  for (const Arrow& a : g.arrows()) sets.unite(a.src, a.dst);
  OrbitPartition out;
  out.class_of.assign(g.object_count(), npos);
  std::map<std::size_t, std::size_t> root_to_class;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    auto [it, fresh] = root_to_class.emplace(sets.find(x), out.classes.size());
    if (fresh) out.classes.emplace_back();
    out.class_of[x] = it->second;
    out.classes[it->second].push_back(x);
  }
  return out;
}

/// The principal groupoid G/~ where g ~ h iff r(g) = r(h) and s(g) = s(h).
/// Quotient arrows are numbered in order of their smallest member, which
/// is also the stored representative.
struct PrincipalQuotient {
  FiniteGroupoid quotient;
  std::vector<ArrowId> class_of;
  std::vector<ArrowId> representative;
  /// [g][h] = [gh] was checked on every composable pair of G.
  bool well_defined = false;

  /// Members of quotient arrow c, ascending.
  std::vector<ArrowId> members(const FiniteGroupoid& g, ArrowId c) const {
    return hom_set(g, quotient.source(c), quotient.range(c));
  }
};

inline PrincipalQuotient quotient_principal(const FiniteGroupoid& g) {
  PrincipalQuotient out;
  std::map<std::pair<ObjectId, ObjectId>, ArrowId> by_endpoints;
  GroupoidTables t;
  t.objects = g.object_count();
  out.class_of.resize(g.arrow_count());
  for (const Arrow& a : g.arrows()) {
    auto [it, fresh] = by_endpoints.emplace(std::pair{a.dst, a.src}, out.representative.size());
    if (fresh) {
      t.arrows.push_back({out.representative.size(), a.src, a.dst});
      out.representative.push_back(a.id);
    }
    out.class_of[a.id] = it->second;
  }
  const std::size_t m = out.representative.size();
  for (ArrowId c = 0; c < m; ++c) {
    const ArrowId rep = out.representative[c];
    t.inverse.emplace_back(c, out.class_of[g.inverse(rep)]);
    for (ArrowId d = 0; d < m; ++d) {
      const ArrowId other = out.representative[d];
      if (!g.composable(rep, other)) continue;
      t.compose.push_back({c, d, out.class_of[g.compose(rep, other)]});
    }
  }
  for (ObjectId x = 0; x < g.object_count(); ++x) t.identity.emplace_back(x, out.class_of[g.identity(x)]);
  out.quotient = FiniteGroupoid(t);

  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    for (ArrowId b : g.range_fiber(g.source(a))) {
      const ArrowId ab = g.compose(a, b);
      if (ab == npos || out.quotient.compose(out.class_of[a], out.class_of[b]) != out.class_of[ab]) {
        throw std::logic_error("quotient composition is not well defined at arrows " + std::to_string(a) + ", " +
                               std::to_string(b));
      }
    }
  }
  out.well_defined = true;
  return out;
}

/// [g] = G_{s(g)}^{r(g)}.
inline std::vector<ArrowId> class_of(const FiniteGroupoid& g, ArrowId a) {
  return hom_set(g, g.source(a), g.range(a));
}

/// G' acting on the arrows of G by right translation: rho(g) = s(g) and
/// g.h = gh for h in G_{s(g)}^{s(g)}.
inline GroupoidAction isotropy_action(const FiniteGroupoid& g) {
  GroupoidAction action;
  IsotropyBundle iso = stability_groupoid(g);
  action.actor = iso.groupoid;
  action.space_size = g.arrow_count();
  action.anchor.resize(g.arrow_count());
  const std::size_t m = iso.embedding.size();
  action.act.assign(g.arrow_count() * m, npos);
  for (ArrowId z = 0; z < g.arrow_count(); ++z) {
    action.anchor[z] = g.source(z);
    for (std::size_t h = 0; h < m; ++h) {
      if (g.range(iso.embedding[h]) == g.source(z)) action.act[z * m + h] = g.compose(z, iso.embedding[h]);
    }
  }
  return action;
}

}  // namespace haarsys
