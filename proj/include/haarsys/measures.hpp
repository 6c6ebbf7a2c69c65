#pragma once

#include <haarsys/decompose.hpp>
#include <haarsys/groupoid.hpp>
#include <haarsys/linalg.hpp>
#include <haarsys/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarsys {

/// A finitely supported measure, identified with its weights. Arrows
/// without an entry have weight zero.
struct FiberMeasure {
  std::map<ArrowId, Rational> weights;

  Rational weight(ArrowId a) const {
    auto it = weights.find(a);
    return it == weights.end() ? Rational(0) : it->second;
  }

  Rational total_mass() const {
    Rational sum = 0;
    for (const auto& [a, w] : weights) sum += w;
    return sum;
  }

  bool operator==(const FiberMeasure&) const = default;
};

/// Real-valued function on the arrows of a groupoid, indexed by arrow id.
using ArrowFunction = std::vector<Rational>;

inline Rational integrate(const FiberMeasure& mu, const ArrowFunction& phi) {
  Rational sum = 0;
  for (const auto& [a, w] : mu.weights) sum += w * phi.at(a);
  return sum;
}

/// One Haar measure per isotropy group G_x^x, indexed by object.
struct CoherentSystem {
  std::vector<FiberMeasure> fibers;

  bool operator==(const CoherentSystem&) const = default;
};

/// Uniform weights `scale` on the given group elements; on a finite group
/// these are all the Haar measures.
inline FiberMeasure haar_on_group(std::span<const ArrowId> elements, const Rational& scale) {
  if (scale <= 0) throw std::invalid_argument("Haar scale must be positive, got " + scale.get_str());
  FiberMeasure mu;
  for (ArrowId a : elements) mu.weights[a] = scale;
  return mu;
}

inline CoherentSystem uniform_coherent_system(const IsotropyBundle& bundle, std::span<const Rational> scale) {
  if (scale.size() != bundle.fibers.size()) throw std::invalid_argument("need one scale per object");
  CoherentSystem out;
  for (std::size_t x = 0; x < bundle.fibers.size(); ++x) out.fibers.push_back(haar_on_group(bundle.fibers[x], scale[x]));
  return out;
}

inline CoherentSystem uniform_coherent_system(const IsotropyBundle& bundle, const Rational& scale) {
  std::vector<Rational> scales(bundle.fibers.size(), scale);
  return uniform_coherent_system(bundle, scales);
}

struct CoherenceIssue {
  enum class Kind { missing_fiber, outside_group, not_positive, not_left_invariant, not_right_invariant };
  Kind kind;
  ObjectId object = 0;
  ArrowId arrow = npos;
  /// Translating element for invariance failures.
  ArrowId translator = npos;
};

struct CoherenceReport {
  std::vector<CoherenceIssue> issues;
  /// Continuity in x is automatic on a discrete base.
  bool continuity_vacuous = true;

  bool ok() const { return issues.empty(); }
};

/// Checks that each fiber measure is a Haar measure on G_x^x: supported on
/// the group, strictly positive, and invariant under translation from
/// either side.
inline CoherenceReport verify_coherent(const CoherentSystem& system, const IsotropyBundle& bundle) {
  using K = CoherenceIssue::Kind;
  CoherenceReport report;
  for (ObjectId x = 0; x < bundle.fibers.size(); ++x) {
    if (x >= system.fibers.size()) {
      report.issues.push_back({K::missing_fiber, x});
      continue;
    }
    const auto& mu = system.fibers[x];
    const auto& group = bundle.fibers[x];
    for (const auto& [a, w] : mu.weights) {
      if (!std::binary_search(group.begin(), group.end(), a)) report.issues.push_back({K::outside_group, x, a});
    }
    for (ArrowId k : group) {
      if (mu.weight(k) <= 0) report.issues.push_back({K::not_positive, x, k});
    }
    const FiniteGroup& table = bundle.groups[x];
    for (Element h = 0; h < table.order(); ++h) {
      for (Element k = 0; k < table.order(); ++k) {
        const Rational wk = mu.weight(group[k]);
        if (mu.weight(group[table.mul(h, k)]) != wk) {
          report.issues.push_back({K::not_left_invariant, x, group[k], group[h]});
        }
        if (mu.weight(group[table.mul(k, h)]) != wk) {
          report.issues.push_back({K::not_right_invariant, x, group[k], group[h]});
        }
      }
    }
  }
  return report;
}

/// mu_[g]: push-forward of the isotropy Haar measure at s(g) along left
/// translation by g, living on the class [g] = G_{s(g)}^{r(g)}.
struct ClassMeasure {
  std::vector<ArrowId> members;
  FiberMeasure weights;
};

inline ClassMeasure class_measure(const FiniteGroupoid& g, const CoherentSystem& system, ArrowId a) {
  ClassMeasure out;
  out.members = class_of(g, a);
  for (const auto& [h, w] : system.fibers.at(g.source(a)).weights) out.weights.weights[g.compose(a, h)] += w;
  return out;
}

/// phi-bar on the principal quotient: the value at class c is
/// sum over h in G_{s}^{s} of nu_s(h) phi(rep(c) h), s the source of c.
inline std::vector<Rational> bar(const ArrowFunction& phi, const CoherentSystem& system, const FiniteGroupoid& g,
                                 const PrincipalQuotient& q) {
  std::vector<Rational> out(q.representative.size());
  for (ArrowId c = 0; c < q.representative.size(); ++c) {
    const ArrowId rep = q.representative[c];
    for (const auto& [h, w] : system.fibers.at(g.source(rep)).weights) out[c] += w * phi.at(g.compose(rep, h));
  }
  return out;
}

struct UniquenessReport {
  std::vector<ArrowId> members;
  /// Dimension of {w on [g] : w(kh) = w(k) for all k in [g], h in G_s^s}.
  std::size_t dimension = 0;
  std::vector<std::vector<Rational>> basis;
  bool class_measure_in_space = false;

  bool unique_up_to_scale() const { return dimension == 1 && class_measure_in_space; }
};

/// Solves for all right-invariant weightings of the class [g] exactly and
/// checks that the class measure is one of them.
inline UniquenessReport verify_unique_up_to_scale(const FiniteGroupoid& g, const CoherentSystem& system, ArrowId a) {
  UniquenessReport report;
  report.members = class_of(g, a);
  std::map<ArrowId, std::size_t> column;
  for (std::size_t i = 0; i < report.members.size(); ++i) column[report.members[i]] = i;
  const auto isotropy = hom_set(g, g.source(a), g.source(a));

  RationalMatrix equations;
  for (ArrowId k : report.members) {
    for (ArrowId h : isotropy) {
      const ArrowId kh = g.compose(k, h);
      if (kh == k) continue;
      std::vector<Rational> row(report.members.size());
      row[column.at(kh)] += 1;
      row[column.at(k)] -= 1;
      equations.append_row(row);
    }
  }
  if (equations.rows() == 0) {
    report.dimension = report.members.size();
    for (std::size_t i = 0; i < report.members.size(); ++i) {
      std::vector<Rational> e(report.members.size());
      e[i] = 1;
      report.basis.push_back(std::move(e));
    }
  } else {
    report.basis = nullspace(equations);
    report.dimension = report.basis.size();
  }

  const ClassMeasure cm = class_measure(g, system, a);
  bool solves = true;
  for (ArrowId k : report.members) {
    for (ArrowId h : isotropy) solves = solves && cm.weights.weight(g.compose(k, h)) == cm.weights.weight(k);
  }
  report.class_measure_in_space = solves;
  return report;
}

}  // namespace haarsys
