#pragma once

#include <haarsys/decompose.hpp>
#include <haarsys/groupoid.hpp>
#include <haarsys/linalg.hpp>
#include <haarsys/measures.hpp>
#include <haarsys/rational.hpp>

#include <cstddef>
#include <map>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haarsys {

/// One measure per object x, meant to live on the range fiber G^x.
struct MeasureFamily {
  std::vector<FiberMeasure> fibers;

  bool operator==(const MeasureFamily&) const = default;
};

using HaarSystem = MeasureFamily;

/// A Haar system on a computed principal quotient. The quotient groupoid is
/// carried along so that synthesis can check it is the right one.
struct PrincipalHaar {
  FiniteGroupoid quotient;
  HaarSystem system;
};

/// Every arrow lies in exactly one range fiber, so a family is the same
/// thing as a weight per arrow.
inline std::vector<Rational> arrow_weights(const FiniteGroupoid& g, const MeasureFamily& family) {
  std::vector<Rational> w(g.arrow_count());
  for (const Arrow& a : g.arrows()) {
    if (a.dst < family.fibers.size()) w[a.id] = family.fibers[a.dst].weight(a.id);
  }
  return w;
}

inline MeasureFamily family_from_weights(const FiniteGroupoid& g, std::span<const Rational> weights) {
  MeasureFamily family;
  family.fibers.resize(g.object_count());
  for (const Arrow& a : g.arrows()) family.fibers[a.dst].weights[a.id] = weights[a.id];
  return family;
}

struct InvarianceViolation {
  ArrowId alpha = 0;
  ArrowId g = 0;
  /// mu^{r(alpha)}(alpha g) and mu^{s(alpha)}(g).
  Rational translated;
  Rational original;
};

struct HaarReport {
  /// Family indexed by the wrong number of objects.
  bool shape_mismatch = false;
  /// (x, arrow) with weight on an arrow outside G^x.
  std::vector<std::pair<ObjectId, ArrowId>> domain_errors;
  /// Condition (a): (x, arrow) in G^x with weight <= 0.
  std::vector<std::pair<ObjectId, ArrowId>> support_violations;
  /// Condition (b), pointwise.
  std::vector<InvarianceViolation> invariance_violations;
  /// Condition (c) holds trivially on a discrete base.
  bool continuity_vacuous = true;

  bool structurally_sound() const { return !shape_mismatch && domain_errors.empty(); }
  bool ok() const { return structurally_sound() && support_violations.empty() && invariance_violations.empty(); }
};

/// Checks the Haar system axioms exhaustively. Left invariance is checked
/// pointwise, mu^x(alpha g) = mu^y(g) for alpha in G_y^x and g in G^y,
/// which on a finite discrete space is the same as equality of integrals
/// of all test functions.
inline HaarReport verify_haar(const FiniteGroupoid& g, const MeasureFamily& system) {
  HaarReport report;
  if (system.fibers.size() != g.object_count()) {
    report.shape_mismatch = true;
    return report;
  }
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    for (const auto& [a, w] : system.fibers[x].weights) {
      if (a >= g.arrow_count() || g.range(a) != x) report.domain_errors.emplace_back(x, a);
    }
  }
  if (!report.domain_errors.empty()) return report;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    for (ArrowId a : g.range_fiber(x)) {
      if (system.fibers[x].weight(a) <= 0) report.support_violations.emplace_back(x, a);
    }
  }
  for (const Arrow& alpha : g.arrows()) {
    const auto& target = system.fibers[alpha.dst];
    const auto& origin = system.fibers[alpha.src];
    for (ArrowId k : g.range_fiber(alpha.src)) {
      const Rational translated = target.weight(g.compose(alpha.id, k));
      const Rational original = origin.weight(k);
      if (translated != original) report.invariance_violations.push_back({alpha.id, k, translated, original});
    }
  }
  return report;
}

/// Condition (a) alone: every (x, arrow) with arrow in G^x and zero (or
/// negative) weight.
inline std::vector<std::pair<ObjectId, ArrowId>> support_check(const FiniteGroupoid& g, const MeasureFamily& candidate) {
  std::vector<std::pair<ObjectId, ArrowId>> out;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    for (ArrowId a : g.range_fiber(x)) {
      const Rational w = x < candidate.fibers.size() ? candidate.fibers[x].weight(a) : Rational(0);
      if (w <= 0) out.emplace_back(x, a);
    }
  }
  return out;
}

/// On a principal groupoid the quotient arrow y -> x gets weight lambda(y).
/// Invariance forces weights to depend on the source only, so these are
/// all the Haar systems of a principal groupoid.
inline PrincipalHaar principal_haar_from_lambda(const PrincipalQuotient& q, std::span<const Rational> lambda) {
  const FiniteGroupoid& bar_g = q.quotient;
  if (lambda.size() != bar_g.object_count()) throw std::invalid_argument("need one lambda value per object");
  for (std::size_t y = 0; y < lambda.size(); ++y) {
    if (lambda[y] <= 0) {
      throw std::invalid_argument("lambda must be positive, got " + lambda[y].get_str() + " at object " +
                                  std::to_string(y));
    }
  }
  PrincipalHaar out{bar_g, {}};
  out.system.fibers.resize(bar_g.object_count());
  for (const Arrow& c : bar_g.arrows()) out.system.fibers[c.dst].weights[c.id] = lambda[c.src];
  return out;
}

class SynthesisError : public std::invalid_argument {
 public:
  SynthesisError(const std::string& what, CoherenceReport coherence, HaarReport quotient_haar)
      : std::invalid_argument(what), coherence_(std::move(coherence)), quotient_haar_(std::move(quotient_haar)) {}
  const CoherenceReport& coherence() const { return coherence_; }
  const HaarReport& quotient_haar() const { return quotient_haar_; }

 private:
  CoherenceReport coherence_;
  HaarReport quotient_haar_;
};

/// Lifts a Haar system m on the principal quotient to G using isotropy Haar
/// measures nu:
///   mu^x(k) = m^x([k]) * nu_{s(k)}(rep([k])^-1 k)
/// with rep([k]) = representatives[[k]], any member of the class. The
/// defining integral form is mu^x(phi) = sum over classes c in Gbar^x of
/// m^x(c) phi-bar(c).
inline HaarSystem synthesize_haar(const FiniteGroupoid& g, const CoherentSystem& nu, const PrincipalHaar& m,
                                  std::span<const ArrowId> representatives) {
  const IsotropyBundle iso = stability_groupoid(g);
  const PrincipalQuotient q = quotient_principal(g);
  CoherenceReport coherence = verify_coherent(nu, iso);
  if (!coherence.ok()) throw SynthesisError("isotropy measures are not a coherent Haar system", coherence, {});
  if (!(m.quotient == q.quotient)) {
    throw SynthesisError("supplied quotient does not match the computed principal quotient", coherence, {});
  }
  HaarReport quotient_report = verify_haar(q.quotient, m.system);
  if (!quotient_report.ok()) throw SynthesisError("quotient measures are not a Haar system", coherence, quotient_report);
  if (representatives.size() != q.representative.size()) throw std::invalid_argument("need one representative per class");
  for (ArrowId c = 0; c < representatives.size(); ++c) {
    if (representatives[c] >= g.arrow_count() || q.class_of[representatives[c]] != c) {
      throw std::invalid_argument("representative " + std::to_string(representatives[c]) + " is not in class " +
                                  std::to_string(c));
    }
  }

  HaarSystem out;
  out.fibers.resize(g.object_count());
  for (const Arrow& k : g.arrows()) {
    const ArrowId c = q.class_of[k.id];
    const ArrowId translator = g.compose(g.inverse(representatives[c]), k.id);
    out.fibers[k.dst].weights[k.id] = m.system.fibers[k.dst].weight(c) * nu.fibers[k.src].weight(translator);
  }
  return out;
}

inline HaarSystem synthesize_haar(const FiniteGroupoid& g, const CoherentSystem& nu, const PrincipalHaar& m) {
  const PrincipalQuotient q = quotient_principal(g);
  return synthesize_haar(g, nu, m, q.representative);
}

/// mu^x(phi) computed through phi-bar, for cross-checking the per-arrow
/// formula.
inline Rational synthesized_integral(const FiniteGroupoid& g, const CoherentSystem& nu, const PrincipalHaar& m,
                                     const PrincipalQuotient& q, ObjectId x, const ArrowFunction& phi) {
  const auto phibar = bar(phi, nu, g, q);
  Rational sum = 0;
  for (ArrowId c : q.quotient.range_fiber(x)) sum += m.system.fibers[x].weight(c) * phibar[c];
  return sum;
}

/// All weight families satisfying the invariance condition (b), found by
/// solving the linear system w(alpha g) = w(g) over every composable pair.
struct InvariantSystems {
  std::size_t equation_count = 0;
  std::size_t dimension = 0;
  /// Basis of the solution space, each vector indexed by arrow id.
  std::vector<std::vector<Rational>> basis;
  /// Whether each basis vector is itself strictly positive.
  std::vector<bool> strictly_positive;
  /// Whether the span contains a strictly positive family, i.e. a Haar
  /// system. The all-positive combination of a nonnegative basis is
  /// checked.
  bool admits_haar_system = false;
};

inline InvariantSystems enumerate_invariant_systems(const FiniteGroupoid& g) {
  InvariantSystems out;
  const std::size_t n = g.arrow_count();
  RationalMatrix equations;
  for (const Arrow& alpha : g.arrows()) {
    for (ArrowId k : g.range_fiber(alpha.src)) {
      const ArrowId ak = g.compose(alpha.id, k);
      if (ak == k) continue;
      std::vector<Rational> row(n);
      row[ak] += 1;
      row[k] -= 1;
      equations.append_row(row);
      ++out.equation_count;
    }
  }
  if (equations.rows() == 0) {
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<Rational> e(n);
      e[i] = 1;
      out.basis.push_back(std::move(e));
    }
  } else {
    out.basis = nullspace(std::move(equations));
  }
  out.dimension = out.basis.size();
  std::vector<Rational> combined(n);
  bool nonnegative = true;
  for (const auto& v : out.basis) {
    bool positive = true;
    for (std::size_t i = 0; i < n; ++i) {
      positive = positive && v[i] > 0;
      nonnegative = nonnegative && v[i] >= 0;
      combined[i] += v[i];
    }
    out.strictly_positive.push_back(positive);
  }
  bool combined_positive = true;
  for (const auto& w : combined) combined_positive = combined_positive && w > 0;
  out.admits_haar_system = nonnegative && combined_positive;
  return out;
}

}  // namespace haarsys
