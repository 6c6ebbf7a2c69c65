#pragma once

#include <haarsys/groupoid.hpp>
#include <haarsys/haar.hpp>
#include <haarsys/measures.hpp>
#include <haarsys/rational.hpp>

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace haarsys {

using GroupoidFunction = ArrowFunction;

namespace detail {

inline GroupoidFunction convolve_unchecked(const GroupoidFunction& f, const GroupoidFunction& h, const FiniteGroupoid& g,
                                           const MeasureFamily& mu) {
  GroupoidFunction out(g.arrow_count());
  for (const Arrow& gamma : g.arrows()) {
    const FiberMeasure& m = mu.fibers.at(gamma.src);
    Rational sum = 0;
    for (ArrowId eta : g.range_fiber(gamma.src)) {
      const Rational w = m.weight(eta);
      if (w == 0) continue;
      sum += f[g.compose(gamma.id, eta)] * h[g.inverse(eta)] * w;
    }
    out[gamma.id] = sum;
  }
  return out;
}

}  // namespace detail

/// (f*h)(gamma) = sum over eta in G^{s(gamma)} of f(gamma eta) h(eta^-1) mu^{s(gamma)}(eta).
/// Only Haar systems are accepted; without invariance the product is not
/// associative.
inline GroupoidFunction convolve(const GroupoidFunction& f, const GroupoidFunction& h, const FiniteGroupoid& g,
                                 const MeasureFamily& mu) {
  if (f.size() != g.arrow_count() || h.size() != g.arrow_count()) {
    throw std::invalid_argument("functions must have one value per arrow");
  }
  if (!verify_haar(g, mu).ok()) throw std::invalid_argument("convolution needs a Haar system");
  return detail::convolve_unchecked(f, h, g, mu);
}

/// f*(gamma) = f(gamma^-1).
inline GroupoidFunction involution(const GroupoidFunction& f, const FiniteGroupoid& g) {
  GroupoidFunction out(f.size());
  for (ArrowId a = 0; a < f.size(); ++a) out[a] = f[g.inverse(a)];
  return out;
}

/// The unit for convolution: 1 / mu^x(1_x) on each identity arrow 1_x.
inline GroupoidFunction unit_function(const FiniteGroupoid& g, const MeasureFamily& mu) {
  GroupoidFunction out(g.arrow_count());
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const Rational w = mu.fibers.at(x).weight(g.identity(x));
    if (w == 0) throw std::invalid_argument("identity arrow has zero weight");
    out[g.identity(x)] = 1 / w;
  }
  return out;
}

struct AssociativityMismatch {
  ArrowId arrow;
  Rational left;   // ((f*g)*h)(arrow)
  Rational right;  // (f*(g*h))(arrow)
};

struct AssociativityReport {
  /// Whether mu passed verify_haar; the comparison runs either way.
  bool system_is_haar = false;
  std::vector<AssociativityMismatch> mismatches;

  bool ok() const { return mismatches.empty(); }
};

/// Compares (f*g)*h with f*(g*h) exactly. Unlike convolve this also runs
/// on families that are not Haar systems, to exhibit the failure.
inline AssociativityReport check_associativity(const GroupoidFunction& f, const GroupoidFunction& g_fn,
                                               const GroupoidFunction& h, const FiniteGroupoid& g,
                                               const MeasureFamily& mu) {
  AssociativityReport report;
  report.system_is_haar = verify_haar(g, mu).ok();
  const auto left = detail::convolve_unchecked(detail::convolve_unchecked(f, g_fn, g, mu), h, g, mu);
  const auto right = detail::convolve_unchecked(f, detail::convolve_unchecked(g_fn, h, g, mu), g, mu);
  for (ArrowId a = 0; a < g.arrow_count(); ++a) {
    if (left[a] != right[a]) report.mismatches.push_back({a, left[a], right[a]});
  }
  return report;
}

}  // namespace haarsys
