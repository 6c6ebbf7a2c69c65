#pragma once

#include <haarsys/group.hpp>
#include <haarsys/rational.hpp>

#include <algorithm>
#include <cstddef>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace haarsys {

// ---------------------------------------------------------------------------
// Exact piecewise polynomials on [0, 1]

/// Polynomial with rational coefficients, lowest degree first, no trailing
/// zeros.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial constant(const Rational& c) { return Polynomial({c}); }

  /// The line through (x0, y0) and (x1, y1), x0 != x1.
  static Polynomial through(const Rational& x0, const Rational& y0, const Rational& x1, const Rational& y1) {
    const Rational slope = (y1 - y0) / (x1 - x0);
    return Polynomial({y0 - slope * x0, slope});
  }

  const std::vector<Rational>& coeffs() const { return coeffs_; }
  bool is_zero() const { return coeffs_.empty(); }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }

  Rational operator()(const Rational& x) const {
    Rational acc = 0;
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b) {
    std::vector<Rational> c(std::max(a.coeffs_.size(), b.coeffs_.size()));
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) c[i] += a.coeffs_[i];
    for (std::size_t i = 0; i < b.coeffs_.size(); ++i) c[i] += b.coeffs_[i];
    return Polynomial(std::move(c));
  }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<Rational> c(a.coeffs_.size() + b.coeffs_.size() - 1);
    for (std::size_t i = 0; i < a.coeffs_.size(); ++i) {
      for (std::size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] += a.coeffs_[i] * b.coeffs_[j];
    }
    return Polynomial(std::move(c));
  }

  bool operator==(const Polynomial&) const = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
  }
  std::vector<Rational> coeffs_;
};

/// Function on [0, 1] given by polynomial pieces on the open intervals
/// between breakpoints and explicit values at the breakpoints, so one-sided
/// limits and point values are all exact and may disagree.
struct PiecewiseValue {
  /// 0 = t_0 < t_1 < ... < t_m = 1.
  std::vector<Rational> breakpoints;
  /// pieces[i] applies on (t_i, t_{i+1}).
  std::vector<Polynomial> pieces;
  /// Value at each breakpoint.
  std::vector<Rational> values;

  std::size_t size() const { return breakpoints.size(); }
  Rational left_limit(std::size_t i) const { return pieces.at(i - 1)(breakpoints[i]); }
  Rational right_limit(std::size_t i) const { return pieces.at(i)(breakpoints[i]); }

  Rational operator()(const Rational& x) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    if (it == breakpoints.end() || (it == breakpoints.begin() && *it != x)) {
      throw std::out_of_range("point " + x.get_str() + " lies outside [0, 1]");
    }
    const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    if (*it == x) return values[i];
    return pieces[i - 1](x);
  }

  static PiecewiseValue constant(const Rational& c) {
    return {{Rational(0), Rational(1)}, {Polynomial::constant(c)}, {c, c}};
  }

  /// Same function with extra breakpoints inserted (values there are taken
  /// from the surrounding piece). `extra` may overlap existing breakpoints.
  PiecewiseValue refined(const std::vector<Rational>& extra) const {
    std::set<Rational> all(breakpoints.begin(), breakpoints.end());
    for (const auto& x : extra) {
      if (x < 0 || x > 1) throw std::out_of_range("breakpoint outside [0, 1]");
      all.insert(x);
    }
    PiecewiseValue out;
    out.breakpoints.assign(all.begin(), all.end());
    for (std::size_t i = 0; i < out.breakpoints.size(); ++i) {
      const Rational& t = out.breakpoints[i];
      out.values.push_back((*this)(t));
      if (i + 1 < out.breakpoints.size()) {
        const Rational mid = (t + out.breakpoints[i + 1]) / 2;
        auto up = std::upper_bound(breakpoints.begin(), breakpoints.end(), mid);
        out.pieces.push_back(pieces[static_cast<std::size_t>(up - breakpoints.begin()) - 1]);
      }
    }
    return out;
  }

  bool operator==(const PiecewiseValue&) const = default;
};

/// Structural problems with a piecewise representation, empty if sound.
inline std::vector<std::string> check_piecewise(const PiecewiseValue& v) {
  std::vector<std::string> out;
  if (v.breakpoints.size() < 2) out.push_back("needs at least the breakpoints 0 and 1");
  else {
    if (v.breakpoints.front() != 0 || v.breakpoints.back() != 1) out.push_back("breakpoints must start at 0 and end at 1");
    for (std::size_t i = 1; i < v.breakpoints.size(); ++i) {
      if (v.breakpoints[i - 1] >= v.breakpoints[i]) out.push_back("breakpoints must increase strictly");
    }
  }
  if (v.values.size() != v.breakpoints.size()) out.push_back("needs one value per breakpoint");
  if (v.pieces.size() + 1 != v.breakpoints.size()) out.push_back("needs one piece per interval");
  return out;
}

inline std::vector<Rational> merged_breakpoints(const std::vector<const PiecewiseValue*>& parts,
                                                const std::vector<Rational>& extra = {}) {
  std::set<Rational> all(extra.begin(), extra.end());
  for (const auto* p : parts) all.insert(p->breakpoints.begin(), p->breakpoints.end());
  return {all.begin(), all.end()};
}

inline PiecewiseValue operator+(const PiecewiseValue& a, const PiecewiseValue& b) {
  const auto common = merged_breakpoints({&a, &b});
  const auto ra = a.refined(common), rb = b.refined(common);
  PiecewiseValue out{common, {}, {}};
  for (std::size_t i = 0; i < common.size(); ++i) {
    out.values.push_back(ra.values[i] + rb.values[i]);
    if (i + 1 < common.size()) out.pieces.push_back(ra.pieces[i] + rb.pieces[i]);
  }
  return out;
}

inline PiecewiseValue operator*(const PiecewiseValue& a, const PiecewiseValue& b) {
  const auto common = merged_breakpoints({&a, &b});
  const auto ra = a.refined(common), rb = b.refined(common);
  PiecewiseValue out{common, {}, {}};
  for (std::size_t i = 0; i < common.size(); ++i) {
    out.values.push_back(ra.values[i] * rb.values[i]);
    if (i + 1 < common.size()) out.pieces.push_back(ra.pieces[i] * rb.pieces[i]);
  }
  return out;
}

/// A point of a piecewise-linear graph. Knots sharing an x describe a jump:
/// inside (0, 1) three knots give left limit, value, right limit; at 0 two
/// knots give value, right limit; at 1 two knots give left limit, value.
struct Knot {
  Rational x;
  Rational y;

  bool operator==(const Knot&) const = default;
};

inline PiecewiseValue from_knots(const std::vector<Knot>& knots) {
  if (knots.empty()) return PiecewiseValue::constant(0);
  if (knots.front().x != 0 || knots.back().x != 1) throw std::invalid_argument("knots must start at x=0 and end at x=1");
  struct Group {
    Rational x, left, value, right;
  };
  std::vector<Group> groups;
  for (std::size_t i = 0; i < knots.size();) {
    std::size_t j = i;
    while (j < knots.size() && knots[j].x == knots[i].x) ++j;
    const std::size_t count = j - i;
    const Rational& x = knots[i].x;
    if (!groups.empty() && groups.back().x >= x) throw std::invalid_argument("knot x values must not decrease");
    Group g{x, knots[i].y, knots[i].y, knots[i].y};
    const bool at_start = x == 0, at_end = x == 1;
    if (count == 1) {
    } else if (count == 2 && at_start) {
      g.right = knots[i + 1].y;
    } else if (count == 2 && at_end) {
      g.value = g.right = knots[i + 1].y;
    } else if (count == 3 && !at_start && !at_end) {
      g.value = knots[i + 1].y;
      g.right = knots[i + 2].y;
    } else {
      throw std::invalid_argument("too many knots at x = " + x.get_str());
    }
    groups.push_back(g);
    i = j;
  }
  if (groups.size() < 2) throw std::invalid_argument("knots must span [0, 1]");
  PiecewiseValue out;
  for (std::size_t i = 0; i < groups.size(); ++i) {
    out.breakpoints.push_back(groups[i].x);
    out.values.push_back(groups[i].value);
    if (i + 1 < groups.size()) {
      out.pieces.push_back(Polynomial::through(groups[i].x, groups[i].right, groups[i + 1].x, groups[i + 1].left));
    }
  }
  return out;
}

/// Inverse of from_knots for functions whose pieces are at most linear.
inline std::vector<Knot> to_knots(const PiecewiseValue& v) {
  std::vector<Knot> out;
  const std::size_t m = v.size();
  for (std::size_t i = 0; i < m; ++i) {
    if (i < v.pieces.size() && v.pieces[i].degree() > 1) throw std::invalid_argument("piece is not linear");
    const Rational& x = v.breakpoints[i];
    const Rational& value = v.values[i];
    if (i == 0) {
      out.push_back({x, value});
      if (v.right_limit(0) != value) out.push_back({x, v.right_limit(0)});
    } else if (i + 1 == m) {
      if (v.left_limit(i) != value) out.push_back({x, v.left_limit(i)});
      out.push_back({x, value});
    } else if (v.left_limit(i) == value && v.right_limit(i) == value) {
      out.push_back({x, value});
    } else {
      out.push_back({x, v.left_limit(i)});
      out.push_back({x, value});
      out.push_back({x, v.right_limit(i)});
    }
  }
  return out;
}

struct Discontinuity {
  Rational x;
  std::optional<Rational> left;
  Rational value;
  std::optional<Rational> right;
  /// Spread between the largest and smallest of the available quantities.
  Rational discrepancy;
};

/// Every breakpoint where the value and the one-sided limits are not all
/// equal. Inside a piece a polynomial is continuous, so nothing else can
/// fail.
inline std::vector<Discontinuity> verify_continuity(const PiecewiseValue& v) {
  std::vector<Discontinuity> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    Discontinuity d{v.breakpoints[i], std::nullopt, v.values[i], std::nullopt, 0};
    Rational lo = d.value, hi = d.value;
    if (i > 0) {
      d.left = v.left_limit(i);
      lo = std::min(lo, *d.left);
      hi = std::max(hi, *d.left);
    }
    if (i + 1 < v.size()) {
      d.right = v.right_limit(i);
      lo = std::min(lo, *d.right);
      hi = std::max(hi, *d.right);
    }
    if (lo != hi) {
      d.discrepancy = hi - lo;
      out.push_back(std::move(d));
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Step subgroup bundles

/// Bundle of groups over [0, 1] whose fibers are subgroups of one ambient
/// group F: pieces[i] on the open interval (b_i, b_{i+1}) and points[j]
/// at b_j. The total space {(x, g) : g in G_x} carries the subspace
/// topology of [0, 1] x F with F discrete.
struct StepSubgroupBundle {
  FiniteGroup ambient;
  std::vector<Rational> breakpoints;
  std::vector<std::vector<Element>> pieces;
  std::vector<std::vector<Element>> points;

  std::size_t piece_count() const { return pieces.size(); }

  static bool has(const std::vector<Element>& set, Element g) { return std::find(set.begin(), set.end(), g) != set.end(); }

  /// G_x.
  const std::vector<Element>& fiber_at(const Rational& x) const {
    auto it = std::lower_bound(breakpoints.begin(), breakpoints.end(), x);
    if (it == breakpoints.end() || (it == breakpoints.begin() && *it != x)) {
      throw std::out_of_range("point " + x.get_str() + " lies outside [0, 1]");
    }
    const std::size_t i = static_cast<std::size_t>(it - breakpoints.begin());
    return *it == x ? points[i] : pieces[i - 1];
  }

  /// Fiber over the open interval (a, b), which must lie inside one piece.
  const std::vector<Element>& fiber_between(const Rational& a, const Rational& b) const {
    return fiber_at((a + b) / 2);
  }

  bool operator==(const StepSubgroupBundle&) const = default;
};

struct BundleIssue {
  std::string rule;
  /// Piece or breakpoint index the issue refers to, when there is one.
  std::optional<std::size_t> index;
  std::vector<Element> witness;
  std::string detail;
};

inline std::vector<BundleIssue> validate_bundle(const StepSubgroupBundle& b) {
  std::vector<BundleIssue> out;
  const auto& bp = b.breakpoints;
  if (bp.size() < 2 || bp.front() != 0 || bp.back() != 1) {
    out.push_back({"breakpoint-range", std::nullopt, {}, "breakpoints must start at 0 and end at 1"});
  }
  for (std::size_t i = 1; i < bp.size(); ++i) {
    if (bp[i - 1] >= bp[i]) out.push_back({"breakpoint-order", i, {}, "breakpoints must increase strictly"});
  }
  if (b.pieces.size() + 1 != bp.size() || b.points.size() != bp.size()) {
    out.push_back({"shape", std::nullopt, {}, "need one piece per interval and one point group per breakpoint"});
  }
  auto check = [&](const std::vector<Element>& set, const char* what, std::size_t index) {
    auto defect = check_subgroup(b.ambient, set);
    if (!defect) return;
    static const char* names[] = {"element-range", "duplicate-element", "missing-identity", "not-closed",
                                  "missing-inverse"};
    out.push_back({names[static_cast<int>(defect->kind)], index, defect->witness,
                   std::string(what) + " " + std::to_string(index) + " is not a subgroup"});
  };
  for (std::size_t i = 0; i < b.pieces.size(); ++i) check(b.pieces[i], "piece", i);
  for (std::size_t j = 0; j < b.points.size(); ++j) check(b.points[j], "point group", j);
  return out;
}

enum class Side { left, right };

struct OpennessWitness {
  std::size_t breakpoint = 0;
  Rational x;
  Element element = 0;
  /// The neighboring piece that lacks the element.
  Side missing_on = Side::left;
};

struct OpennessVerdict {
  bool open = true;
  std::vector<OpennessWitness> witnesses;
};

/// pi is open iff {x : g in G_x} is open for every g in F. Open pieces are
/// open already, so the test is at breakpoints: each g in points[j] must
/// lie in both neighboring pieces (the existing one at 0 and 1).
inline OpennessVerdict is_open_projection(const StepSubgroupBundle& b) {
  OpennessVerdict verdict;
  for (std::size_t j = 0; j < b.points.size(); ++j) {
    for (Element g : b.points[j]) {
      if (j > 0 && !StepSubgroupBundle::has(b.pieces[j - 1], g)) {
        verdict.witnesses.push_back({j, b.breakpoints[j], g, Side::left});
      }
      if (j < b.pieces.size() && !StepSubgroupBundle::has(b.pieces[j], g)) {
        verdict.witnesses.push_back({j, b.breakpoints[j], g, Side::right});
      }
    }
  }
  verdict.open = verdict.witnesses.empty();
  return verdict;
}

/// Test function on the total space: one piecewise function per element of
/// the ambient group, read only where (x, g) lies in the bundle.
struct SheetFunction {
  std::vector<PiecewiseValue> sheets;

  bool operator==(const SheetFunction&) const = default;
};

inline SheetFunction zero_sheet_function(const StepSubgroupBundle& b) {
  return {std::vector<PiecewiseValue>(b.ambient.order(), PiecewiseValue::constant(0))};
}

/// A family of Haar measures mu_x = scale(x) * counting measure on G_x.
struct CoherentFamily {
  PiecewiseValue scale;
};

struct AdmissibilityViolation {
  enum class Kind { sheet_count, malformed_sheet, continuity, terminal_segment };
  Kind kind;
  Element element = 0;
  Rational x;
  std::optional<Side> side;
  std::string detail;
};

/// Checks that phi is continuous with compact support on the total space:
///  - continuity: wherever (x, g) is in G, each one-sided limit along a
///    side where the sheet continues equals the value at x;
///  - compact support: where the sheet of g runs up to a point x with
///    g not in G_x, phi must vanish identically on the last piece before x.
inline std::vector<AdmissibilityViolation> check_admissible(const StepSubgroupBundle& b, const SheetFunction& phi) {
  using K = AdmissibilityViolation::Kind;
  std::vector<AdmissibilityViolation> out;
  if (phi.sheets.size() != b.ambient.order()) {
    out.push_back({K::sheet_count, 0, 0, std::nullopt, "need one sheet per ambient element"});
    return out;
  }
  for (Element g = 0; g < phi.sheets.size(); ++g) {
    if (auto issues = check_piecewise(phi.sheets[g]); !issues.empty()) {
      out.push_back({K::malformed_sheet, g, 0, std::nullopt, issues.front()});
      continue;
    }
    const PiecewiseValue f = phi.sheets[g].refined(b.breakpoints);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const Rational& t = f.breakpoints[i];
      const bool here = StepSubgroupBundle::has(b.fiber_at(t), g);
      const bool left = i > 0 && StepSubgroupBundle::has(b.fiber_between(f.breakpoints[i - 1], t), g);
      const bool right = i + 1 < f.size() && StepSubgroupBundle::has(b.fiber_between(t, f.breakpoints[i + 1]), g);
      if (here) {
        if (left && f.left_limit(i) != f.values[i]) {
          out.push_back({K::continuity, g, t, Side::left, "left limit differs from the value"});
        }
        if (right && f.right_limit(i) != f.values[i]) {
          out.push_back({K::continuity, g, t, Side::right, "right limit differs from the value"});
        }
      } else {
        if (left && !f.pieces[i - 1].is_zero()) {
          out.push_back({K::terminal_segment, g, t, Side::left, "sheet leaves the bundle here but is not zero before"});
        }
        if (right && !f.pieces[i].is_zero()) {
          out.push_back({K::terminal_segment, g, t, Side::right, "sheet enters the bundle here but is not zero after"});
        }
      }
    }
  }
  return out;
}

class AdmissibilityError : public std::invalid_argument {
 public:
  explicit AdmissibilityError(std::vector<AdmissibilityViolation> v)
      : std::invalid_argument("test function is not admissible: " + v.front().detail), violations_(std::move(v)) {}
  const std::vector<AdmissibilityViolation>& violations() const { return violations_; }

 private:
  std::vector<AdmissibilityViolation> violations_;
};

/// x -> integral of phi over G_x against scale(x) * counting measure, as
/// an exact piecewise function (quadratic pieces in general).
inline PiecewiseValue evaluate_family(const StepSubgroupBundle& b, const CoherentFamily& family,
                                      const SheetFunction& phi) {
  if (auto v = check_admissible(b, phi); !v.empty()) throw AdmissibilityError(std::move(v));
  if (auto issues = check_piecewise(family.scale); !issues.empty()) {
    throw std::invalid_argument("scale function: " + issues.front());
  }
  std::vector<const PiecewiseValue*> parts{&family.scale};
  for (const auto& s : phi.sheets) parts.push_back(&s);
  const auto common = merged_breakpoints(parts, b.breakpoints);
  const auto scale = family.scale.refined(common);
  std::vector<PiecewiseValue> sheets;
  for (const auto& s : phi.sheets) sheets.push_back(s.refined(common));

  PiecewiseValue out{common, {}, {}};
  for (std::size_t i = 0; i < common.size(); ++i) {
    Rational value = 0;
    for (Element g : b.fiber_at(common[i])) value += sheets[g].values[i];
    out.values.push_back(scale.values[i] * value);
    if (i + 1 < common.size()) {
      Polynomial sum;
      for (Element g : b.fiber_between(common[i], common[i + 1])) sum = sum + sheets[g].pieces[i];
      out.pieces.push_back(scale.pieces[i] * sum);
    }
  }
  return out;
}

struct ExistenceVerdict {
  bool exists = true;
  /// When no coherent system exists: an admissible test function whose
  /// integral jumps for every positive family of Haar measures.
  std::optional<SheetFunction> witness;
  Rational jump_at;
  Element element = 0;
  Rational discrepancy;
};

/// Tent on the sheet of g: 1 at breakpoint j, falling linearly to 0 at the
/// midpoints of the neighboring pieces, 0 elsewhere. Always admissible.
inline SheetFunction tent_function(const StepSubgroupBundle& b, std::size_t j, Element g) {
  SheetFunction phi = zero_sheet_function(b);
  std::vector<Knot> knots;
  const auto& bp = b.breakpoints;
  for (std::size_t i = 0; i < bp.size(); ++i) {
    knots.push_back({bp[i], i == j ? Rational(1) : Rational(0)});
    if (i + 1 < bp.size()) knots.push_back({(bp[i] + bp[i + 1]) / 2, 0});
  }
  phi.sheets[g] = from_knots(knots);
  return phi;
}

/// Decides existence of a coherent system by searching for a jump: the
/// tent at every (breakpoint, point-group element) is integrated against
/// the unit family. A jump under the unit family is a jump under every
/// positive family, since near the breakpoint only the sheet of g carries
/// mass; conversely with no jump anywhere every sheet set is open.
inline ExistenceVerdict coherent_exists(const StepSubgroupBundle& b) {
  ExistenceVerdict verdict;
  const CoherentFamily unit{PiecewiseValue::constant(1)};
  for (std::size_t j = 0; j < b.points.size(); ++j) {
    for (Element g : b.points[j]) {
      SheetFunction phi = tent_function(b, j, g);
      const auto jumps = verify_continuity(evaluate_family(b, unit, phi));
      if (jumps.empty()) continue;
      verdict.exists = false;
      verdict.witness = std::move(phi);
      verdict.jump_at = jumps.front().x;
      verdict.element = g;
      verdict.discrepancy = jumps.front().discrepancy;
      return verdict;
    }
  }
  return verdict;
}

class NotOpenError : public std::invalid_argument {
 public:
  explicit NotOpenError(ExistenceVerdict verdict)
      : std::invalid_argument("bundle projection is not open; no coherent system exists (jump at " +
                              verdict.jump_at.get_str() + ")"),
        verdict_(std::move(verdict)) {}
  const ExistenceVerdict& verdict() const { return verdict_; }

 private:
  ExistenceVerdict verdict_;
};

/// mu_x = scale(x) * counting measure on G_x. The scale must be piecewise
/// linear, continuous and positive on [0, 1].
inline CoherentFamily build_coherent(const StepSubgroupBundle& b, const PiecewiseValue& scale) {
  if (auto issues = check_piecewise(scale); !issues.empty()) throw std::invalid_argument("scale: " + issues.front());
  for (const auto& p : scale.pieces) {
    if (p.degree() > 1) throw std::invalid_argument("scale must be piecewise linear");
  }
  if (!verify_continuity(scale).empty()) throw std::invalid_argument("scale must be continuous");
  // Linear pieces attain their minimum at an endpoint.
  for (const auto& v : scale.values) {
    if (v <= 0) throw std::invalid_argument("scale must be positive, got " + v.get_str());
  }
  if (!is_open_projection(b).open) throw NotOpenError(coherent_exists(b));
  return CoherentFamily{scale};
}

}  // namespace haarsys
