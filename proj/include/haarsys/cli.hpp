#pragma once

#include <haarsys/convolution.hpp>
#include <haarsys/decompose.hpp>
#include <haarsys/fixtures.hpp>
#include <haarsys/generators.hpp>
#include <haarsys/groupoid.hpp>
#include <haarsys/haar.hpp>
#include <haarsys/io.hpp>
#include <haarsys/measures.hpp>
#include <haarsys/stepbundle.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

namespace haarsys {

/// Exit statuses of run_command.
enum ExitStatus : int { exit_pass = 0, exit_violation = 1, exit_input_error = 2 };

class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct LoadedInput {
  std::string label;
  Manifest manifest;
};

/// Resolves an input reference: "example:NAME", a file path, or the bare
/// name of a built-in example when no such file exists.
inline LoadedInput load_input(const std::string& ref) {
  if (ref.rfind("example:", 0) == 0) {
    const std::string name = ref.substr(8);
    if (auto m = find_example(name)) return {name, *m};
    throw InputError("unknown example \"" + name + "\"");
  }
  if (std::filesystem::is_regular_file(ref)) {
    std::ifstream in(ref, std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    Manifest m = parse_manifest(text.str());
    std::string label = m.name.empty() ? std::filesystem::path(ref).filename().string() : m.name;
    return {label, std::move(m)};
  }
  if (auto m = find_example(ref)) return {ref, *m};
  throw InputError("no such file or built-in example: " + ref);
}

inline const Manifest& expect_kind(const LoadedInput& in, ManifestKind kind) {
  if (in.manifest.kind != kind) {
    throw InputError(in.label + " is a " + std::string(kind_name(in.manifest.kind)) + ", expected a " +
                     std::string(kind_name(kind)));
  }
  return in.manifest;
}

/// A report in both forms: human-readable lines and a structured object.
struct Report {
  std::vector<std::string> lines;
  json data = json::object();
  int status = exit_pass;
};

namespace detail {

/// HAARSYS_VERBOSE set to anything but "0" lifts the cap on listed items.
inline bool verbose() {
  const char* v = std::getenv("HAARSYS_VERBOSE");
  return v != nullptr && std::string(v) != "0" && std::string(v) != "";
}

inline void list_items(Report& r, const std::vector<std::string>& items) {
  const std::size_t shown = verbose() ? items.size() : std::min<std::size_t>(items.size(), 10);
  for (std::size_t i = 0; i < shown; ++i) r.lines.push_back("  " + items[i]);
  if (shown < items.size()) {
    r.lines.push_back("  ... " + std::to_string(items.size() - shown) + " more (HAARSYS_VERBOSE=1 lists all)");
  }
}

template <class T>
std::string joined(const std::vector<T>& items, const std::string& sep = ", ") {
  std::ostringstream out;
  for (std::size_t i = 0; i < items.size(); ++i) out << (i ? sep : "") << items[i];
  return out.str();
}

inline std::string sparse(const std::vector<Rational>& v) {
  std::vector<std::string> parts;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] != 0) parts.push_back(std::to_string(i) + ":" + v[i].get_str());
  }
  return parts.empty() ? "0" : joined(parts, " ");
}

inline std::string sparse(const FiberMeasure& mu) {
  std::vector<std::string> parts;
  for (const auto& [a, w] : mu.weights) parts.push_back(std::to_string(a) + ":" + w.get_str());
  return parts.empty() ? "0" : joined(parts, " ");
}

inline json rationals(const std::vector<Rational>& v) {
  json out = json::array();
  for (const auto& q : v) out.push_back(q.get_str());
  return out;
}

inline std::string arrow_text(const FiniteGroupoid& g, ArrowId a) {
  return std::to_string(a) + " (" + std::to_string(g.source(a)) + " -> " + std::to_string(g.range(a)) + ")";
}

inline std::string polynomial_text(const Polynomial& p) {
  if (p.is_zero()) return "0";
  std::string out;
  const auto& c = p.coeffs();
  for (std::size_t k = 0; k < c.size(); ++k) {
    if (c[k] == 0) continue;
    std::string term = k == 0 ? c[k].get_str() : (c[k] == 1 ? "" : c[k] == -1 ? "-" : c[k].get_str() + " ");
    if (k >= 1) term += k == 1 ? "x" : "x^" + std::to_string(k);
    out += out.empty() ? term : (term[0] == '-' ? " - " + term.substr(1) : " + " + term);
  }
  return out;
}

inline json violation_json(const Violation& v) { return {{"rule", v.rule}, {"witness", v.witness}, {"detail", v.detail}}; }

inline std::string violation_text(const Violation& v) {
  return v.rule + " [" + joined(v.witness) + "]: " + v.detail;
}

inline json haar_json(const FiniteGroupoid& g, const HaarReport& h) {
  json support = json::array(), invariance = json::array(), domain = json::array();
  for (const auto& [x, a] : h.domain_errors) domain.push_back({{"x", x}, {"arrow", a}});
  for (const auto& [x, a] : h.support_violations) support.push_back({{"x", x}, {"arrow", a}});
  for (const auto& v : h.invariance_violations) {
    invariance.push_back({{"alpha", v.alpha},
                          {"g", v.g},
                          {"alpha_g", g.compose(v.alpha, v.g)},
                          {"translated", v.translated.get_str()},
                          {"original", v.original.get_str()}});
  }
  return {{"shape_mismatch", h.shape_mismatch},
          {"domain_errors", domain},
          {"support_violations", support},
          {"invariance_violations", invariance},
          {"continuity", "vacuous"},
          {"result", h.ok() ? "pass" : "fail"}};
}

inline void haar_lines(Report& r, const FiniteGroupoid& g, const HaarReport& h) {
  std::vector<std::string> items;
  for (const auto& [x, a] : h.support_violations) items.push_back("mu^" + std::to_string(x) + " vanishes on arrow " + arrow_text(g, a));
  r.lines.push_back("(a) support: " + (items.empty() ? std::string("ok") : std::to_string(items.size()) + " violation(s)"));
  list_items(r, items);
  items.clear();
  for (const auto& v : h.invariance_violations) {
    items.push_back("alpha " + arrow_text(g, v.alpha) + ", g " + arrow_text(g, v.g) + ": mu^" + std::to_string(g.range(v.alpha)) +
                    "(alpha g) = " + v.translated.get_str() + ", mu^" + std::to_string(g.source(v.alpha)) +
                    "(g) = " + v.original.get_str());
  }
  r.lines.push_back("(b) invariance: " + (items.empty() ? std::string("ok") : std::to_string(items.size()) + " violation(s)"));
  list_items(r, items);
  r.lines.push_back("(c) continuity: vacuous on a finite discrete space");
}

/// Reads a measure family for `g`; missing trailing objects get the zero
/// measure.
inline MeasureFamily family_for(const LoadedInput& in, const FiniteGroupoid& g) {
  const Manifest& m = expect_kind(in, ManifestKind::system);
  if (!m.payload.is_array()) throw InputError(in.label + " is a scale family, expected per-object weights");
  MeasureFamily family = read_family(m.payload, "/payload");
  if (family.fibers.size() > g.object_count()) {
    throw InputError(in.label + " has measures for " + std::to_string(family.fibers.size()) + " objects, the groupoid has " +
                     std::to_string(g.object_count()));
  }
  family.fibers.resize(g.object_count());
  const HaarReport shape = verify_haar(g, family);
  if (!shape.domain_errors.empty()) {
    const auto& [x, a] = shape.domain_errors.front();
    throw InputError(in.label + ": mu^" + std::to_string(x) + " puts weight on arrow " + std::to_string(a) +
                     ", which does not end at " + std::to_string(x));
  }
  return family;
}

inline FiniteGroupoid groupoid_from(const LoadedInput& in) {
  return read_groupoid(expect_kind(in, ManifestKind::groupoid).payload, "/payload");
}

inline StepSubgroupBundle bundle_from(const LoadedInput& in) {
  return read_bundle(expect_kind(in, ManifestKind::bundle).payload, "/payload");
}

// ---------------------------------------------------------------------------
// Commands

inline Report cmd_validate(const LoadedInput& in) {
  Report r;
  r.data["command"] = "validate";
  r.data["input"] = in.label;
  r.data["kind"] = kind_name(in.manifest.kind);
  if (in.manifest.kind == ManifestKind::groupoid) {
    const GroupoidTables t = read_groupoid_tables(in.manifest.payload, "/payload");
    const ValidationReport v = validate_groupoid(t);
    r.lines.push_back("validate " + in.label + ": groupoid with " + std::to_string(t.objects) + " objects and " +
                      std::to_string(t.arrows.size()) + " arrows");
    std::vector<std::string> items;
    json structural = json::array(), axioms = json::array();
    for (const auto& s : v.structural) {
      items.push_back(violation_text(s));
      structural.push_back(violation_json(s));
    }
    r.lines.push_back("structural issues: " + std::to_string(v.structural.size()));
    list_items(r, items);
    items.clear();
    for (const auto& a : v.axioms) {
      items.push_back(violation_text(a));
      axioms.push_back(violation_json(a));
    }
    r.lines.push_back("axiom violations: " + std::to_string(v.axioms.size()));
    list_items(r, items);
    r.data["objects"] = t.objects;
    r.data["arrows"] = t.arrows.size();
    r.data["structural"] = structural;
    r.data["axioms"] = axioms;
    r.status = v.ok() ? exit_pass : exit_violation;
  } else if (in.manifest.kind == ManifestKind::bundle) {
    const StepSubgroupBundle b = bundle_from(in);
    const auto issues = validate_bundle(b);
    r.lines.push_back("validate " + in.label + ": bundle in a group of order " + std::to_string(b.ambient.order()) +
                      " with breakpoints " + joined(b.breakpoints, " "));
    std::vector<std::string> items;
    json list = json::array();
    for (const auto& i : issues) {
      std::string where = i.index ? " " + std::to_string(*i.index) : "";
      items.push_back(i.rule + where + " [" + joined(i.witness) + "]: " + i.detail);
      list.push_back({{"rule", i.rule}, {"index", i.index ? json(*i.index) : json()}, {"witness", i.witness}, {"detail", i.detail}});
    }
    r.lines.push_back("issues: " + std::to_string(issues.size()));
    list_items(r, items);
    r.data["issues"] = list;
    r.status = issues.empty() ? exit_pass : exit_violation;
  } else {
    r.lines.push_back("validate " + in.label + ": " + std::string(kind_name(in.manifest.kind)) + " is well-formed");
  }
  r.data["result"] = r.status == exit_pass ? "valid" : "invalid";
  r.lines.push_back(std::string("result: ") + (r.status == exit_pass ? "valid" : "invalid"));
  return r;
}

inline Report cmd_decompose(const LoadedInput& in) {
  Report r;
  const FiniteGroupoid g = groupoid_from(in);
  r.data["command"] = "decompose";
  r.data["input"] = in.label;
  r.lines.push_back("decompose " + in.label + ": " + std::to_string(g.object_count()) + " objects, " +
                    std::to_string(g.arrow_count()) + " arrows");
  const ValidationReport v = validate_groupoid(g);
  if (!v.ok()) {
    json axioms = json::array();
    std::vector<std::string> items;
    for (const auto& a : v.axioms) {
      items.push_back(violation_text(a));
      axioms.push_back(violation_json(a));
    }
    r.lines.push_back("not a groupoid, axiom violations: " + std::to_string(v.axioms.size()));
    list_items(r, items);
    r.data["axioms"] = axioms;
    r.data["result"] = "invalid";
    r.status = exit_violation;
    return r;
  }

  const IsotropyBundle iso = stability_groupoid(g);
  json isotropy = json::array();
  std::vector<std::string> items;
  for (ObjectId x = 0; x < g.object_count(); ++x) {
    const std::string type = isomorphism_type(iso.groups[x]);
    items.push_back("object " + std::to_string(x) + ": " + type + " {" + joined(iso.fibers[x]) + "}");
    isotropy.push_back({{"object", x}, {"type", type}, {"order", iso.fibers[x].size()}, {"arrows", iso.fibers[x]}});
  }
  r.lines.push_back("isotropy groups:");
  list_items(r, items);

  const OrbitPartition orbits = orbit_partition(g);
  items.clear();
  for (const auto& c : orbits.classes) items.push_back("{" + joined(c) + "}");
  r.lines.push_back("orbits: " + std::to_string(orbits.classes.size()));
  list_items(r, items);

  const PrincipalQuotient q = quotient_principal(g);
  items.clear();
  for (ArrowId c = 0; c < q.representative.size(); ++c) {
    items.push_back("class " + arrow_text(q.quotient, c) + ": {" + joined(q.members(g, c)) + "}");
  }
  r.lines.push_back("principal quotient: " + std::to_string(q.quotient.object_count()) + " objects, " +
                    std::to_string(q.quotient.arrow_count()) + " classes");
  list_items(r, items);
  r.lines.push_back(std::string("composition of classes well-defined: ") + (q.well_defined ? "yes" : "no"));

  json orbit_json = json::array();
  for (const auto& c : orbits.classes) orbit_json.push_back(c);
  r.data["isotropy"] = isotropy;
  r.data["orbits"] = orbit_json;
  r.data["quotient"] = {{"objects", q.quotient.object_count()},
                        {"arrows", q.quotient.arrow_count()},
                        {"class_of", q.class_of},
                        {"representative", q.representative},
                        {"well_defined", q.well_defined}};
  r.status = q.well_defined ? exit_pass : exit_violation;
  r.data["result"] = q.well_defined ? "pass" : "fail";
  return r;
}

inline Report cmd_haar_verify(const LoadedInput& gin, const LoadedInput& sin) {
  Report r;
  const FiniteGroupoid g = groupoid_from(gin);
  const MeasureFamily mu = family_for(sin, g);
  const HaarReport h = verify_haar(g, mu);
  r.lines.push_back("haar verify " + gin.label + " with " + sin.label);
  haar_lines(r, g, h);
  r.lines.push_back(std::string("result: ") + (h.ok() ? "pass" : "fail"));
  r.data = haar_json(g, h);
  r.data["command"] = "haar verify";
  r.data["groupoid"] = gin.label;
  r.data["system"] = sin.label;
  r.status = h.ok() ? exit_pass : exit_violation;
  return r;
}

inline Rational parse_rational_arg(const std::string& text, const std::string& what) {
  const auto parsed = parse_rational(text);
  if (parsed.status != RationalSyntax::ok) throw InputError(what + ": \"" + text + "\" is not a normalized rational p/q");
  return parsed.value;
}

inline Report cmd_haar_synth(const LoadedInput& gin, const std::string& nu_ref, const std::string& lambda_ref,
                             const std::string& output) {
  Report r;
  const FiniteGroupoid g = groupoid_from(gin);
  const IsotropyBundle iso = stability_groupoid(g);
  const PrincipalQuotient q = quotient_principal(g);

  CoherentSystem nu;
  if (nu_ref.rfind("uniform:", 0) == 0) {
    const Rational scale = parse_rational_arg(nu_ref.substr(8), "--nu");
    if (scale <= 0) throw InputError("--nu: scale must be positive");
    nu = uniform_coherent_system(iso, scale);
  } else {
    nu.fibers = family_for(load_input(nu_ref), g).fibers;
  }

  std::vector<Rational> lambda;
  if (lambda_ref.rfind("const:", 0) == 0) {
    lambda.assign(g.object_count(), parse_rational_arg(lambda_ref.substr(6), "--lambda"));
  } else {
    const LoadedInput lin = load_input(lambda_ref);
    const Manifest& m = expect_kind(lin, ManifestKind::function);
    if (!m.payload.is_array()) throw InputError(lin.label + ": lambda must list [objectId, value] pairs");
    lambda = read_arrow_function(m.payload, "/payload", g.object_count());
  }

  r.data["command"] = "haar synth";
  r.data["groupoid"] = gin.label;
  r.data["nu"] = nu_ref;
  r.data["lambda"] = lambda_ref;
  r.lines.push_back("haar synth " + gin.label + " with nu " + nu_ref + " and lambda " + lambda_ref);

  const PrincipalHaar m = principal_haar_from_lambda(q, lambda);
  HaarSystem mu;
  try {
    mu = synthesize_haar(g, nu, m);
  } catch (const SynthesisError& e) {
    std::vector<std::string> items;
    json issues = json::array();
    static const char* kinds[] = {"missing fiber", "outside the isotropy group", "not positive", "not left invariant",
                                  "not right invariant"};
    for (const auto& i : e.coherence().issues) {
      const std::string kind = kinds[static_cast<int>(i.kind)];
      std::string text = "object " + std::to_string(i.object) + ": " + kind;
      if (i.arrow != npos) text += " at arrow " + std::to_string(i.arrow);
      if (i.translator != npos) text += " (translating by " + std::to_string(i.translator) + ")";
      items.push_back(text);
      issues.push_back({{"object", i.object},
                        {"kind", kind},
                        {"arrow", i.arrow == npos ? json() : json(i.arrow)},
                        {"translator", i.translator == npos ? json() : json(i.translator)}});
    }
    r.lines.push_back(std::string("synthesis refused: ") + e.what());
    list_items(r, items);
    r.lines.push_back("result: fail");
    r.data["coherence_issues"] = issues;
    r.data["result"] = "fail";
    r.status = exit_violation;
    return r;
  }

  const HaarReport h = verify_haar(g, mu);
  const Manifest system{ManifestKind::system, gin.label + "-haar", std::nullopt, write_family(mu.fibers)};
  r.lines.push_back("synthesized measures:");
  std::vector<std::string> items;
  for (ObjectId x = 0; x < g.object_count(); ++x) items.push_back("mu^" + std::to_string(x) + ": " + sparse(mu.fibers[x]));
  list_items(r, items);
  r.lines.push_back(std::string("verify: ") + (h.ok() ? "pass" : "fail"));
  haar_lines(r, g, h);
  if (!output.empty()) {
    std::ofstream file(output, std::ios::binary);
    if (!file) throw InputError("cannot write " + output);
    file << serialize(system);
    r.lines.push_back("wrote " + output);
  }
  r.lines.push_back(std::string("result: ") + (h.ok() ? "pass" : "fail"));
  r.data["system"] = manifest_to_json(system);
  r.data["verify"] = haar_json(g, h);
  r.data["result"] = h.ok() ? "pass" : "fail";
  r.status = h.ok() ? exit_pass : exit_violation;
  return r;
}

inline Report cmd_haar_enumerate(const LoadedInput& gin) {
  Report r;
  const FiniteGroupoid g = groupoid_from(gin);
  const InvariantSystems s = enumerate_invariant_systems(g);
  r.lines.push_back("haar enumerate " + gin.label + ": " + std::to_string(g.object_count()) + " objects, " +
                    std::to_string(g.arrow_count()) + " arrows");
  r.lines.push_back("invariance equations: " + std::to_string(s.equation_count));
  r.lines.push_back("solution dimension: " + std::to_string(s.dimension));
  std::vector<std::string> items;
  json basis = json::array();
  for (std::size_t i = 0; i < s.basis.size(); ++i) {
    items.push_back("v" + std::to_string(i) + ": " + sparse(s.basis[i]) +
                    (s.strictly_positive[i] ? " (strictly positive)" : ""));
    basis.push_back({{"weights", rationals(s.basis[i])}, {"strictly_positive", static_cast<bool>(s.strictly_positive[i])}});
  }
  list_items(r, items);
  r.lines.push_back(std::string("admits a Haar system: ") + (s.admits_haar_system ? "yes" : "no"));
  r.data = {{"command", "haar enumerate"},
            {"groupoid", gin.label},
            {"equations", s.equation_count},
            {"dimension", s.dimension},
            {"basis", basis},
            {"admits_haar_system", s.admits_haar_system}};
  r.status = s.admits_haar_system ? exit_pass : exit_violation;
  return r;
}

inline std::string side_name(Side s) { return s == Side::left ? "left" : "right"; }

inline Report cmd_bundle_check(const LoadedInput& bin) {
  Report r;
  const StepSubgroupBundle b = bundle_from(bin);
  r.data["command"] = "bundle check";
  r.data["bundle"] = bin.label;
  r.lines.push_back("bundle check " + bin.label + ": ambient group of order " + std::to_string(b.ambient.order()) +
                    ", breakpoints " + joined(b.breakpoints, " "));
  const auto issues = validate_bundle(b);
  if (!issues.empty()) {
    std::vector<std::string> items;
    json list = json::array();
    for (const auto& i : issues) {
      items.push_back(i.rule + " [" + joined(i.witness) + "]: " + i.detail);
      list.push_back({{"rule", i.rule}, {"witness", i.witness}, {"detail", i.detail}});
    }
    r.lines.push_back("not a bundle of subgroups, issues: " + std::to_string(issues.size()));
    list_items(r, items);
    r.data["issues"] = list;
    r.data["verdict"] = "invalid bundle";
    r.status = exit_violation;
    return r;
  }

  const OpennessVerdict open = is_open_projection(b);
  const ExistenceVerdict exists = coherent_exists(b);
  std::vector<std::string> items;
  json witnesses = json::array();
  for (const auto& w : open.witnesses) {
    items.push_back("element " + std::to_string(w.element) + " at " + w.x.get_str() + " is missing on the " +
                    side_name(w.missing_on));
    witnesses.push_back({{"breakpoint", w.breakpoint}, {"x", w.x.get_str()}, {"element", w.element}, {"missing_on", side_name(w.missing_on)}});
  }
  r.lines.push_back(std::string("open projection: ") + (open.open ? "yes" : "no"));
  list_items(r, items);
  r.lines.push_back(std::string("coherent system: ") + (exists.exists ? "exists" : "none"));
  r.data["open"] = open.open;
  r.data["openness_witnesses"] = witnesses;
  r.data["coherent_exists"] = exists.exists;

  std::string verdict = std::string(open.open ? "open" : "not open") + "; " +
                        (exists.exists ? "coherent system exists" : "no coherent system");
  if (!exists.exists) {
    r.lines.push_back("  integrals of this test function jump at " + exists.jump_at.get_str() + " for every positive family (by " +
                      exists.discrepancy.get_str() + " for the unit family):");
    for (Element g = 0; g < exists.witness->sheets.size(); ++g) {
      const auto& s = exists.witness->sheets[g];
      if (s == PiecewiseValue::constant(0)) continue;
      std::vector<std::string> pts;
      for (const auto& k : to_knots(s)) pts.push_back("(" + k.x.get_str() + ", " + k.y.get_str() + ")");
      r.lines.push_back("  sheet " + std::to_string(g) + ": " + joined(pts, " "));
    }
    r.data["jump"] = {{"x", exists.jump_at.get_str()}, {"element", exists.element}, {"discrepancy", exists.discrepancy.get_str()}};
    r.data["witness_function"] = write_sheet_function(*exists.witness);
    verdict += "; witness at " + exists.jump_at.get_str();
  } else if (!open.witnesses.empty()) {
    verdict += "; witness at " + open.witnesses.front().x.get_str();
  }
  r.lines.push_back(verdict);
  r.data["verdict"] = verdict;
  r.status = open.open && exists.exists ? exit_pass : exit_violation;
  return r;
}

inline Report cmd_bundle_eval(const LoadedInput& bin, const LoadedInput& fin, const LoadedInput& pin) {
  Report r;
  const StepSubgroupBundle b = bundle_from(bin);
  if (auto issues = validate_bundle(b); !issues.empty()) {
    throw InputError(bin.label + " is not a bundle of subgroups: " + issues.front().rule + ": " + issues.front().detail);
  }
  const Manifest& fm = expect_kind(fin, ManifestKind::system);
  if (!fm.payload.is_object()) throw InputError(fin.label + " must be a scale family {\"scale\": knots}");
  const CoherentFamily family{read_piecewise(fm.payload.at("scale"), "/payload/scale")};
  const Manifest& pm = expect_kind(pin, ManifestKind::function);
  if (!pm.payload.is_object()) throw InputError(pin.label + " must be a sheet function {\"sheets\": [...]}");
  const SheetFunction phi = read_sheet_function(pm.payload, "/payload");

  r.data["command"] = "bundle eval";
  r.data["bundle"] = bin.label;
  r.data["family"] = fin.label;
  r.data["function"] = pin.label;
  r.lines.push_back("bundle eval " + bin.label + " with " + fin.label + " on " + pin.label);
  PiecewiseValue v;
  try {
    v = evaluate_family(b, family, phi);
  } catch (const AdmissibilityError& e) {
    static const char* kinds[] = {"sheet count", "malformed sheet", "continuity", "terminal segment"};
    std::vector<std::string> items;
    json list = json::array();
    for (const auto& a : e.violations()) {
      std::string text = std::string(kinds[static_cast<int>(a.kind)]) + " on sheet " + std::to_string(a.element) + " at " +
                         a.x.get_str() + (a.side ? " (" + side_name(*a.side) + ")" : "") + ": " + a.detail;
      items.push_back(text);
      list.push_back({{"kind", kinds[static_cast<int>(a.kind)]},
                      {"element", a.element},
                      {"x", a.x.get_str()},
                      {"side", a.side ? json(side_name(*a.side)) : json()},
                      {"detail", a.detail}});
    }
    r.lines.push_back("test function is not admissible:");
    list_items(r, items);
    r.data["admissibility_violations"] = list;
    r.data["result"] = "inadmissible";
    r.status = exit_input_error;
    return r;
  }

  r.lines.push_back("x -> mu_x(phi):");
  json pieces = json::array(), values = json::array();
  std::vector<std::string> items;
  for (std::size_t i = 0; i < v.size(); ++i) {
    items.push_back("at " + v.breakpoints[i].get_str() + ": " + v.values[i].get_str());
    values.push_back({v.breakpoints[i].get_str(), v.values[i].get_str()});
    if (i + 1 < v.size()) {
      items.push_back("on (" + v.breakpoints[i].get_str() + ", " + v.breakpoints[i + 1].get_str() +
                      "): " + polynomial_text(v.pieces[i]));
      pieces.push_back(rationals(v.pieces[i].coeffs()));
    }
  }
  list_items(r, items);
  const auto jumps = verify_continuity(v);
  items.clear();
  json jump_list = json::array();
  for (const auto& d : jumps) {
    items.push_back("at " + d.x.get_str() + ": left " + (d.left ? d.left->get_str() : "-") + ", value " + d.value.get_str() +
                    ", right " + (d.right ? d.right->get_str() : "-") + ", discrepancy " + d.discrepancy.get_str());
    jump_list.push_back({{"x", d.x.get_str()},
                         {"left", d.left ? json(d.left->get_str()) : json()},
                         {"value", d.value.get_str()},
                         {"right", d.right ? json(d.right->get_str()) : json()},
                         {"discrepancy", d.discrepancy.get_str()}});
  }
  r.lines.push_back("discontinuities: " + std::to_string(jumps.size()));
  list_items(r, items);
  r.data["values"] = values;
  r.data["pieces"] = pieces;
  r.data["discontinuities"] = jump_list;
  r.data["result"] = jumps.empty() ? "continuous" : "discontinuous";
  r.lines.push_back(std::string("result: ") + (jumps.empty() ? "continuous" : "discontinuous"));
  r.status = jumps.empty() ? exit_pass : exit_violation;
  return r;
}

inline Report cmd_conv_test(const LoadedInput& gin, const LoadedInput& sin, std::uint64_t seed, std::size_t trials) {
  Report r;
  const FiniteGroupoid g = groupoid_from(gin);
  const MeasureFamily mu = family_for(sin, g);
  const bool haar = verify_haar(g, mu).ok();
  RandomSource rng(seed);
  const std::size_t n = g.arrow_count();

  json failures = json::object();
  std::size_t assoc_ok = 0, invol_ok = 0, unit_ok = 0;
  std::optional<GroupoidFunction> unit;
  if (haar) unit = unit_function(g, mu);
  for (std::size_t t = 0; t < trials; ++t) {
    const auto f = rng.function(n), h = rng.function(n), k = rng.function(n);
    const auto assoc = check_associativity(f, h, k, g, mu);
    if (assoc.ok()) {
      ++assoc_ok;
    } else if (!failures.contains("associativity")) {
      const auto& m = assoc.mismatches.front();
      failures["associativity"] = {{"trial", t},
                                   {"arrow", m.arrow},
                                   {"left", m.left.get_str()},
                                   {"right", m.right.get_str()},
                                   {"f", rationals(f)},
                                   {"g", rationals(h)},
                                   {"h", rationals(k)}};
    }
    const auto lhs = involution(detail::convolve_unchecked(f, h, g, mu), g);
    const auto rhs = detail::convolve_unchecked(involution(h, g), involution(f, g), g, mu);
    if (lhs == rhs) {
      ++invol_ok;
    } else if (!failures.contains("involution")) {
      ArrowId a = 0;
      while (lhs[a] == rhs[a]) ++a;
      failures["involution"] = {{"trial", t}, {"arrow", a}, {"left", lhs[a].get_str()}, {"right", rhs[a].get_str()},
                                {"f", rationals(f)}, {"g", rationals(h)}};
    }
    if (unit) {
      const auto left = detail::convolve_unchecked(*unit, f, g, mu);
      const auto right = detail::convolve_unchecked(f, *unit, g, mu);
      if (left == f && right == f) {
        ++unit_ok;
      } else if (!failures.contains("unit")) {
        failures["unit"] = {{"trial", t}, {"f", rationals(f)}};
      }
    }
  }

  r.lines.push_back("conv test " + gin.label + " with " + sin.label + " (seed " + std::to_string(seed) + ", " +
                    std::to_string(trials) + " trials)");
  r.lines.push_back(std::string("Haar system: ") + (haar ? "yes" : "no"));
  auto tally = [&](const std::string& name, std::size_t ok, const std::string& what) {
    r.lines.push_back(name + ": " + std::to_string(ok) + "/" + std::to_string(trials) + " " + what + " agree");
    if (failures.contains(name)) {
      const auto& c = failures[name];
      if (c.contains("arrow")) {
        r.lines.push_back("  first counterexample: trial " + std::to_string(c["trial"].get<std::size_t>()) + ", arrow " +
                          std::to_string(c["arrow"].get<std::size_t>()) + ": " + c["left"].get<std::string>() +
                          " vs " + c["right"].get<std::string>());
      } else {
        r.lines.push_back("  first counterexample: trial " + std::to_string(c["trial"].get<std::size_t>()));
      }
    }
  };
  tally("associativity", assoc_ok, "triples");
  tally("involution", invol_ok, "pairs");
  if (unit) tally("unit", unit_ok, "functions");
  else r.lines.push_back("unit: skipped, the family is not a Haar system");
  const bool pass = haar && failures.empty();
  r.lines.push_back(std::string("result: ") + (pass ? "pass" : "fail"));
  r.data = {{"command", "conv test"},
            {"groupoid", gin.label},
            {"system", sin.label},
            {"seed", seed},
            {"trials", trials},
            {"haar_system", haar},
            {"associativity_agree", assoc_ok},
            {"involution_agree", invol_ok},
            {"unit_agree", unit ? json(unit_ok) : json()},
            {"counterexamples", failures},
            {"result", pass ? "pass" : "fail"}};
  r.status = pass ? exit_pass : exit_violation;
  return r;
}

inline void emit(const Report& r, bool as_json, std::ostream& out) {
  if (as_json) {
    json data = r.data;
    data["exit"] = r.status;
    out << data.dump(2) << "\n";
  } else {
    for (const auto& line : r.lines) out << line << "\n";
  }
}

}  // namespace detail

/// Runs one command line (without the program name). Returns the exit
/// status; reports go to `out`, usage and input errors to `err`.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite groupoids, Haar systems and step subgroup bundles", "haarsys"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Show help for all subcommands");

  bool as_json = false;
  std::string example, nu = "uniform:1", lambda = "const:1", output;
  std::uint64_t seed = 1;
  std::size_t trials = 50;
  std::vector<std::string> inputs;

  auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& about, const std::string& inputs_about) {
    CLI::App* sub = parent->add_subcommand(name, about);
    sub->add_option("inputs", inputs, inputs_about);
    sub->add_option("--example", example, "use a built-in example as the first input");
    sub->add_flag("--json", as_json, "print the structured report");
    return sub;
  };

  CLI::App* validate = leaf(&app, "validate", "check a groupoid or bundle for axiom violations", "<file>");
  CLI::App* decompose = leaf(&app, "decompose", "isotropy groups, orbits and principal quotient", "<groupoid>");
  CLI::App* haar = app.add_subcommand("haar", "Haar systems on finite groupoids");
  haar->require_subcommand(1);
  CLI::App* verify = leaf(haar, "verify", "check support and invariance of a measure family", "<groupoid> <system>");
  CLI::App* synth = leaf(haar, "synth", "build a Haar system from isotropy and quotient data", "<groupoid>");
  synth->add_option("--nu", nu, "isotropy Haar measures: a system file or uniform:p/q")->capture_default_str();
  synth->add_option("--lambda", lambda, "quotient weights per object: a function file or const:p/q")->capture_default_str();
  synth->add_option("-o,--output", output, "write the synthesized system to this file");
  CLI::App* enumerate = leaf(haar, "enumerate", "solve for all invariant families", "<groupoid>");
  CLI::App* bundle = app.add_subcommand("bundle", "step subgroup bundles over [0,1]");
  bundle->require_subcommand(1);
  CLI::App* check = leaf(bundle, "check", "openness and existence of a coherent system", "<bundle>");
  CLI::App* eval = leaf(bundle, "eval", "integrate a test function against a family", "<bundle> <family> <phi>");
  CLI::App* conv = app.add_subcommand("conv", "convolution algebra checks");
  conv->require_subcommand(1);
  CLI::App* test = leaf(conv, "test", "randomized associativity, involution and unit checks", "<groupoid> <system>");
  test->add_option("--seed", seed, "random seed")->capture_default_str();
  test->add_option("--trials", trials, "number of random trials")->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return exit_pass;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return exit_pass;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n" << app.help("", CLI::AppFormatMode::All);
    return exit_input_error;
  }

  if (!example.empty()) inputs.insert(inputs.begin(), "example:" + example);
  auto need = [&](std::size_t n, const std::string& usage) {
    if (inputs.size() != n) throw InputError("expected " + usage);
  };

  try {
    Report r;
    if (validate->parsed()) {
      need(1, "one input: validate <file>");
      r = detail::cmd_validate(load_input(inputs[0]));
    } else if (decompose->parsed()) {
      need(1, "one input: decompose <groupoid>");
      r = detail::cmd_decompose(load_input(inputs[0]));
    } else if (verify->parsed()) {
      need(2, "two inputs: haar verify <groupoid> <system>");
      r = detail::cmd_haar_verify(load_input(inputs[0]), load_input(inputs[1]));
    } else if (synth->parsed()) {
      need(1, "one input: haar synth <groupoid>");
      r = detail::cmd_haar_synth(load_input(inputs[0]), nu, lambda, output);
    } else if (enumerate->parsed()) {
      need(1, "one input: haar enumerate <groupoid>");
      r = detail::cmd_haar_enumerate(load_input(inputs[0]));
    } else if (check->parsed()) {
      need(1, "one input: bundle check <bundle>");
      r = detail::cmd_bundle_check(load_input(inputs[0]));
    } else if (eval->parsed()) {
      need(3, "three inputs: bundle eval <bundle> <family> <phi>");
      r = detail::cmd_bundle_eval(load_input(inputs[0]), load_input(inputs[1]), load_input(inputs[2]));
    } else if (test->parsed()) {
      need(2, "two inputs: conv test <groupoid> <system>");
      r = detail::cmd_conv_test(load_input(inputs[0]), load_input(inputs[1]), seed, trials);
    }
    detail::emit(r, as_json, out);
    return r.status;
  } catch (const ParseError& e) {
    err << "error: " << e.diagnostic().str() << "\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
  }
  return exit_input_error;
}

}  // namespace haarsys
