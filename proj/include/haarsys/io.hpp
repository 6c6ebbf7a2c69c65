#pragma once

#include <haarsys/group.hpp>
#include <haarsys/groupoid.hpp>
#include <haarsys/haar.hpp>
#include <haarsys/measures.hpp>
#include <haarsys/rational.hpp>
#include <haarsys/stepbundle.hpp>

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace haarsys {

using json = nlohmann::json;

enum class DiagnosticCode {
  syntax,
  schema,
  malformed_rational,
  unnormalized_rational,
  dangling_id,
  invalid_value,
  not_a_group,
};

inline std::string_view code_name(DiagnosticCode c) {
  switch (c) {
    case DiagnosticCode::syntax: return "E-SYNTAX";
    case DiagnosticCode::schema: return "E-SCHEMA";
    case DiagnosticCode::malformed_rational: return "E-RATIONAL";
    case DiagnosticCode::unnormalized_rational: return "E-UNNORMALIZED";
    case DiagnosticCode::dangling_id: return "E-DANGLING-ID";
    case DiagnosticCode::invalid_value: return "E-VALUE";
    case DiagnosticCode::not_a_group: return "E-NOT-A-GROUP";
  }
  return "E-UNKNOWN";
}

/// Where and why an input was rejected. `location` is "line L, column C"
/// for syntax errors and a JSON pointer for field errors.
struct Diagnostic {
  DiagnosticCode code;
  std::string location;
  std::string message;

  std::string str() const { return std::string(code_name(code)) + " at " + location + ": " + message; }
};

class ParseError : public std::runtime_error {
 public:
  explicit ParseError(Diagnostic d) : std::runtime_error(d.str()), diagnostic_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diagnostic_; }

 private:
  Diagnostic diagnostic_;
};

[[noreturn]] inline void fail(DiagnosticCode code, const std::string& path, const std::string& message) {
  throw ParseError({code, path.empty() ? "/" : path, message});
}

// ---------------------------------------------------------------------------
// Scalars

namespace detail {

inline const json& field(const json& j, const std::string& key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) fail(DiagnosticCode::schema, path, "missing field \"" + key + "\"");
  return j.at(key);
}

inline const json& array_at(const json& j, const std::string& path) {
  if (!j.is_array()) fail(DiagnosticCode::schema, path, "expected an array");
  return j;
}

inline std::size_t read_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) {
    fail(DiagnosticCode::schema, path, "expected a nonnegative integer");
  }
  return j.get<std::size_t>();
}

inline std::size_t read_id(const json& j, std::size_t bound, const std::string& path, const char* what) {
  const std::size_t id = read_index(j, path);
  if (id >= bound) fail(DiagnosticCode::dangling_id, path, std::string("unknown ") + what + " id " + std::to_string(id));
  return id;
}

}  // namespace detail

inline Rational read_rational(const json& j, const std::string& path) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  if (!j.is_string()) fail(DiagnosticCode::schema, path, "expected a rational string \"p/q\"");
  const auto text = j.get<std::string>();
  auto parsed = parse_rational(text);
  if (parsed.status == RationalSyntax::malformed) fail(DiagnosticCode::malformed_rational, path, "malformed rational \"" + text + "\"");
  if (parsed.status == RationalSyntax::unnormalized) {
    fail(DiagnosticCode::unnormalized_rational, path, "rational \"" + text + "\" is not in lowest terms");
  }
  return parsed.value;
}

inline json write_rational(const Rational& q) { return q.get_str(); }

// ---------------------------------------------------------------------------
// Groups and groupoids

inline FiniteGroup read_group(const json& j, const std::string& path) {
  if (j.is_string()) {
    try {
      return group_by_name(j.get<std::string>());
    } catch (const std::invalid_argument& e) {
      fail(DiagnosticCode::invalid_value, path, e.what());
    }
  }
  detail::array_at(j, path);
  CayleyTable table;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto row_path = path + "/" + std::to_string(i);
    detail::array_at(j[i], row_path);
    std::vector<Element> row;
    for (std::size_t k = 0; k < j[i].size(); ++k) row.push_back(detail::read_index(j[i][k], row_path + "/" + std::to_string(k)));
    table.push_back(std::move(row));
  }
  if (auto defect = check_group_table(table)) fail(DiagnosticCode::not_a_group, path, defect->describe());
  return FiniteGroup(std::move(table));
}

inline json write_group(const FiniteGroup& g) { return g.table(); }

inline FiniteGroupoid read_groupoid(const json& j, const std::string& path);

namespace detail {

inline GroupoidTables read_tables(const json& j, const std::string& path) {
  GroupoidTables t;
  t.objects = read_index(field(j, "objects", path), path + "/objects");
  const auto& arrows = array_at(field(j, "arrows", path), path + "/arrows");
  for (std::size_t i = 0; i < arrows.size(); ++i) {
    const auto p = path + "/arrows/" + std::to_string(i);
    Arrow a;
    a.id = read_index(field(arrows[i], "id", p), p + "/id");
    if (a.id != i) fail(DiagnosticCode::invalid_value, p + "/id", "arrow ids must be 0..n-1 in order");
    a.src = read_id(field(arrows[i], "src", p), t.objects, p + "/src", "object");
    a.dst = read_id(field(arrows[i], "dst", p), t.objects, p + "/dst", "object");
    t.arrows.push_back(a);
  }
  const std::size_t n = t.arrows.size();
  const auto& compose = array_at(field(j, "compose", path), path + "/compose");
  for (std::size_t i = 0; i < compose.size(); ++i) {
    const auto p = path + "/compose/" + std::to_string(i);
    if (!compose[i].is_array() || compose[i].size() != 3) fail(DiagnosticCode::schema, p, "expected [a, b, ab]");
    std::array<ArrowId, 3> e{};
    for (std::size_t k = 0; k < 3; ++k) e[k] = read_id(compose[i][k], n, p + "/" + std::to_string(k), "arrow");
    t.compose.push_back(e);
  }
  const auto& inverse = array_at(field(j, "inverse", path), path + "/inverse");
  for (std::size_t i = 0; i < inverse.size(); ++i) {
    const auto p = path + "/inverse/" + std::to_string(i);
    if (!inverse[i].is_array() || inverse[i].size() != 2) fail(DiagnosticCode::schema, p, "expected [a, a^-1]");
    t.inverse.emplace_back(read_id(inverse[i][0], n, p + "/0", "arrow"), read_id(inverse[i][1], n, p + "/1", "arrow"));
  }
  const auto& identity = array_at(field(j, "identity", path), path + "/identity");
  for (std::size_t i = 0; i < identity.size(); ++i) {
    const auto p = path + "/identity/" + std::to_string(i);
    if (!identity[i].is_array() || identity[i].size() != 2) fail(DiagnosticCode::schema, p, "expected [x, 1_x]");
    t.identity.emplace_back(read_id(identity[i][0], t.objects, p + "/0", "object"),
                            read_id(identity[i][1], n, p + "/1", "arrow"));
  }
  return t;
}

inline FiniteGroupoid read_explicit_groupoid(const json& j, const std::string& path) {
  const GroupoidTables t = read_tables(j, path);
  if (auto issues = check_structure(t); !issues.empty()) {
    fail(DiagnosticCode::invalid_value, path, issues.front().rule + ": " + issues.front().detail);
  }
  return FiniteGroupoid(t);
}

}  // namespace detail

/// Explicit tables, or one of the shorthands {"pair": n}, {"bundle": [...]},
/// {"action": {...}}, {"product": [d, d]}, {"union": [d, ...]}.
inline FiniteGroupoid read_groupoid(const json& j, const std::string& path) {
  if (!j.is_object()) fail(DiagnosticCode::schema, path, "expected a groupoid description object");
  if (j.contains("pair")) {
    const std::size_t n = detail::read_index(j["pair"], path + "/pair");
    if (n == 0) fail(DiagnosticCode::invalid_value, path + "/pair", "pair groupoid needs at least one object");
    return pair_groupoid(n);
  }
  if (j.contains("bundle")) {
    const auto& list = detail::array_at(j["bundle"], path + "/bundle");
    std::vector<FiniteGroup> groups;
    for (std::size_t i = 0; i < list.size(); ++i) groups.push_back(read_group(list[i], path + "/bundle/" + std::to_string(i)));
    return group_bundle(groups);
  }
  if (j.contains("action")) {
    const auto p = path + "/action";
    const auto& a = j["action"];
    const FiniteGroup group = read_group(detail::field(a, "group", p), p + "/group");
    const std::size_t points = detail::read_index(detail::field(a, "points", p), p + "/points");
    const auto& act = detail::array_at(detail::field(a, "act", p), p + "/act");
    std::vector<std::vector<std::size_t>> table;
    for (std::size_t x = 0; x < act.size(); ++x) {
      const auto row_path = p + "/act/" + std::to_string(x);
      detail::array_at(act[x], row_path);
      std::vector<std::size_t> row;
      for (std::size_t h = 0; h < act[x].size(); ++h) {
        row.push_back(detail::read_id(act[x][h], points, row_path + "/" + std::to_string(h), "point"));
      }
      table.push_back(std::move(row));
    }
    try {
      return action_groupoid(group, points, table);
    } catch (const ActionError& e) {
      fail(DiagnosticCode::invalid_value, p + "/act", e.what());
    }
  }
  if (j.contains("product")) {
    const auto& list = detail::array_at(j["product"], path + "/product");
    if (list.size() != 2) fail(DiagnosticCode::schema, path + "/product", "product takes exactly two groupoids");
    return product_groupoid(read_groupoid(list[0], path + "/product/0"), read_groupoid(list[1], path + "/product/1"));
  }
  if (j.contains("union")) {
    const auto& list = detail::array_at(j["union"], path + "/union");
    std::vector<FiniteGroupoid> parts;
    for (std::size_t i = 0; i < list.size(); ++i) parts.push_back(read_groupoid(list[i], path + "/union/" + std::to_string(i)));
    return disjoint_union(parts);
  }
  return detail::read_explicit_groupoid(j, path);
}

inline json write_tables(const GroupoidTables& t) {
  json arrows = json::array(), compose = json::array(), inverse = json::array(), identity = json::array();
  for (const Arrow& a : t.arrows) arrows.push_back({{"id", a.id}, {"src", a.src}, {"dst", a.dst}});
  for (const auto& [a, b, c] : t.compose) compose.push_back({a, b, c});
  for (const auto& [a, b] : t.inverse) inverse.push_back({a, b});
  for (const auto& [x, a] : t.identity) identity.push_back({x, a});
  return {{"objects", t.objects}, {"arrows", arrows}, {"compose", compose}, {"inverse", inverse}, {"identity", identity}};
}

inline json write_groupoid(const FiniteGroupoid& g) { return write_tables(g.tables()); }

/// Tables of a groupoid description without checking them, so that
/// structural defects can be reported rather than rejected. Shorthands
/// always produce sound tables.
inline GroupoidTables read_groupoid_tables(const json& j, const std::string& path) {
  if (j.is_object() && j.contains("objects")) return detail::read_tables(j, path);
  return read_groupoid(j, path).tables();
}

// ---------------------------------------------------------------------------
// Measures and functions on groupoids

inline FiberMeasure read_weights(const json& j, const std::string& path) {
  detail::array_at(j, path);
  FiberMeasure mu;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) fail(DiagnosticCode::schema, p, "expected [arrowId, \"p/q\"]");
    const ArrowId a = detail::read_index(j[i][0], p + "/0");
    if (mu.weights.count(a)) fail(DiagnosticCode::invalid_value, p + "/0", "arrow listed twice");
    mu.weights[a] = read_rational(j[i][1], p + "/1");
  }
  return mu;
}

inline json write_weights(const FiberMeasure& mu) {
  json out = json::array();
  for (const auto& [a, w] : mu.weights) out.push_back({a, write_rational(w)});
  return out;
}

/// [{"x": objectId, "weights": [[arrowId, "p/q"], ...]}, ...]; objects not
/// listed get the zero measure.
inline MeasureFamily read_family(const json& j, const std::string& path) {
  detail::array_at(j, path);
  MeasureFamily family;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    const std::size_t x = detail::read_index(detail::field(j[i], "x", p), p + "/x");
    if (x >= family.fibers.size()) family.fibers.resize(x + 1);
    if (!family.fibers[x].weights.empty()) fail(DiagnosticCode::invalid_value, p + "/x", "object listed twice");
    family.fibers[x] = read_weights(detail::field(j[i], "weights", p), p + "/weights");
  }
  return family;
}

inline json write_family(const std::vector<FiberMeasure>& fibers) {
  json out = json::array();
  for (std::size_t x = 0; x < fibers.size(); ++x) out.push_back({{"x", x}, {"weights", write_weights(fibers[x])}});
  return out;
}

/// Sparse [[arrowId, "p/q"], ...]; unlisted arrows are zero. Ids are
/// bounds-checked against `arrows` when it is known.
inline ArrowFunction read_arrow_function(const json& j, const std::string& path, std::optional<std::size_t> arrows) {
  FiberMeasure sparse = read_weights(j, path);
  std::size_t n = arrows.value_or(sparse.weights.empty() ? 0 : sparse.weights.rbegin()->first + 1);
  ArrowFunction f(n);
  std::size_t i = 0;
  for (const auto& [a, v] : sparse.weights) {
    if (a >= n) fail(DiagnosticCode::dangling_id, path + "/" + std::to_string(i) + "/0", "unknown arrow id " + std::to_string(a));
    f[a] = v;
    ++i;
  }
  return f;
}

inline json write_arrow_function(const ArrowFunction& f) {
  json out = json::array();
  for (std::size_t a = 0; a < f.size(); ++a) {
    if (f[a] != 0) out.push_back({a, write_rational(f[a])});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Bundles and sheet functions

inline std::vector<Knot> read_knots(const json& j, const std::string& path) {
  detail::array_at(j, path);
  std::vector<Knot> knots;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const auto p = path + "/" + std::to_string(i);
    if (!j[i].is_array() || j[i].size() != 2) fail(DiagnosticCode::schema, p, "expected [\"x\", \"value\"]");
    const Rational x = read_rational(j[i][0], p + "/0");
    if (x < 0 || x > 1) fail(DiagnosticCode::invalid_value, p + "/0", "knot outside [0, 1]");
    knots.push_back({x, read_rational(j[i][1], p + "/1")});
  }
  return knots;
}

inline PiecewiseValue read_piecewise(const json& j, const std::string& path) {
  const auto knots = read_knots(j, path);
  try {
    return from_knots(knots);
  } catch (const std::invalid_argument& e) {
    fail(DiagnosticCode::invalid_value, path, e.what());
  }
}

inline json write_piecewise(const PiecewiseValue& v) {
  json out = json::array();
  for (const auto& k : to_knots(v)) out.push_back({write_rational(k.x), write_rational(k.y)});
  return out;
}

inline StepSubgroupBundle read_bundle(const json& j, const std::string& path) {
  StepSubgroupBundle b;
  b.ambient = read_group(detail::field(j, "ambient", path), path + "/ambient");
  const auto& bp = detail::array_at(detail::field(j, "breakpoints", path), path + "/breakpoints");
  for (std::size_t i = 0; i < bp.size(); ++i) {
    const auto p = path + "/breakpoints/" + std::to_string(i);
    const Rational x = read_rational(bp[i], p);
    if (x < 0 || x > 1) fail(DiagnosticCode::invalid_value, p, "breakpoint " + x.get_str() + " lies outside [0, 1]");
    b.breakpoints.push_back(x);
  }
  auto read_sets = [&](const char* key) {
    std::vector<std::vector<Element>> sets;
    const auto& list = detail::array_at(detail::field(j, key, path), path + "/" + key);
    for (std::size_t i = 0; i < list.size(); ++i) {
      const auto p = path + "/" + key + "/" + std::to_string(i);
      detail::array_at(list[i], p);
      std::vector<Element> set;
      for (std::size_t k = 0; k < list[i].size(); ++k) {
        set.push_back(detail::read_id(list[i][k], b.ambient.order(), p + "/" + std::to_string(k), "group element"));
      }
      sets.push_back(std::move(set));
    }
    return sets;
  };
  b.pieces = read_sets("pieces");
  b.points = read_sets("points");
  return b;
}

inline json write_bundle(const StepSubgroupBundle& b) {
  json bp = json::array();
  for (const auto& x : b.breakpoints) bp.push_back(write_rational(x));
  return {{"ambient", write_group(b.ambient)}, {"breakpoints", bp}, {"pieces", b.pieces}, {"points", b.points}};
}

/// {"sheets": [knots for element 0, knots for element 1, ...]}; an empty
/// knot list is the zero function.
inline SheetFunction read_sheet_function(const json& j, const std::string& path) {
  const auto& list = detail::array_at(detail::field(j, "sheets", path), path + "/sheets");
  SheetFunction phi;
  for (std::size_t g = 0; g < list.size(); ++g) phi.sheets.push_back(read_piecewise(list[g], path + "/sheets/" + std::to_string(g)));
  return phi;
}

inline json write_sheet_function(const SheetFunction& phi) {
  json sheets = json::array();
  for (const auto& s : phi.sheets) sheets.push_back(write_piecewise(s));
  return {{"sheets", sheets}};
}

// ---------------------------------------------------------------------------
// Manifests

enum class ManifestKind { groupoid, bundle, system, function };

inline std::string_view kind_name(ManifestKind k) {
  switch (k) {
    case ManifestKind::groupoid: return "groupoid";
    case ManifestKind::bundle: return "bundle";
    case ManifestKind::system: return "system";
    case ManifestKind::function: return "function";
  }
  return "";
}

/// A self-describing input file: {"kind": ..., "name": ..., "seed": ...,
/// "payload": ...}. Systems are measure families or {"scale": knots};
/// functions are sparse arrow lists or {"sheets": [...]}.
struct Manifest {
  ManifestKind kind = ManifestKind::groupoid;
  std::string name;
  std::optional<std::uint64_t> seed;
  json payload;

  bool operator==(const Manifest& o) const {
    return kind == o.kind && name == o.name && seed == o.seed && payload == o.payload;
  }
};

/// Checks that a payload decodes for its kind, throwing ParseError if not.
/// Explicit groupoid tables are only checked for ids, so that validation
/// can still report their structural defects.
inline void check_payload(ManifestKind kind, const json& payload, const std::string& path) {
  switch (kind) {
    case ManifestKind::groupoid: read_groupoid_tables(payload, path); return;
    case ManifestKind::bundle: read_bundle(payload, path); return;
    case ManifestKind::system:
      if (payload.is_object()) read_piecewise(detail::field(payload, "scale", path), path + "/scale");
      else read_family(payload, path);
      return;
    case ManifestKind::function:
      if (payload.is_object()) read_sheet_function(payload, path);
      else read_arrow_function(payload, path, std::nullopt);
      return;
  }
}

inline json parse_json(std::string_view text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1, column = 1;
    for (std::size_t i = 0; i + 1 < e.byte && i < text.size(); ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw ParseError({DiagnosticCode::syntax, "line " + std::to_string(line) + ", column " + std::to_string(column),
                      "invalid JSON"});
  }
}

inline Manifest manifest_from_json(const json& j) {
  if (!j.is_object()) fail(DiagnosticCode::schema, "", "manifest must be a JSON object");
  Manifest m;
  const auto& kind = detail::field(j, "kind", "");
  const std::string k = kind.is_string() ? kind.get<std::string>() : "";
  if (k == "groupoid") m.kind = ManifestKind::groupoid;
  else if (k == "bundle") m.kind = ManifestKind::bundle;
  else if (k == "system") m.kind = ManifestKind::system;
  else if (k == "function") m.kind = ManifestKind::function;
  else fail(DiagnosticCode::schema, "/kind", "kind must be groupoid, bundle, system or function");
  if (j.contains("name")) {
    if (!j["name"].is_string()) fail(DiagnosticCode::schema, "/name", "name must be a string");
    m.name = j["name"].get<std::string>();
  }
  if (j.contains("seed")) m.seed = detail::read_index(j["seed"], "/seed");
  m.payload = detail::field(j, "payload", "");
  check_payload(m.kind, m.payload, "/payload");
  return m;
}

inline Manifest parse_manifest(std::string_view text) { return manifest_from_json(parse_json(text)); }

inline json manifest_to_json(const Manifest& m) {
  json j = {{"kind", kind_name(m.kind)}};
  if (!m.name.empty()) j["name"] = m.name;
  if (m.seed) j["seed"] = *m.seed;
  j["payload"] = m.payload;
  return j;
}

inline std::string serialize(const Manifest& m) { return manifest_to_json(m).dump(2) + "\n"; }

}  // namespace haarsys
