#pragma once

#include <algorithm>
#include <cstddef>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace haarsys {

/// Index of an element of a finite group, dense in [0, order).
using Element = std::size_t;
using CayleyTable = std::vector<std::vector<Element>>;

/// Why a table fails to be a group, with the elements that exhibit it.
struct GroupDefect {
  enum class Kind { empty, not_square, out_of_range, no_identity, no_inverse, non_associative };
  Kind kind;
  std::vector<Element> witness;

  std::string describe() const {
    auto list = [this] {
      std::string s;
      for (std::size_t i = 0; i < witness.size(); ++i) s += (i ? "," : "") + std::to_string(witness[i]);
      return s;
    };
    switch (kind) {
      case Kind::empty: return "empty table";
      case Kind::not_square: return "row " + list() + " has the wrong length";
      case Kind::out_of_range: return "entry at (" + list() + ") is not an element";
      case Kind::no_identity: return "no two-sided identity element";
      case Kind::no_inverse: return "element " + list() + " has no inverse";
      case Kind::non_associative: return "associativity fails on (" + list() + ")";
    }
    return "unknown defect";
  }
};

class GroupTableError : public std::invalid_argument {
 public:
  explicit GroupTableError(GroupDefect defect)
      : std::invalid_argument("not a group: " + defect.describe()), defect_(std::move(defect)) {}
  const GroupDefect& defect() const { return defect_; }

 private:
  GroupDefect defect_;
};

/// First group axiom violated by `table`, or nothing for a group.
inline std::optional<GroupDefect> check_group_table(const CayleyTable& table) {
  using K = GroupDefect::Kind;
  const std::size_t n = table.size();
  if (n == 0) return GroupDefect{K::empty, {}};
  for (std::size_t a = 0; a < n; ++a) {
    if (table[a].size() != n) return GroupDefect{K::not_square, {a}};
    for (std::size_t b = 0; b < n; ++b) {
      if (table[a][b] >= n) return GroupDefect{K::out_of_range, {a, b}};
    }
  }
  std::optional<Element> identity;
  for (Element e = 0; e < n && !identity; ++e) {
    bool neutral = true;
    for (Element a = 0; a < n && neutral; ++a) neutral = table[e][a] == a && table[a][e] == a;
    if (neutral) identity = e;
  }
  if (!identity) return GroupDefect{K::no_identity, {}};
  for (Element a = 0; a < n; ++a) {
    bool found = false;
    for (Element b = 0; b < n && !found; ++b) found = table[a][b] == *identity && table[b][a] == *identity;
    if (!found) return GroupDefect{K::no_inverse, {a}};
  }
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) {
      for (Element c = 0; c < n; ++c) {
        if (table[table[a][b]][c] != table[a][table[b][c]]) return GroupDefect{K::non_associative, {a, b, c}};
      }
    }
  }
  return std::nullopt;
}

/// A finite group given by its multiplication table.
class FiniteGroup {
 public:
  /// The trivial group.
  FiniteGroup() : table_{{0}}, inverse_{0} {}

  explicit FiniteGroup(CayleyTable table) : table_(std::move(table)) {
    if (auto defect = check_group_table(table_)) throw GroupTableError(*defect);
    const std::size_t n = table_.size();
    for (Element e = 0; e < n; ++e) {
      if (table_[e][0] == 0 && table_[0][e] == 0 && table_[e][e] == e) {
        identity_ = e;
        break;
      }
    }
    inverse_.resize(n);
    for (Element a = 0; a < n; ++a) {
      for (Element b = 0; b < n; ++b) {
        if (table_[a][b] == identity_) inverse_[a] = b;
      }
    }
  }

  std::size_t order() const { return table_.size(); }
  Element identity() const { return identity_; }
  Element mul(Element a, Element b) const { return table_[a][b]; }
  Element inverse(Element a) const { return inverse_[a]; }
  const CayleyTable& table() const { return table_; }

  std::size_t element_order(Element a) const {
    std::size_t k = 1;
    for (Element p = a; p != identity_; p = mul(p, a)) ++k;
    return k;
  }

  bool is_abelian() const {
    for (Element a = 0; a < order(); ++a) {
      for (Element b = a + 1; b < order(); ++b) {
        if (mul(a, b) != mul(b, a)) return false;
      }
    }
    return true;
  }

  bool operator==(const FiniteGroup& other) const { return table_ == other.table_; }

 private:
  CayleyTable table_;
  std::vector<Element> inverse_;
  Element identity_ = 0;
};

// ---------------------------------------------------------------------------
// Standard groups

inline FiniteGroup cyclic_group(std::size_t n) {
  if (n == 0) throw std::invalid_argument("cyclic group of order 0");
  CayleyTable t(n, std::vector<Element>(n));
  for (Element a = 0; a < n; ++a) {
    for (Element b = 0; b < n; ++b) t[a][b] = (a + b) % n;
  }
  return FiniteGroup(std::move(t));
}

/// Symmetries of the regular n-gon, order 2n. Elements 0..n-1 are the
/// rotations r^k, elements n..2n-1 the reflections s r^k.
inline FiniteGroup dihedral_group(std::size_t n) {
  if (n == 0) throw std::invalid_argument("dihedral group of degree 0");
  const std::size_t m = 2 * n;
  CayleyTable t(m, std::vector<Element>(m));
  for (Element x = 0; x < m; ++x) {
    for (Element y = 0; y < m; ++y) {
      const bool xr = x < n, yr = y < n;
      const std::size_t i = x % n, j = y % n;
      if (xr && yr) t[x][y] = (i + j) % n;
      else if (xr && !yr) t[x][y] = n + (j + n - i) % n;  // r^i s r^j = s r^(j-i)
      else if (!xr && yr) t[x][y] = n + (i + j) % n;
      else t[x][y] = (j + n - i) % n;  // s r^i s r^j = r^(j-i)
    }
  }
  return FiniteGroup(std::move(t));
}

inline FiniteGroup symmetric_group_3() { return dihedral_group(3); }

/// Quaternion group Q8: element 2k+s stands for (-1)^s q_k with
/// q_0 = 1, q_1 = i, q_2 = j, q_3 = k.
inline FiniteGroup quaternion_group() {
  // unit[a][b] = (sign, index) of q_a q_b
  static const int sign[4][4] = {{0, 0, 0, 0}, {0, 1, 0, 1}, {0, 1, 1, 0}, {0, 0, 1, 1}};
  static const int index[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  CayleyTable t(8, std::vector<Element>(8));
  for (Element x = 0; x < 8; ++x) {
    for (Element y = 0; y < 8; ++y) {
      const std::size_t a = x / 2, b = y / 2;
      const std::size_t s = (x % 2 + y % 2 + sign[a][b]) % 2;
      t[x][y] = 2 * index[a][b] + s;
    }
  }
  return FiniteGroup(std::move(t));
}

/// Direct product; element (a, b) has index a * |H| + b.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h) {
  const std::size_t n = g.order() * h.order();
  CayleyTable t(n, std::vector<Element>(n));
  for (Element x = 0; x < n; ++x) {
    for (Element y = 0; y < n; ++y) {
      t[x][y] = g.mul(x / h.order(), y / h.order()) * h.order() + h.mul(x % h.order(), y % h.order());
    }
  }
  return FiniteGroup(std::move(t));
}

/// Looks up a group by name: "trivial", "Z/n" (or "Zn"), "S3", "D<n>"
/// (order 2n), "Q8", "V4", and products joined by 'x' such as "Z/2xZ/4".
inline FiniteGroup group_by_name(const std::string& name) {
  if (auto x = name.find('x'); x != std::string::npos) {
    return direct_product(group_by_name(name.substr(0, x)), group_by_name(name.substr(x + 1)));
  }
  auto number = [&](std::size_t from) -> std::size_t {
    const std::string digits = name.substr(from);
    if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos) {
      throw std::invalid_argument("unknown group name: " + name);
    }
    return std::stoul(digits);
  };
  if (name == "trivial" || name == "1") return FiniteGroup();
  if (name == "S3") return symmetric_group_3();
  if (name == "Q8") return quaternion_group();
  if (name == "V4") return direct_product(cyclic_group(2), cyclic_group(2));
  if (name.rfind("Z/", 0) == 0) return cyclic_group(number(2));
  if (name.rfind("Z", 0) == 0) return cyclic_group(number(1));
  if (name.rfind("D", 0) == 0) return dihedral_group(number(1));
  throw std::invalid_argument("unknown group name: " + name);
}

// ---------------------------------------------------------------------------
// Subgroups

/// Why an element set fails to be a subgroup.
struct SubgroupDefect {
  enum class Kind { out_of_range, duplicate, missing_identity, not_closed, missing_inverse };
  Kind kind;
  std::vector<Element> witness;
};

inline std::optional<SubgroupDefect> check_subgroup(const FiniteGroup& group, const std::vector<Element>& elements) {
  using K = SubgroupDefect::Kind;
  std::vector<bool> member(group.order(), false);
  for (Element a : elements) {
    if (a >= group.order()) return SubgroupDefect{K::out_of_range, {a}};
    if (member[a]) return SubgroupDefect{K::duplicate, {a}};
    member[a] = true;
  }
  if (!member[group.identity()]) return SubgroupDefect{K::missing_identity, {group.identity()}};
  for (Element a : elements) {
    for (Element b : elements) {
      if (!member[group.mul(a, b)]) return SubgroupDefect{K::not_closed, {a, b}};
    }
  }
  for (Element a : elements) {
    if (!member[group.inverse(a)]) return SubgroupDefect{K::missing_inverse, {a}};
  }
  return std::nullopt;
}

inline std::vector<Element> generated_subgroup(const FiniteGroup& group, const std::vector<Element>& generators) {
  std::set<Element> members{group.identity()};
  std::vector<Element> frontier{group.identity()};
  while (!frontier.empty()) {
    Element a = frontier.back();
    frontier.pop_back();
    for (Element g : generators) {
      Element b = group.mul(a, g);
      if (members.insert(b).second) frontier.push_back(b);
    }
  }
  return {members.begin(), members.end()};
}

/// All subgroups, each as a sorted element list, ordered by size then
/// lexicographically. Generated from subsets of at most three elements,
/// which covers every group of order below 16.
inline std::vector<std::vector<Element>> all_subgroups(const FiniteGroup& group) {
  std::set<std::vector<Element>> found;
  const std::size_t n = group.order();
  for (Element a = 0; a < n; ++a) {
    for (Element b = a; b < n; ++b) {
      for (Element c = b; c < n; ++c) found.insert(generated_subgroup(group, {a, b, c}));
    }
  }
  std::vector<std::vector<Element>> out(found.begin(), found.end());
  std::stable_sort(out.begin(), out.end(), [](const auto& x, const auto& y) { return x.size() < y.size(); });
  return out;
}

/// Restricts the multiplication of `group` to a subgroup, reindexing
/// elements[i] as i.
inline FiniteGroup restrict_to(const FiniteGroup& group, const std::vector<Element>& elements) {
  std::map<Element, Element> local;
  for (std::size_t i = 0; i < elements.size(); ++i) local[elements[i]] = i;
  CayleyTable t(elements.size(), std::vector<Element>(elements.size()));
  for (std::size_t i = 0; i < elements.size(); ++i) {
    for (std::size_t j = 0; j < elements.size(); ++j) t[i][j] = local.at(group.mul(elements[i], elements[j]));
  }
  return FiniteGroup(std::move(t));
}

/// Isomorphism type for the groups of order at most 8, and a coarse
/// description otherwise. Element-order statistics separate all groups of
/// order <= 8.
inline std::string isomorphism_type(const FiniteGroup& group) {
  const std::size_t n = group.order();
  std::size_t involutions = 0;
  bool cyclic = false;
  std::size_t max_order = 1;
  for (Element a = 0; a < n; ++a) {
    const std::size_t k = group.element_order(a);
    if (k == 2) ++involutions;
    if (k == n) cyclic = true;
    max_order = std::max(max_order, k);
  }
  if (n == 1) return "trivial";
  if (cyclic) return "Z/" + std::to_string(n);
  const bool abelian = group.is_abelian();
  if (n == 4) return "Z/2xZ/2";
  if (n == 6) return "S3";
  if (n == 8) {
    if (abelian) return max_order == 4 ? "Z/4xZ/2" : "Z/2xZ/2xZ/2";
    return involutions == 5 ? "D4" : "Q8";
  }
  return std::string(abelian ? "abelian" : "nonabelian") + " group of order " + std::to_string(n);
}

}  // namespace haarsys
