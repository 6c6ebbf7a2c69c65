#pragma once

#include <gmpxx.h>

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace haarsys {

/// Exact rational scalar. Every weight, integral and breakpoint in the
/// library is one of these; nothing is ever rounded.
using Rational = mpq_class;

inline std::string to_string(const Rational& q) { return q.get_str(); }

enum class RationalSyntax { ok, malformed, unnormalized };

struct ParsedRational {
  RationalSyntax status = RationalSyntax::malformed;
  Rational value;
};

/// Parses "p/q" or "p". Accepted text has no leading zeros, an optional
/// minus sign on p only, q > 0 and gcd(p, q) = 1.
inline ParsedRational parse_rational(std::string_view text) {
  ParsedRational out;
  auto digits_ok = [](std::string_view s, bool allow_zero) {
    if (s.empty()) return false;
    for (char c : s) {
      if (c < '0' || c > '9') return false;
    }
    if (s.size() > 1 && s.front() == '0') return false;
    if (!allow_zero && s == "0") return false;
    return true;
  };
  std::string_view num = text;
  std::string_view den;
  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    num = text.substr(0, slash);
    den = text.substr(slash + 1);
    if (den.empty()) return out;
  }
  bool negative = !num.empty() && num.front() == '-';
  std::string_view num_digits = negative ? num.substr(1) : num;
  if (!digits_ok(num_digits, true)) return out;
  if (negative && num_digits == "0") {
    out.status = RationalSyntax::unnormalized;
    return out;
  }
  if (!den.empty() && !digits_ok(den, false)) return out;

  mpz_class p(std::string(num), 10);
  mpz_class q = den.empty() ? mpz_class(1) : mpz_class(std::string(den), 10);
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  out.value = Rational(p, q);
  out.value.canonicalize();
  out.status = (g == 1 || (p == 0 && q == 1)) ? RationalSyntax::ok : RationalSyntax::unnormalized;
  return out;
}

/// Convenience for literals in code and tests; throws on anything but a
/// well-formed, normalized rational.
inline Rational rat(std::string_view text) {
  auto parsed = parse_rational(text);
  if (parsed.status != RationalSyntax::ok) {
    throw std::invalid_argument("not a normalized rational: " + std::string(text));
  }
  return parsed.value;
}

inline Rational rat(long p, long q = 1) {
  Rational r(p, q);
  r.canonicalize();
  return r;
}

}  // namespace haarsys
