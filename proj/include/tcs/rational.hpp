#pragma once

#include <gmpxx.h>

#include <string>

#include "tcs/errors.hpp"

namespace tcs {

// Exact scalar used everywhere by default. The numeric kernels are templates
// over an ordered field, so `double` can be substituted where a float mode is
// wanted (Euclidean point clouds); all acceptance paths stay rational.
using Rational = mpq_class;

namespace num {

template <typename S>
S abs_val(const S& x) {
  using std::abs;
  return S(abs(x));
}

template <typename S>
int sign(const S& x) {
  if (x > 0) return 1;
  if (x < 0) return -1;
  return 0;
}

// x^e for integer e (e may be negative; x must be nonzero then).
template <typename S>
S int_pow(const S& x, long e) {
  S base = x;
  long n = e;
  if (n < 0) {
    base = S(1) / base;
    n = -n;
  }
  S out(1);
  while (n > 0) {
    if (n & 1) out = S(out * base);
    base = S(base * base);
    n >>= 1;
  }
  return out;
}

}  // namespace num

// Exact fraction in canonical form (mpq_class(p, q) alone does not reduce).
inline Rational make_ratio(long num, long den) {
  Rational q(num, den);
  q.canonicalize();
  return q;
}

// Parses "p/q", plain integers and decimal literals ("0.5" -> 1/2).
inline Rational parse_rational(const std::string& s) {
  if (s.empty()) throw FormatError("empty rational literal");
  std::string t = s;
  auto dot = t.find('.');
  if (dot != std::string::npos) {
    if (t.find('/') != std::string::npos)
      throw FormatError("bad rational literal: " + s);
    std::string digits = t.substr(0, dot) + t.substr(dot + 1);
    std::string denom = "1" + std::string(t.size() - dot - 1, '0');
    t = digits + "/" + denom;
  }
  mpq_class q;
  if (q.set_str(t, 10) != 0) throw FormatError("bad rational literal: " + s);
  q.canonicalize();
  return q;
}

inline std::string to_string(const Rational& q) { return q.get_str(); }

}  // namespace tcs
