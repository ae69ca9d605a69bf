#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ppcert/error.hpp"

namespace ppcert {

// Expression templates are disabled so that values behave like plain
// arithmetic types inside generic code.
namespace mp = boost::multiprecision;
using Int = mp::number<mp::cpp_int_backend<>, mp::et_off>;
using Rat = mp::number<mp::rational_adaptor<mp::cpp_int_backend<>>, mp::et_off>;

inline Rat make_rat(const Int& num, const Int& den) {
  if (den == 0) throw input_error("DivisionByZero", "rational with denominator 0");
  Rat r(num);
  r /= Rat(den);
  return r;
}

inline Int rat_num(const Rat& r) { return numerator(r); }
inline Int rat_den(const Rat& r) { return denominator(r); }

// floor(sqrt(n)) for n >= 0.
inline Int isqrt(const Int& n) {
  if (n < 0) throw input_error("NegativeSqrt", "isqrt of negative integer");
  return sqrt(n);
}

inline bool is_perfect_square(const Int& n, Int* root = nullptr) {
  if (n < 0) return false;
  Int r = isqrt(n);
  if (r * r == n) {
    if (root) *root = r;
    return true;
  }
  return false;
}

// n = square * squarefree, returned as (squarefree, square_root).
// Trial division with a memo cache: the call sites hit the same radicand
// products over and over.
inline std::pair<Int, Int> squarefree_decompose(Int n) {
  if (n <= 0) throw input_error("NotSquarefree", "squarefree part of non-positive integer");
  thread_local std::map<Int, std::pair<Int, Int>> cache;
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;
  const Int key = n;
  Int sqpart = 1;
  Int m = 1;
  for (Int p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    int e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    for (int i = 0; i + 1 < e; i += 2) sqpart *= p;
    if (e % 2 == 1) m *= p;
  }
  m *= n;  // leftover prime
  auto result = std::make_pair(m, sqpart);
  cache[key] = result;
  return result;
}

inline bool is_squarefree(const Int& n) {
  if (n <= 1) return false;
  auto [m, s] = squarefree_decompose(n);
  return s == 1;
}

inline std::string rat_to_string(const Rat& r) {
  Int n = rat_num(r), d = rat_den(r);
  if (d == 1) return n.str();
  return n.str() + "/" + d.str();
}

// Extended gcd: returns g = gcd(a,b) >= 0 and x, y with a*x + b*y = g.
inline Int xgcd(const Int& a, const Int& b, Int& x, Int& y) {
  if (b == 0) {
    if (a < 0) {
      x = -1;
      y = 0;
      return -a;
    }
    x = 1;
    y = 0;
    return a;
  }
  Int x1, y1;
  Int g = xgcd(b, a % b, x1, y1);
  x = y1;
  y = x1 - (a / b) * y1;
  return g;
}

inline Int gcd_vec(const std::vector<Int>& v) {
  Int g = 0;
  for (const auto& x : v) g = gcd(g, x);
  return g < 0 ? Int(-g) : g;
}

inline int sign_of_rat(const Rat& r) {
  if (r > 0) return 1;
  if (r < 0) return -1;
  return 0;
}

inline Rat rat_abs(const Rat& r) { return r < 0 ? Rat(-r) : r; }

// Largest multiple of 1/denominator_cap that is <= r (assumes r > 0).
inline Rat round_down_denominator(const Rat& r, const Int& denominator_cap) {
  Int num = rat_num(r) * denominator_cap;
  Int den = rat_den(r);
  Int q = num / den;  // floor for positive values
  return make_rat(q, denominator_cap);
}

}  // namespace ppcert
