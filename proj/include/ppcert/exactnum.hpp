#pragma once

// Exact arithmetic in real multi-quadratic fields Q(sqrt(m_1),...,sqrt(m_k)).
//
// A value is stored as a rational coordinate vector over the 2^k basis
// {prod_{i in S} sqrt(m_i) : S subset of {1..k}}, indexed by bitmask.  The
// radicals m_i are squarefree, pairwise distinct, sorted, and kept
// multiplicatively independent modulo squares, which makes the basis a
// genuine Q-basis: a value is zero iff every coordinate is zero.  Sign
// determination therefore terminates: symbolic zero is a coordinate check,
// and any nonzero value is separated from zero by a dyadic interval
// refinement of the radicals.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppcert/error.hpp"
#include "ppcert/numeric.hpp"

namespace ppcert::exactnum {

constexpr std::size_t kMaxRadicals = 4;

class FieldTag {
public:
  FieldTag() = default;

  // Radicals must already be squarefree, > 1, sorted, independent; use
  // adjoin_sqrt to build tags from untrusted input.
  static FieldTag from_checked(std::vector<Int> radicals) {
    FieldTag t;
    t.radicals_ = std::move(radicals);
    return t;
  }

  const std::vector<Int>& radicals() const { return radicals_; }
  std::size_t size() const { return radicals_.size(); }
  std::size_t dim() const { return std::size_t{1} << radicals_.size(); }

  bool operator==(const FieldTag& o) const { return radicals_ == o.radicals_; }
  bool operator!=(const FieldTag& o) const { return !(*this == o); }

  std::optional<std::size_t> index_of(const Int& m) const {
    for (std::size_t i = 0; i < radicals_.size(); ++i)
      if (radicals_[i] == m) return i;
    return std::nullopt;
  }

  // Product of the radicals selected by mask.
  Int subset_product(std::size_t mask) const {
    Int p = 1;
    for (std::size_t i = 0; i < radicals_.size(); ++i)
      if (mask & (std::size_t{1} << i)) p *= radicals_[i];
    return p;
  }

  // If sqrt(m) lies in this field (m squarefree), returns (mask, t) with
  // sqrt(m) = (t / subset_product(mask)) * basis(mask) ... equivalently
  // m * subset_product(mask) = t^2.
  std::optional<std::pair<std::size_t, Int>> represent_sqrt(const Int& m) const {
    for (std::size_t mask = 0; mask < dim(); ++mask) {
      Int prod = subset_product(mask) * m;
      Int root;
      if (is_perfect_square(prod, &root)) return std::make_pair(mask, root);
    }
    return std::nullopt;
  }

private:
  std::vector<Int> radicals_;
};

// adjoin_sqrt(tag, m): the join Q(tag, sqrt(m)).  Idempotent when sqrt(m)
// is already representable (this covers both "m present" and products such
// as sqrt(6) over Q(sqrt(2),sqrt(3))); otherwise the dimension doubles.
inline FieldTag adjoin_sqrt(const FieldTag& tag, const Int& m) {
  if (m <= 1) throw input_error("NotSquarefree", "radicand must be > 1, got " + m.str());
  if (!is_squarefree(m))
    throw input_error("NotSquarefree", m.str() + " is not squarefree");
  if (tag.represent_sqrt(m)) return tag;
  if (tag.size() + 1 > kMaxRadicals)
    throw unsupported_error("UnsupportedField",
                            "more than " + std::to_string(kMaxRadicals) +
                                " independent radicals required");
  std::vector<Int> rads = tag.radicals();
  rads.push_back(m);
  std::sort(rads.begin(), rads.end());
  return FieldTag::from_checked(std::move(rads));
}

inline FieldTag join(const FieldTag& a, const FieldTag& b) {
  FieldTag t = a;
  for (const auto& m : b.radicals()) t = adjoin_sqrt(t, m);
  return t;
}

class AlgebraicNumber {
public:
  AlgebraicNumber() : coords_(1, Rat(0)) {}
  /*implicit*/ AlgebraicNumber(const Rat& r) : coords_(1, r) { normalize(); }
  /*implicit*/ AlgebraicNumber(const Int& n) : coords_(1, Rat(n)) { normalize(); }
  /*implicit*/ AlgebraicNumber(long n) : coords_(1, Rat(n)) { normalize(); }
  /*implicit*/ AlgebraicNumber(int n) : coords_(1, Rat(n)) { normalize(); }

  AlgebraicNumber(FieldTag tag, std::vector<Rat> coords)
      : tag_(std::move(tag)), coords_(std::move(coords)) {
    if (coords_.size() != tag_.dim())
      throw input_error("BadCoords", "coordinate vector does not match field dimension");
    normalize();
  }

  // sqrt(n) for integer n >= 0, in the smallest field containing it.
  static AlgebraicNumber sqrt_of(const Int& n) {
    if (n < 0) throw unsupported_error("UnsupportedField", "sqrt of negative integer");
    if (n == 0) return AlgebraicNumber();
    auto [m, s] = squarefree_decompose(n);
    if (m == 1) return AlgebraicNumber(Rat(s));
    FieldTag tag = adjoin_sqrt(FieldTag(), m);
    std::vector<Rat> c(tag.dim(), Rat(0));
    c[1] = Rat(s);
    return AlgebraicNumber(std::move(tag), std::move(c));
  }

  const FieldTag& tag() const { return tag_; }
  const std::vector<Rat>& coords() const { return coords_; }

  bool is_zero() const {
    for (const auto& c : coords_)
      if (c != 0) return false;
    return true;
  }

  bool is_rational() const { return tag_.size() == 0; }

  Rat as_rational() const {
    if (!is_rational())
      throw input_error("NotRational", "value has irrational part: " + to_string());
    return coords_[0];
  }

  bool operator==(const AlgebraicNumber& o) const {
    // Normalization makes representations canonical per value.
    return tag_ == o.tag_ && coords_ == o.coords_;
  }
  bool operator!=(const AlgebraicNumber& o) const { return !(*this == o); }

  AlgebraicNumber operator-() const {
    AlgebraicNumber r = *this;
    for (auto& c : r.coords_) c = -c;
    return r;
  }

  friend AlgebraicNumber operator+(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    FieldTag t = join(a.tag_, b.tag_);
    std::vector<Rat> ca = a.embedded(t), cb = b.embedded(t);
    for (std::size_t i = 0; i < ca.size(); ++i) ca[i] += cb[i];
    return AlgebraicNumber(std::move(t), std::move(ca));
  }

  friend AlgebraicNumber operator-(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a + (-b);
  }

  friend AlgebraicNumber operator*(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    FieldTag t = join(a.tag_, b.tag_);
    std::vector<Rat> ca = a.embedded(t), cb = b.embedded(t);
    std::vector<Rat> out(t.dim(), Rat(0));
    for (std::size_t s = 0; s < ca.size(); ++s) {
      if (ca[s] == 0) continue;
      for (std::size_t u = 0; u < cb.size(); ++u) {
        if (cb[u] == 0) continue;
        // basis(s) * basis(u) = prod_{i in s&u} m_i * basis(s^u)
        Rat factor = Rat(t.subset_product(s & u));
        out[s ^ u] += ca[s] * cb[u] * factor;
      }
    }
    return AlgebraicNumber(std::move(t), std::move(out));
  }

  AlgebraicNumber& operator+=(const AlgebraicNumber& o) { return *this = *this + o; }
  AlgebraicNumber& operator-=(const AlgebraicNumber& o) { return *this = *this - o; }
  AlgebraicNumber& operator*=(const AlgebraicNumber& o) { return *this = *this * o; }

  AlgebraicNumber invert() const {
    if (is_zero()) throw input_error("DivisionByZero", "invert(0)");
    return invert_impl(tag_, coords_, tag_.size());
  }

  friend AlgebraicNumber operator/(const AlgebraicNumber& a, const AlgebraicNumber& b) {
    return a * b.invert();
  }

  AlgebraicNumber pow(unsigned e) const {
    AlgebraicNumber acc(Rat(1)), base = *this;
    while (e > 0) {
      if (e & 1) acc = acc * base;
      base = base * base;
      e >>= 1;
    }
    return acc;
  }

  // Exact sign: symbolic zero first, then dyadic interval refinement.
  int sign() const {
    if (is_zero()) return 0;
    for (unsigned prec = 32;; prec *= 2) {
      auto [lo, hi] = enclose_dyadic(prec);
      if (lo > 0) return 1;
      if (hi < 0) return -1;
      if (prec > 1u << 20)
        throw Error("SignRefinementStall", "interval refinement failed to separate from zero");
    }
  }

  AlgebraicNumber abs() const { return sign() < 0 ? -*this : *this; }

  int compare(const AlgebraicNumber& o) const { return (*this - o).sign(); }
  bool operator<(const AlgebraicNumber& o) const { return compare(o) < 0; }
  bool operator<=(const AlgebraicNumber& o) const { return compare(o) <= 0; }
  bool operator>(const AlgebraicNumber& o) const { return compare(o) > 0; }
  bool operator>=(const AlgebraicNumber& o) const { return compare(o) >= 0; }

  // Interval [lo, hi] containing the value, of width <= 2^-prec * L1-ish;
  // used by enclose() below which refines to a requested width.
  std::pair<Rat, Rat> enclose_dyadic(unsigned prec) const {
    Rat lo(0), hi(0);
    Int scale = Int(1) << prec;
    for (std::size_t s = 0; s < coords_.size(); ++s) {
      if (coords_[s] == 0) continue;
      if (s == 0) {
        lo += coords_[0];
        hi += coords_[0];
        continue;
      }
      Int p = tag_.subset_product(s);
      // sqrt(p) in [r/2^prec, (r+1)/2^prec]
      Int r = isqrt(p * scale * scale);
      Rat slo = make_rat(r, scale), shi = make_rat(r + 1, scale);
      if (coords_[s] > 0) {
        lo += coords_[s] * slo;
        hi += coords_[s] * shi;
      } else {
        lo += coords_[s] * shi;
        hi += coords_[s] * slo;
      }
    }
    return {lo, hi};
  }

  std::string to_string() const;

  // Rational lower/upper bounds within a given width of the true value.
  Rat lower_bound(const Rat& width) const;
  Rat upper_bound(const Rat& width) const;

private:
  // Coordinates of this value in a (super)field `t`.
  std::vector<Rat> embedded(const FieldTag& t) const {
    if (t == tag_) return coords_;
    std::vector<Rat> out(t.dim(), Rat(0));
    for (std::size_t s = 0; s < coords_.size(); ++s) {
      if (coords_[s] == 0) continue;
      Int p = tag_.subset_product(s);
      auto [m, sq] = squarefree_decompose(p == 1 ? Int(1) : p);
      if (p == 1) {
        out[0] += coords_[s];
        continue;
      }
      auto rep = t.represent_sqrt(m);
      if (!rep)
        throw unsupported_error("UnsupportedField",
                                "cannot embed sqrt(" + m.str() + ") into target field");
      auto [mask, troot] = *rep;
      // sqrt(p) = sq * sqrt(m) = sq * troot / subset_product(mask) * basis(mask)
      out[mask] += coords_[s] * make_rat(sq * troot, t.subset_product(mask));
    }
    return out;
  }

  static AlgebraicNumber invert_impl(const FieldTag& tag, const std::vector<Rat>& coords,
                                     std::size_t level) {
    if (level == 0) {
      if (coords[0] == 0) throw input_error("DivisionByZero", "invert(0)");
      return AlgebraicNumber(Rat(1) / coords[0]);
    }
    // Split a = x + y*sqrt(m) over the subfield without the last radical;
    // then 1/a = (x - y*sqrt(m)) / (x^2 - m*y^2), with the denominator in
    // the subfield (nonzero by radical independence).
    std::size_t bit = std::size_t{1} << (level - 1);
    FieldTag sub = FieldTag::from_checked(std::vector<Int>(
        tag.radicals().begin(), tag.radicals().begin() + (level - 1)));
    std::vector<Rat> x(sub.dim()), y(sub.dim());
    for (std::size_t s = 0; s < sub.dim(); ++s) {
      x[s] = coords[s];
      y[s] = coords[s | bit];
    }
    AlgebraicNumber ax(sub, x), ay(sub, y);
    AlgebraicNumber m_rad(Rat(tag.radicals()[level - 1]));
    AlgebraicNumber denom = ax * ax - m_rad * ay * ay;
    AlgebraicNumber dinv = denom.invert();  // recurses within the subfield
    AlgebraicNumber nx = ax * dinv, ny = (-ay) * dinv;
    // Reassemble in the full field.
    std::vector<Rat> out(tag.dim(), Rat(0));
    std::vector<Rat> nxc = nx.embedded(sub), nyc = ny.embedded(sub);
    for (std::size_t s = 0; s < sub.dim(); ++s) {
      out[s] = nxc[s];
      out[s | bit] = nyc[s];
    }
    return AlgebraicNumber(tag, out);
  }

  // Canonical form.  Over any valid basis a value decomposes uniquely as
  // sum of c * sqrt(m) with m squarefree (the sqrt(m) are linearly
  // independent over Q), so we extract those terms, rebuild the smallest
  // generating set greedily from the sorted radicands, and re-embed.  Equal
  // values then have identical (tag, coords) pairs.
  void normalize() {
    if (tag_.size() == 0) return;
    std::map<Int, Rat> terms;  // squarefree radicand -> coefficient
    for (std::size_t s = 0; s < coords_.size(); ++s) {
      if (coords_[s] == 0) continue;
      if (s == 0) {
        terms[Int(1)] += coords_[0];
        continue;
      }
      auto [m, sq] = squarefree_decompose(tag_.subset_product(s));
      terms[m] += coords_[s] * Rat(sq);
    }
    for (auto it = terms.begin(); it != terms.end();)
      it = (it->second == 0) ? terms.erase(it) : std::next(it);

    FieldTag nt;
    for (const auto& [m, c] : terms)
      if (m != 1) nt = adjoin_sqrt(nt, m);
    std::vector<Rat> nc(nt.dim(), Rat(0));
    for (const auto& [m, c] : terms) {
      if (m == 1) {
        nc[0] = c;
        continue;
      }
      auto rep = nt.represent_sqrt(m);
      auto [mask, t] = *rep;  // m * subset_product(mask) = t^2
      nc[mask] += c * make_rat(t, nt.subset_product(mask));
    }
    tag_ = std::move(nt);
    coords_ = std::move(nc);
  }

  FieldTag tag_;
  std::vector<Rat> coords_;
};

struct RationalInterval {
  Rat lo, hi;
  Rat width() const { return hi - lo; }
  bool contains(const Rat& v) const { return lo <= v && v <= hi; }
};

// Interval of width <= `width` containing the exact value; deterministic
// (fixed precision doubling schedule, nested dyadic bounds).
inline RationalInterval enclose(const AlgebraicNumber& a, const Rat& width) {
  if (width <= 0) throw input_error("BadWidth", "enclose() needs width > 0");
  if (a.is_zero()) return {Rat(0), Rat(0)};
  for (unsigned prec = 32;; prec *= 2) {
    auto [lo, hi] = a.enclose_dyadic(prec);
    if (hi - lo <= width) return {lo, hi};
    if (prec > 1u << 20) throw Error("EncloseStall", "interval refinement stalled");
  }
}

inline Rat AlgebraicNumber::lower_bound(const Rat& width) const {
  return enclose(*this, width).lo;
}
inline Rat AlgebraicNumber::upper_bound(const Rat& width) const {
  return enclose(*this, width).hi;
}

// --- text rendering and parsing --------------------------------------------
//
// Values print as "a + b√m + c√m' ...", rationals as "p/q", e.g.
// "3/2 + 1/2√5" or "2 - √3".  Radicands in the output are squarefree.

inline std::string AlgebraicNumber::to_string() const {
  // Collect (squarefree radicand, coefficient) terms.
  std::vector<std::pair<Int, Rat>> terms;
  for (std::size_t s = 0; s < coords_.size(); ++s) {
    if (coords_[s] == 0) continue;
    if (s == 0) {
      terms.emplace_back(Int(1), coords_[0]);
      continue;
    }
    auto [m, sq] = squarefree_decompose(tag_.subset_product(s));
    terms.emplace_back(m, coords_[s] * Rat(sq));
  }
  if (terms.empty()) return "0";
  std::sort(terms.begin(), terms.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::string out;
  bool first = true;
  for (const auto& [m, c] : terms) {
    Rat a = rat_abs(c);
    std::string mag;
    if (m == 1) {
      mag = rat_to_string(a);
    } else if (a == 1) {
      mag = "√" + m.str();
    } else {
      mag = rat_to_string(a) + "√" + m.str();
    }
    if (first) {
      out = (c < 0 ? "-" : "") + mag;
      first = false;
    } else {
      out += (c < 0 ? " - " : " + ") + mag;
    }
  }
  return out;
}

namespace detail {

struct Parser {
  const std::string& s;
  std::size_t i = 0;

  explicit Parser(const std::string& str) : s(str) {}

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
  }

  bool eat(char c) {
    skip_ws();
    if (i < s.size() && s[i] == c) {
      ++i;
      return true;
    }
    return false;
  }

  bool eat_sqrt() {
    skip_ws();
    if (s.compare(i, 3, "√") == 0) {  // UTF-8 for the radical sign
      i += 3;
      return true;
    }
    if (s.compare(i, 5, "sqrt(") == 0) {
      i += 5;
      digits_paren_ = true;
      return true;
    }
    return false;
  }

  Int parse_int() {
    skip_ws();
    std::size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (i == start) throw input_error("ParseError", "expected digits at position " +
                                                         std::to_string(start) + " in '" + s + "'");
    return Int(s.substr(start, i - start));
  }

  Rat parse_rat_magnitude() {
    Int num = parse_int();
    if (eat('/')) {
      Int den = parse_int();
      if (den == 0) throw input_error("ParseError", "zero denominator in '" + s + "'");
      return make_rat(num, den);
    }
    return Rat(num);
  }

  AlgebraicNumber parse_term() {
    skip_ws();
    if (eat_sqrt()) {
      Int m = parse_int();
      if (digits_paren_) {
        if (!eat(')')) throw input_error("ParseError", "missing ')' in '" + s + "'");
        digits_paren_ = false;
      }
      return AlgebraicNumber::sqrt_of(m);
    }
    Rat c = parse_rat_magnitude();
    if (eat_sqrt()) {
      Int m = parse_int();
      if (digits_paren_) {
        if (!eat(')')) throw input_error("ParseError", "missing ')' in '" + s + "'");
        digits_paren_ = false;
      }
      return AlgebraicNumber(c) * AlgebraicNumber::sqrt_of(m);
    }
    return AlgebraicNumber(c);
  }

  AlgebraicNumber parse() {
    skip_ws();
    bool neg = false;
    if (eat('-'))
      neg = true;
    else
      eat('+');
    AlgebraicNumber acc = parse_term();
    if (neg) acc = -acc;
    while (true) {
      skip_ws();
      if (i >= s.size()) break;
      if (eat('+')) {
        acc += parse_term();
      } else if (eat('-')) {
        acc -= parse_term();
      } else {
        throw input_error("ParseError", "unexpected character at position " +
                                            std::to_string(i) + " in '" + s + "'");
      }
    }
    return acc;
  }

private:
  bool digits_paren_ = false;
};

}  // namespace detail

inline AlgebraicNumber parse_algebraic(const std::string& text) {
  detail::Parser p(text);
  return p.parse();
}

}  // namespace ppcert::exactnum
