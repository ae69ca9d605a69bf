#pragma once

// Exact linear algebra over Z, Q, and real multi-quadratic fields: the
// matrix carriers for everything downstream, characteristic polynomials and
// their factorization into degree <= 2 pieces, exact eigen-decomposition,
// Smith normal form with transforms, and primitive-vector extension.

#include <algorithm>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppcert/error.hpp"
#include "ppcert/exactnum.hpp"
#include "ppcert/numeric.hpp"

namespace ppcert::matqz {

using exactnum::AlgebraicNumber;
using exactnum::FieldTag;

// --- integer matrices -------------------------------------------------------

class IntMatrix {
public:
  IntMatrix() : n_(0) {}
  explicit IntMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n, Int(0)) {}
  IntMatrix(int n, std::vector<Int> entries) : n_(n), e_(std::move(entries)) {
    if (e_.size() != static_cast<std::size_t>(n) * n)
      throw input_error("BadMatrix", "entry count does not match dimension");
  }

  static IntMatrix identity(int n) {
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  // Row-major literal helper.
  static IntMatrix from_rows(const std::vector<std::vector<long>>& rows) {
    int n = static_cast<int>(rows.size());
    IntMatrix m(n);
    for (int i = 0; i < n; ++i) {
      if (static_cast<int>(rows[i].size()) != n)
        throw input_error("BadMatrix", "ragged rows");
      for (int j = 0; j < n; ++j) m.at(i, j) = rows[i][j];
    }
    return m;
  }

  int n() const { return n_; }
  Int& at(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const Int& at(int i, int j) const { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const std::vector<Int>& entries() const { return e_; }

  bool operator==(const IntMatrix& o) const { return n_ == o.n_ && e_ == o.e_; }
  bool operator!=(const IntMatrix& o) const { return !(*this == o); }

  bool is_identity() const { return *this == identity(n_); }

  IntMatrix transpose() const {
    IntMatrix t(n_);
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  friend IntMatrix operator*(const IntMatrix& a, const IntMatrix& b) {
    if (a.n_ != b.n_) throw input_error("BadMatrix", "dimension mismatch");
    IntMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int k = 0; k < a.n_; ++k) {
        const Int& aik = a.at(i, k);
        if (aik == 0) continue;
        for (int j = 0; j < a.n_; ++j) c.at(i, j) += aik * b.at(k, j);
      }
    return c;
  }

  friend IntMatrix operator+(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] + b.e_[i];
    return c;
  }

  friend IntMatrix operator-(const IntMatrix& a, const IntMatrix& b) {
    IntMatrix c(a.n_);
    for (std::size_t i = 0; i < a.e_.size(); ++i) c.e_[i] = a.e_[i] - b.e_[i];
    return c;
  }

  IntMatrix operator-() const {
    IntMatrix c(n_);
    for (std::size_t i = 0; i < e_.size(); ++i) c.e_[i] = -e_[i];
    return c;
  }

  std::vector<Int> apply(const std::vector<Int>& v) const {
    std::vector<Int> r(n_, Int(0));
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) r[i] += at(i, j) * v[j];
    return r;
  }

  IntMatrix pow(unsigned k) const {
    IntMatrix acc = identity(n_), base = *this;
    while (k > 0) {
      if (k & 1) acc = acc * base;
      base = base * base;
      k >>= 1;
    }
    return acc;
  }

  std::string to_string() const {
    std::string s;
    for (int i = 0; i < n_; ++i) {
      for (int j = 0; j < n_; ++j) {
        if (j) s += ' ';
        s += at(i, j).str();
      }
      s += '\n';
    }
    return s;
  }

private:
  int n_;
  std::vector<Int> e_;
};

// --- matrices over the field -------------------------------------------------

class FieldMatrix {
public:
  FieldMatrix() : n_(0) {}
  explicit FieldMatrix(int n) : n_(n), e_(static_cast<std::size_t>(n) * n) {}

  static FieldMatrix from_int(const IntMatrix& m) {
    FieldMatrix f(m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) f.at(i, j) = AlgebraicNumber(Rat(m.at(i, j)));
    return f;
  }

  static FieldMatrix identity(int n) {
    FieldMatrix m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = AlgebraicNumber(1);
    return m;
  }

  int n() const { return n_; }
  AlgebraicNumber& at(int i, int j) { return e_[static_cast<std::size_t>(i) * n_ + j]; }
  const AlgebraicNumber& at(int i, int j) const {
    return e_[static_cast<std::size_t>(i) * n_ + j];
  }

  bool operator==(const FieldMatrix& o) const {
    if (n_ != o.n_) return false;
    for (std::size_t i = 0; i < e_.size(); ++i)
      if (e_[i] != o.e_[i]) return false;
    return true;
  }

  friend FieldMatrix operator*(const FieldMatrix& a, const FieldMatrix& b) {
    if (a.n_ != b.n_) throw input_error("BadMatrix", "dimension mismatch");
    FieldMatrix c(a.n_);
    for (int i = 0; i < a.n_; ++i)
      for (int j = 0; j < a.n_; ++j) {
        AlgebraicNumber s;
        for (int k = 0; k < a.n_; ++k) s += a.at(i, k) * b.at(k, j);
        c.at(i, j) = s;
      }
    return c;
  }

  std::vector<AlgebraicNumber> apply(const std::vector<AlgebraicNumber>& v) const {
    std::vector<AlgebraicNumber> r(n_);
    for (int i = 0; i < n_; ++i) {
      AlgebraicNumber s;
      for (int j = 0; j < n_; ++j) s += at(i, j) * v[j];
      r[i] = s;
    }
    return r;
  }

private:
  int n_;
  std::vector<AlgebraicNumber> e_;
};

// --- determinants ------------------------------------------------------------

// Cofactor expansion; dimensions here are <= 6.
inline Int det(const IntMatrix& m) {
  int n = m.n();
  if (n == 0) return Int(1);
  if (n == 1) return m.at(0, 0);
  if (n == 2) return m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0);
  Int acc(0);
  for (int j = 0; j < n; ++j) {
    if (m.at(0, j) == 0) continue;
    IntMatrix sub(n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        sub.at(r - 1, cc++) = m.at(r, c);
      }
    }
    Int term = m.at(0, j) * det(sub);
    acc += (j % 2 == 0) ? term : Int(-term);
  }
  return acc;
}

inline AlgebraicNumber det(const FieldMatrix& m) {
  int n = m.n();
  if (n == 0) return AlgebraicNumber(1);
  if (n == 1) return m.at(0, 0);
  AlgebraicNumber acc;
  for (int j = 0; j < n; ++j) {
    if (m.at(0, j).is_zero()) continue;
    FieldMatrix sub(n - 1);
    for (int r = 1; r < n; ++r) {
      int cc = 0;
      for (int c = 0; c < n; ++c) {
        if (c == j) continue;
        sub.at(r - 1, cc++) = m.at(r, c);
      }
    }
    AlgebraicNumber term = m.at(0, j) * det(sub);
    acc += (j % 2 == 0) ? term : -term;
  }
  return acc;
}

// Adjugate: adj(M) * M = det(M) * I; integer inverse transport for
// unimodular matrices.
inline IntMatrix adjugate(const IntMatrix& m) {
  int n = m.n();
  IntMatrix a(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      IntMatrix sub(n - 1);
      int rr = 0;
      for (int r = 0; r < n; ++r) {
        if (r == j) continue;
        int cc = 0;
        for (int c = 0; c < n; ++c) {
          if (c == i) continue;
          sub.at(rr, cc++) = m.at(r, c);
        }
        ++rr;
      }
      Int cof = det(sub);
      a.at(i, j) = ((i + j) % 2 == 0) ? cof : Int(-cof);
    }
  return a;
}

// Inverse of a matrix with det = +-1.
inline IntMatrix unimodular_inverse(const IntMatrix& m) {
  Int d = det(m);
  if (d != 1 && d != -1)
    throw input_error("NotUnimodular", "inverse requested for det " + d.str());
  IntMatrix a = adjugate(m);
  if (d == -1)
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) a.at(i, j) = -a.at(i, j);
  return a;
}

inline bool is_orthogonal(const IntMatrix& m) {
  return m.transpose() * m == IntMatrix::identity(m.n());
}

// --- polynomials over Q ------------------------------------------------------

class RatPolynomial {
public:
  RatPolynomial() : c_{Rat(0)} {}
  explicit RatPolynomial(std::vector<Rat> coeffs) : c_(std::move(coeffs)) { trim(); }

  static RatPolynomial from_ints(const std::vector<long>& coeffs) {
    std::vector<Rat> c;
    c.reserve(coeffs.size());
    for (long x : coeffs) c.emplace_back(x);
    return RatPolynomial(std::move(c));
  }

  // x - r
  static RatPolynomial linear(const Rat& r) { return RatPolynomial({-r, Rat(1)}); }

  const std::vector<Rat>& coeffs() const { return c_; }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  bool is_zero() const { return c_.size() == 1 && c_[0] == 0; }
  const Rat& leading() const { return c_.back(); }
  bool is_monic() const { return c_.back() == 1; }

  bool operator==(const RatPolynomial& o) const { return c_ == o.c_; }

  Rat eval(const Rat& x) const {
    Rat acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  friend RatPolynomial operator*(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rat> c(a.c_.size() + b.c_.size() - 1, Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j) c[i + j] += a.c_[i] * b.c_[j];
    return RatPolynomial(std::move(c));
  }

  friend RatPolynomial operator+(const RatPolynomial& a, const RatPolynomial& b) {
    std::vector<Rat> c(std::max(a.c_.size(), b.c_.size()), Rat(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] += a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] += b.c_[i];
    return RatPolynomial(std::move(c));
  }

  // Quotient of exact division by (x - r); throws if r is not a root.
  RatPolynomial divide_linear(const Rat& r) const {
    std::vector<Rat> q(c_.size() - 1, Rat(0));
    Rat carry(0);
    for (int i = degree(); i >= 1; --i) {
      carry = carry * r + c_[i];
      q[i - 1] = carry;
    }
    if (carry * r + c_[0] != 0)
      throw input_error("NotARoot", "exact division by non-root");
    return RatPolynomial(std::move(q));
  }

  std::string to_string() const {
    std::string s;
    for (int i = degree(); i >= 0; --i) {
      if (c_[i] == 0 && degree() > 0) continue;
      if (!s.empty()) s += (c_[i] > 0) ? " + " : " - ";
      Rat a = (s.empty()) ? c_[i] : rat_abs(c_[i]);
      std::string coeff = rat_to_string(a);
      if (i == 0) {
        s += coeff;
      } else {
        if (a == 1)
          s += "";
        else if (a == -1)
          s += "-";
        else
          s += coeff;
        s += "x";
        if (i > 1) s += "^" + std::to_string(i);
      }
    }
    return s.empty() ? "0" : s;
  }

private:
  void trim() {
    while (c_.size() > 1 && c_.back() == 0) c_.pop_back();
    if (c_.empty()) c_.push_back(Rat(0));
  }
  std::vector<Rat> c_;
};

// Characteristic polynomial via the Faddeev-LeVerrier recursion (exact over Q).
inline RatPolynomial charpoly(const IntMatrix& m) {
  int n = m.n();
  std::vector<Rat> c(n + 1, Rat(0));
  c[n] = 1;
  // M_1 = M, c_{n-k} = -tr(M_k)/k, M_{k+1} = M*(M_k + c_{n-k} I)
  std::vector<std::vector<Rat>> mk(n, std::vector<Rat>(n, Rat(0)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) mk[i][j] = Rat(m.at(i, j));
  for (int k = 1; k <= n; ++k) {
    Rat tr(0);
    for (int i = 0; i < n; ++i) tr += mk[i][i];
    c[n - k] = -tr / k;
    if (k == n) break;
    for (int i = 0; i < n; ++i) mk[i][i] += c[n - k];
    std::vector<std::vector<Rat>> next(n, std::vector<Rat>(n, Rat(0)));
    for (int i = 0; i < n; ++i)
      for (int l = 0; l < n; ++l) {
        Rat mil = Rat(m.at(i, l));
        if (mil == 0) continue;
        for (int j = 0; j < n; ++j) next[i][j] += mil * mk[l][j];
      }
    mk = std::move(next);
  }
  return RatPolynomial(std::move(c));
}

// --- factorization of monic charpolys (degree <= 4) -------------------------

struct CharpolyFactor {
  RatPolynomial poly;
  int multiplicity = 1;
  bool high_degree = false;  // degree >= 3, left unfactored (flagged)
};

namespace detail {

inline std::vector<Int> divisors_with_sign(const Int& n) {
  std::vector<Int> out;
  Int a = n < 0 ? Int(-n) : n;
  for (Int d = 1; d * d <= a; ++d) {
    if (a % d != 0) continue;
    out.push_back(d);
    out.push_back(-d);
    if (d * d != a) {
      out.push_back(a / d);
      out.push_back(-(a / d));
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace detail

// Factor a monic integer-coefficient polynomial of degree <= 4 into monic
// irreducible factors over Q: strip integer roots (rational roots of a
// monic integer polynomial are integers), then for a residual quartic
// search for an integer quadratic factor pair with coefficients bounded via
// the Cauchy root bound.  Residual cubics/quartics with no such split are
// irreducible and returned flagged.
inline std::vector<CharpolyFactor> factor_charpoly(const RatPolynomial& p) {
  if (!p.is_monic()) throw input_error("NotMonic", "factor_charpoly requires monic input");
  if (p.degree() > 4)
    throw unsupported_error("UnsupportedField", "factorization implemented for degree <= 4");
  for (const Rat& c : p.coeffs())
    if (rat_den(c) != 1)
      throw unsupported_error("UnsupportedField",
                              "factorization implemented for integer coefficients");

  std::vector<CharpolyFactor> out;
  RatPolynomial rest = p;

  auto push_factor = [&out](const RatPolynomial& f, bool flagged) {
    for (auto& g : out) {
      if (g.poly == f) {
        ++g.multiplicity;
        return;
      }
    }
    out.push_back({f, 1, flagged});
  };

  // Integer roots, with multiplicity.
  bool progress = true;
  while (progress && rest.degree() >= 1) {
    progress = false;
    Rat c0 = rest.coeffs()[0];
    if (c0 == 0) {
      rest = rest.divide_linear(Rat(0));
      push_factor(RatPolynomial::linear(Rat(0)), false);
      progress = true;
      continue;
    }
    for (const Int& d : detail::divisors_with_sign(rat_num(c0))) {
      if (rest.eval(Rat(d)) == 0) {
        rest = rest.divide_linear(Rat(d));
        push_factor(RatPolynomial::linear(Rat(d)), false);
        progress = true;
        break;
      }
    }
  }

  if (rest.degree() == 2) {
    // No integer roots remain, so an integer monic quadratic is irreducible.
    push_factor(rest, false);
  } else if (rest.degree() == 3) {
    push_factor(rest, true);
  } else if (rest.degree() == 4) {
    // (x^2+px+q)(x^2+rx+s): q*s = d, p+r = a, q+s+pr = b, ps+qr = c.
    Int a = rat_num(rest.coeffs()[3]);
    Int b = rat_num(rest.coeffs()[2]);
    Int c = rat_num(rest.coeffs()[1]);
    Int d = rat_num(rest.coeffs()[0]);
    Int maxc = Int(1);
    for (int i = 0; i < 4; ++i) {
      Int av = rat_num(rat_abs(rest.coeffs()[i]));
      maxc = std::max(maxc, av);
    }
    Int pbound = 2 * (1 + maxc);  // |p| <= 2 * Cauchy root bound
    bool found = false;
    for (const Int& q : detail::divisors_with_sign(d)) {
      Int s = d / q;
      for (Int pp = -pbound; pp <= pbound && !found; ++pp) {
        Int rr = a - pp;
        if (q + s + pp * rr != b) continue;
        if (pp * s + rr * q != c) continue;
        RatPolynomial f1({Rat(q), Rat(pp), Rat(1)});
        RatPolynomial f2({Rat(s), Rat(rr), Rat(1)});
        push_factor(f1, false);
        push_factor(f2, false);
        found = true;
      }
      if (found) break;
    }
    if (!found) push_factor(rest, true);
  }

  // Safety: re-expansion must reproduce the input exactly.
  RatPolynomial check({Rat(1)});
  for (const auto& f : out)
    for (int i = 0; i < f.multiplicity; ++i) check = check * f.poly;
  if (!(check == p)) throw Error("FactorCheckFailed", "re-expansion mismatch");
  return out;
}

// --- eigen decomposition -----------------------------------------------------

// Kernel basis of a FieldMatrix via exact Gaussian elimination.
inline std::vector<std::vector<AlgebraicNumber>> kernel_basis(FieldMatrix m) {
  int n = m.n();
  std::vector<int> pivot_col_of_row;
  int row = 0;
  for (int col = 0; col < n && row < n; ++col) {
    int piv = -1;
    for (int r = row; r < n; ++r) {
      if (!m.at(r, col).is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) continue;
    for (int j = 0; j < n; ++j) std::swap(m.at(piv, j), m.at(row, j));
    AlgebraicNumber inv = m.at(row, col).invert();
    for (int j = 0; j < n; ++j) m.at(row, j) = m.at(row, j) * inv;
    for (int r = 0; r < n; ++r) {
      if (r == row || m.at(r, col).is_zero()) continue;
      AlgebraicNumber f = m.at(r, col);
      for (int j = 0; j < n; ++j) m.at(r, j) = m.at(r, j) - f * m.at(row, j);
    }
    pivot_col_of_row.push_back(col);
    ++row;
  }
  std::vector<bool> is_pivot(n, false);
  for (int c : pivot_col_of_row) is_pivot[c] = true;
  std::vector<std::vector<AlgebraicNumber>> basis;
  for (int freec = 0; freec < n; ++freec) {
    if (is_pivot[freec]) continue;
    std::vector<AlgebraicNumber> v(n);
    v[freec] = AlgebraicNumber(1);
    for (std::size_t r = 0; r < pivot_col_of_row.size(); ++r)
      v[pivot_col_of_row[r]] = -m.at(static_cast<int>(r), freec);
    basis.push_back(std::move(v));
  }
  return basis;
}

// Scale an algebraic vector so all basis coordinates are integers with
// content 1, sign fixed by the first nonzero entry; deterministic.
inline std::vector<AlgebraicNumber> canonicalize_vector(std::vector<AlgebraicNumber> v) {
  // Common denominator over every coordinate of every entry.
  Int den = 1;
  for (const auto& x : v)
    for (const auto& c : x.coords()) den = den / gcd(den, rat_den(c)) * rat_den(c);
  Int content = 0;
  for (const auto& x : v)
    for (const auto& c : x.coords()) content = gcd(content, rat_num(c * Rat(den)));
  if (content == 0) throw input_error("ZeroVector", "cannot canonicalize the zero vector");
  if (content < 0) content = -content;
  Rat scale = make_rat(den, content);
  int lead_sign = 0;
  for (auto& x : v) {
    x = x * AlgebraicNumber(scale);
    if (lead_sign == 0) {
      int s = x.sign();
      if (s != 0) lead_sign = s;
    }
  }
  if (lead_sign < 0)
    for (auto& x : v) x = -x;
  return v;
}

struct EigenDecomposition {
  std::vector<AlgebraicNumber> eigenvalues;  // with multiplicity, descending
  std::vector<std::vector<AlgebraicNumber>> eigenvectors;  // column i for value i
};

// Roots of a monic factor of degree <= 2 over the reals.
inline std::vector<AlgebraicNumber> real_roots(const RatPolynomial& f) {
  if (f.degree() == 1) return {AlgebraicNumber(-f.coeffs()[0])};
  if (f.degree() != 2)
    throw unsupported_error("UnsupportedField",
                            "irreducible factor of degree " + std::to_string(f.degree()));
  Rat p = f.coeffs()[1], q = f.coeffs()[0];
  Rat disc = p * p - 4 * q;
  if (disc <= 0)
    throw unsupported_error("UnsupportedField",
                            "complex quadratic roots (discriminant " + rat_to_string(disc) + ")");
  // sqrt(u/v) = sqrt(u*v)/v
  AlgebraicNumber root_disc =
      AlgebraicNumber::sqrt_of(rat_num(disc) * rat_den(disc)) *
      AlgebraicNumber(make_rat(1, rat_den(disc)));
  AlgebraicNumber half(make_rat(1, 2));
  AlgebraicNumber mp(-p);
  return {(AlgebraicNumber(mp) + root_disc) * half, (AlgebraicNumber(mp) - root_disc) * half};
}

// Exact eigen-decomposition of an integer matrix whose charpoly splits into
// factors of degree <= 2 with real roots.  Verifies M*S = S*diag exactly and
// that every eigenvalue reaches its full geometric multiplicity.
inline EigenDecomposition eigen_decompose(const IntMatrix& m) {
  RatPolynomial p = charpoly(m);
  auto factors = factor_charpoly(p);
  for (const auto& f : factors)
    if (f.high_degree)
      throw unsupported_error("UnsupportedField",
                              "irreducible charpoly factor of degree >= 3: " + f.poly.to_string());

  // Collect (eigenvalue, algebraic multiplicity).
  std::vector<std::pair<AlgebraicNumber, int>> vals;
  for (const auto& f : factors) {
    for (const auto& r : real_roots(f.poly)) {
      bool merged = false;
      for (auto& [v, mult] : vals) {
        if (v == r) {
          mult += f.multiplicity;
          merged = true;
        }
      }
      if (!merged) vals.emplace_back(r, f.multiplicity);
    }
  }
  std::sort(vals.begin(), vals.end(),
            [](const auto& a, const auto& b) { return a.first.compare(b.first) > 0; });

  EigenDecomposition out;
  FieldMatrix fm = FieldMatrix::from_int(m);
  for (const auto& [lambda, mult] : vals) {
    FieldMatrix shifted = fm;
    for (int i = 0; i < m.n(); ++i) shifted.at(i, i) = shifted.at(i, i) - lambda;
    auto kernel = kernel_basis(shifted);
    if (static_cast<int>(kernel.size()) < mult)
      throw unsupported_error(
          "NotDiagonalizable",
          "eigenvalue " + lambda.to_string() + " has geometric multiplicity " +
              std::to_string(kernel.size()) + " < " + std::to_string(mult));
    for (int i = 0; i < mult; ++i) {
      out.eigenvalues.push_back(lambda);
      out.eigenvectors.push_back(canonicalize_vector(kernel[i]));
    }
  }

  // Self-check: M * s = lambda * s for every pair.
  for (std::size_t i = 0; i < out.eigenvalues.size(); ++i) {
    auto img = fm.apply(out.eigenvectors[i]);
    for (int j = 0; j < m.n(); ++j)
      if (img[j] != out.eigenvalues[i] * out.eigenvectors[i][j])
        throw Error("EigenCheckFailed", "M*S != S*diag");
  }
  return out;
}

// --- Smith normal form -------------------------------------------------------

// Rectangular integer matrix, only what SNF needs.
struct RectMatrix {
  int rows = 0, cols = 0;
  std::vector<Int> e;

  RectMatrix() = default;
  RectMatrix(int r, int c) : rows(r), cols(c), e(static_cast<std::size_t>(r) * c, Int(0)) {}
  static RectMatrix from_square(const IntMatrix& m) {
    RectMatrix r(m.n(), m.n());
    for (int i = 0; i < m.n(); ++i)
      for (int j = 0; j < m.n(); ++j) r.at(i, j) = m.at(i, j);
    return r;
  }
  Int& at(int i, int j) { return e[static_cast<std::size_t>(i) * cols + j]; }
  const Int& at(int i, int j) const { return e[static_cast<std::size_t>(i) * cols + j]; }
  bool operator==(const RectMatrix& o) const {
    return rows == o.rows && cols == o.cols && e == o.e;
  }
};

struct SmithResult {
  IntMatrix u;   // rows x rows, unimodular
  RectMatrix d;  // diagonal with divisibility chain, nonnegative
  IntMatrix v;   // cols x cols, unimodular
};

// U*M*V = D with U, V unimodular, D diagonal, d_1 | d_2 | ... (entries >= 0).
inline SmithResult smith_normal_form(const RectMatrix& m_in) {
  RectMatrix m = m_in;
  int rows = m.rows, cols = m.cols;
  IntMatrix u = IntMatrix::identity(rows);
  IntMatrix v = IntMatrix::identity(cols);

  auto swap_rows = [&](int a, int b) {
    if (a == b) return;
    for (int j = 0; j < cols; ++j) std::swap(m.at(a, j), m.at(b, j));
    for (int j = 0; j < rows; ++j) std::swap(u.at(a, j), u.at(b, j));
  };
  auto swap_cols = [&](int a, int b) {
    if (a == b) return;
    for (int i = 0; i < rows; ++i) std::swap(m.at(i, a), m.at(i, b));
    for (int i = 0; i < cols; ++i) std::swap(v.at(i, a), v.at(i, b));
  };
  auto add_row = [&](int dst, int src, const Int& f) {  // row dst += f * row src
    for (int j = 0; j < cols; ++j) m.at(dst, j) += f * m.at(src, j);
    for (int j = 0; j < rows; ++j) u.at(dst, j) += f * u.at(src, j);
  };
  auto add_col = [&](int dst, int src, const Int& f) {
    for (int i = 0; i < rows; ++i) m.at(i, dst) += f * m.at(i, src);
    for (int i = 0; i < cols; ++i) v.at(i, dst) += f * v.at(i, src);
  };
  auto negate_row = [&](int r) {
    for (int j = 0; j < cols; ++j) m.at(r, j) = -m.at(r, j);
    for (int j = 0; j < rows; ++j) u.at(r, j) = -u.at(r, j);
  };

  int t = 0;
  int dim = std::min(rows, cols);
  while (t < dim) {
    // Find the entry of minimal nonzero absolute value in the trailing block.
    int pi = -1, pj = -1;
    Int best(0);
    for (int i = t; i < rows; ++i)
      for (int j = t; j < cols; ++j) {
        Int a = m.at(i, j) < 0 ? Int(-m.at(i, j)) : m.at(i, j);
        if (a != 0 && (pi < 0 || a < best)) {
          best = a;
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // trailing block is zero
    swap_rows(t, pi);
    swap_cols(t, pj);
    if (m.at(t, t) < 0) negate_row(t);

    bool clean = true;
    for (int i = t + 1; i < rows; ++i) {
      if (m.at(i, t) == 0) continue;
      Int q = m.at(i, t) / m.at(t, t);
      add_row(i, t, -q);
      if (m.at(i, t) != 0) clean = false;
    }
    for (int j = t + 1; j < cols; ++j) {
      if (m.at(t, j) == 0) continue;
      Int q = m.at(t, j) / m.at(t, t);
      add_col(j, t, -q);
      if (m.at(t, j) != 0) clean = false;
    }
    if (!clean) continue;  // smaller remainders appeared; repick the pivot

    // Divisibility: fold in any entry the pivot does not divide.
    bool fixed = false;
    for (int i = t + 1; i < rows && !fixed; ++i)
      for (int j = t + 1; j < cols && !fixed; ++j)
        if (m.at(i, j) % m.at(t, t) != 0) {
          add_row(t, i, Int(1));
          fixed = true;
        }
    if (fixed) continue;
    ++t;
  }

  // Zero out everything off the diagonal chain (already done) and check.
  SmithResult res{std::move(u), std::move(m), std::move(v)};
  // Verify invariants.
  Int du = det(res.u), dv = det(res.v);
  if ((du != 1 && du != -1) || (dv != 1 && dv != -1))
    throw Error("SnfCheckFailed", "transform not unimodular");
  RectMatrix prod(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) {
      Int s(0);
      for (int k = 0; k < rows; ++k)
        for (int l = 0; l < cols; ++l) s += res.u.at(i, k) * m_in.at(k, l) * res.v.at(l, j);
      prod.at(i, j) = s;
    }
  if (!(prod == res.d)) throw Error("SnfCheckFailed", "U*M*V != D");
  for (int i = 0; i + 1 < dim; ++i) {
    const Int& a = res.d.at(i, i);
    const Int& b = res.d.at(i + 1, i + 1);
    if (a < 0 || (a == 0 && b != 0) || (a != 0 && b % a != 0))
      throw Error("SnfCheckFailed", "divisibility chain violated");
  }
  return res;
}

inline SmithResult smith_normal_form(const IntMatrix& m) {
  return smith_normal_form(RectMatrix::from_square(m));
}

// --- primitive vectors -------------------------------------------------------

// P in GL_n(Z) with first column v (gcd of entries must be 1).
inline IntMatrix primitive_extend(const std::vector<Int>& v) {
  int n = static_cast<int>(v.size());
  if (gcd_vec(v) != 1)
    throw input_error("NotPrimitive", "vector content is " + gcd_vec(v).str());
  // Reduce v to e_1 by unimodular row operations tracked in U, then P = U^-1.
  IntMatrix u = IntMatrix::identity(n);
  std::vector<Int> w = v;
  for (int i = 1; i < n; ++i) {
    if (w[i] == 0) continue;
    Int x, y;
    Int g = xgcd(w[0], w[i], x, y);
    // [x y; -w_i/g w_0/g] has det 1 and sends (w_0, w_i) to (g, 0).
    Int a = w[0] / g, b = w[i] / g;
    for (int j = 0; j < n; ++j) {
      Int r0 = u.at(0, j), ri = u.at(i, j);
      u.at(0, j) = x * r0 + y * ri;
      u.at(i, j) = -b * r0 + a * ri;
    }
    w[0] = g;
    w[i] = 0;
  }
  if (w[0] == -1) {
    for (int j = 0; j < n; ++j) u.at(0, j) = -u.at(0, j);
    w[0] = 1;
  }
  IntMatrix p = unimodular_inverse(u);
  // Postcondition check.
  Int d = det(p);
  if (d != 1 && d != -1) throw Error("PrimitiveExtendFailed", "det not +-1");
  for (int i = 0; i < n; ++i)
    if (p.at(i, 0) != v[i]) throw Error("PrimitiveExtendFailed", "first column mismatch");
  return p;
}

// Primitive integer kernel vector of an integer matrix (kernel must be
// nonzero); via SNF: zero diagonal entries of D mark kernel columns of V.
inline std::vector<Int> primitive_kernel_vector(const IntMatrix& m) {
  SmithResult s = smith_normal_form(m);
  int n = m.n();
  for (int j = 0; j < n; ++j) {
    if (s.d.at(j, j) == 0) {
      std::vector<Int> v(n);
      for (int i = 0; i < n; ++i) v[i] = s.v.at(i, j);
      Int g = gcd_vec(v);
      for (auto& x : v) x /= g;
      return v;
    }
  }
  throw input_error("NoKernel", "matrix has trivial kernel");
}

}  // namespace ppcert::matqz
