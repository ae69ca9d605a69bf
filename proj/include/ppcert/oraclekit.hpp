#pragma once

// Test-only oracles.  Everything here either uses floating point or a
// deliberately different algorithm from the certified implementations; the
// certificate pipeline never includes this header.

#include <array>
#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "ppcert/exactnum.hpp"
#include "ppcert/matqz.hpp"
#include "ppcert/numeric.hpp"

namespace ppcert::oraclekit {

using matqz::IntMatrix;
using matqz::RatPolynomial;

// Determinant by permutation expansion (Leibniz formula).
inline Int reference_det(const IntMatrix& m) {
  int n = m.n();
  std::vector<int> perm(n);
  for (int i = 0; i < n; ++i) perm[i] = i;
  Int acc(0);
  do {
    int inversions = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j)
        if (perm[i] > perm[j]) ++inversions;
    Int term(1);
    for (int i = 0; i < n; ++i) term *= m.at(i, perm[i]);
    acc += (inversions % 2 == 0) ? term : Int(-term);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc;
}

// Characteristic polynomial by cofactor expansion of det(xI - M) with
// polynomial entries; structurally unrelated to the Faddeev-LeVerrier
// recursion used by the primary implementation.
namespace detail {

inline RatPolynomial charpoly_expand(const std::vector<std::vector<RatPolynomial>>& m) {
  std::size_t n = m.size();
  if (n == 1) return m[0][0];
  RatPolynomial acc;
  for (std::size_t j = 0; j < n; ++j) {
    std::vector<std::vector<RatPolynomial>> sub(n - 1);
    for (std::size_t r = 1; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c)
        if (c != j) sub[r - 1].push_back(m[r][c]);
    RatPolynomial term = m[0][j] * charpoly_expand(sub);
    if (j % 2 == 1) term = term * RatPolynomial({Rat(-1)});
    acc = acc + term;
  }
  return acc;
}

}  // namespace detail

inline RatPolynomial reference_charpoly(const IntMatrix& m) {
  int n = m.n();
  std::vector<std::vector<RatPolynomial>> poly(n, std::vector<RatPolynomial>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j)
        poly[i][j] = RatPolynomial({Rat(-m.at(i, j)), Rat(1)});
      else
        poly[i][j] = RatPolynomial({Rat(-m.at(i, j))});
    }
  return detail::charpoly_expand(poly);
}

// Smith invariant factors via gcds of k x k minors: d_k = gcd of all k-minors,
// invariant factor s_k = d_k / d_{k-1}.
inline std::vector<Int> reference_snf_diagonal(const matqz::RectMatrix& m) {
  int rows = m.rows, cols = m.cols;
  int dim = std::min(rows, cols);
  std::vector<Int> d(dim + 1, Int(0));
  d[0] = 1;
  for (int k = 1; k <= dim; ++k) {
    // Enumerate row and column subsets of size k.
    std::vector<int> ridx(k), cidx(k);
    Int g(0);
    std::vector<bool> rsel(rows, false);
    std::fill(rsel.begin(), rsel.begin() + k, true);
    std::sort(rsel.begin(), rsel.end());  // prepare for prev_permutation order
    // simple recursive enumeration
    std::vector<int> rset, cset;
    std::function<void(int, int)> pick_rows = [&](int start, int need) {
      if (need == 0) {
        std::function<void(int, int)> pick_cols = [&](int cstart, int cneed) {
          if (cneed == 0) {
            IntMatrix sub(k);
            for (int i = 0; i < k; ++i)
              for (int j = 0; j < k; ++j) sub.at(i, j) = m.at(rset[i], cset[j]);
            Int dd = reference_det(sub);
            g = gcd(g, dd);
            return;
          }
          for (int c = cstart; c <= cols - cneed; ++c) {
            cset.push_back(c);
            pick_cols(c + 1, cneed - 1);
            cset.pop_back();
          }
        };
        pick_cols(0, k);
        return;
      }
      for (int r = start; r <= rows - need; ++r) {
        rset.push_back(r);
        pick_rows(r + 1, need - 1);
        rset.pop_back();
      }
    };
    pick_rows(0, k);
    d[k] = g < 0 ? Int(-g) : g;
  }
  std::vector<Int> out(dim, Int(0));
  for (int k = 1; k <= dim; ++k) {
    if (d[k] == 0) break;  // rank reached; the rest stay 0
    out[k - 1] = d[k] / d[k - 1];
  }
  return out;
}

inline std::vector<Int> reference_snf_diagonal(const IntMatrix& m) {
  return reference_snf_diagonal(matqz::RectMatrix::from_square(m));
}

// --- floating point projective dynamics --------------------------------------

inline double to_double(const exactnum::AlgebraicNumber& a) {
  auto iv = exactnum::enclose(a, make_rat(1, 1000000000));
  Rat mid = (iv.lo + iv.hi) / 2;
  return static_cast<double>(rat_num(mid)) / static_cast<double>(rat_den(mid));
}

inline std::vector<double> to_double_vec(const std::vector<exactnum::AlgebraicNumber>& v) {
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(to_double(x));
  return out;
}

inline double norm(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

// Chordal distance sin(angle) between projective points.
inline double chordal(const std::vector<double>& a, const std::vector<double>& b) {
  double dot = 0;
  for (std::size_t i = 0; i < a.size(); ++i) dot += a[i] * b[i];
  double c2 = 1.0 - (dot * dot) / (norm(a) * norm(a) * norm(b) * norm(b));
  return c2 < 0 ? 0.0 : std::sqrt(c2);
}

inline std::vector<double> apply_mat(const IntMatrix& m, const std::vector<double>& v) {
  int n = m.n();
  std::vector<double> r(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) r[i] += static_cast<double>(m.at(i, j)) * v[j];
  // renormalize to dodge overflow under iteration
  double nn = norm(r);
  for (auto& x : r) x /= nn;
  return r;
}

struct SampleCloud {
  std::vector<std::vector<double>> points;  // unit representatives
  std::uint64_t seed = 0;
};

// Deterministic sample cloud on the unit sphere.
inline SampleCloud sample_sphere(int dim, int count, std::uint64_t seed) {
  SampleCloud cloud;
  cloud.seed = seed;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (int i = 0; i < count; ++i) {
    std::vector<double> v(dim);
    for (auto& x : v) x = gauss(rng);
    double n = norm(v);
    if (n < 1e-9) {
      --i;
      continue;
    }
    for (auto& x : v) x /= n;
    cloud.points.push_back(std::move(v));
  }
  return cloud;
}

// Minimal k over the samples such that every iterate M^k p is within eps of
// the attracting point; samples already filtered by the caller.  Returns 0
// for an empty cloud by convention.
inline int empirical_contraction(const IntMatrix& m, const SampleCloud& cloud,
                                 const std::vector<double>& attracting, double eps,
                                 int kmax) {
  if (cloud.points.empty()) return 0;
  int worst = 0;
  for (auto p : cloud.points) {
    int k = 0;
    while (chordal(p, attracting) > eps && k < kmax) {
      p = apply_mat(m, p);
      ++k;
    }
    worst = std::max(worst, k);
  }
  return worst;
}

// Max over random pairs of d(gx, gy)/d(x, y); for checking certified
// Lipschitz bounds from above by sampling.
inline double lipschitz_ratio_max(const IntMatrix& g, int pairs, std::uint64_t seed) {
  SampleCloud cloud = sample_sphere(g.n(), 2 * pairs, seed);
  double worst = 0;
  for (int i = 0; i + 1 < static_cast<int>(cloud.points.size()); i += 2) {
    const auto& x = cloud.points[i];
    const auto& y = cloud.points[i + 1];
    double dxy = chordal(x, y);
    if (dxy < 1e-9) continue;
    double dg = chordal(apply_mat(g, x), apply_mat(g, y));
    worst = std::max(worst, dg / dxy);
  }
  return worst;
}

}  // namespace ppcert::oraclekit
