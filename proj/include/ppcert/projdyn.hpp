#pragma once

// Geometry of P^{n-1}(R) with the chordal metric d([u],[v]) = sin angle(u,v),
// handled exclusively through d^2, which is a field element; and the dynamics
// of proximal integer matrices: attracting points, repelling hyperplanes,
// certified Lipschitz bounds, and sound contraction powers.
//
// Soundness of contraction_power: write a unit representative v = c1*s1 + w
// with w in the repelling span H.  Then |c1|*|s1| = d(v,H)/d(P+,H), the
// H-component contracts like |lambda2|^k with an eigenbasis constant K, and
//   sin angle(M^k v, s1) <= N_k / (delta*|lambda1|^k - N_k),
//   N_k = |lambda2|^k * K * (1 + 1/d(P+,H)),
// so the returned k satisfies d(M^k v, P+) <= eps for every v with
// d(v, H) >= delta.  All comparisons are exact; K and d(P+,H) enter through
// rational upper/lower bounds, which only slacken the estimate.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ppcert/error.hpp"
#include "ppcert/exactnum.hpp"
#include "ppcert/matqz.hpp"
#include "ppcert/numeric.hpp"

namespace ppcert::projdyn {

using exactnum::AlgebraicNumber;
using matqz::FieldMatrix;
using matqz::IntMatrix;

// --- rational square-root bounds --------------------------------------------

// r with r^2 >= q, for rational q >= 0.
inline Rat ub_sqrt_rat(const Rat& q) {
  if (q < 0) throw input_error("NegativeSqrt", "upper sqrt bound of negative value");
  Int num = rat_num(q), den = rat_den(q);
  return make_rat(isqrt(num * den) + 1, den);
}

// r with 0 <= r^2 <= q.
inline Rat lb_sqrt_rat(const Rat& q) {
  if (q < 0) throw input_error("NegativeSqrt", "lower sqrt bound of negative value");
  Int num = rat_num(q), den = rat_den(q);
  return make_rat(isqrt(num * den), den);
}

// Rational upper bound of sqrt(q) for a nonnegative field element q.
inline Rat ub_sqrt(const AlgebraicNumber& q) {
  auto iv = exactnum::enclose(q, make_rat(1, Int(1) << 24));
  return ub_sqrt_rat(iv.hi < 0 ? Rat(0) : iv.hi);
}

// Rational lower bound of sqrt(q), strictly above `floor_above` (which must
// itself be strictly below sqrt(q)); refines until it clears the floor.
inline Rat lb_sqrt_above(const AlgebraicNumber& q, const Rat& floor_above) {
  Rat width = make_rat(1, 1 << 16);
  for (int rounds = 0; rounds < 64; ++rounds) {
    auto iv = exactnum::enclose(q, width);
    if (iv.lo > 0) {
      Rat lb = lb_sqrt_rat(iv.lo);
      if (lb > floor_above) return lb;
    }
    width /= 65536;
  }
  throw Error("SqrtRefinementStall", "could not certify sqrt lower bound");
}

inline Rat lb_sqrt(const AlgebraicNumber& q) { return lb_sqrt_above(q, Rat(-1)); }

// --- projective points and hyperplanes ---------------------------------------

namespace detail {

inline AlgebraicNumber dot(const std::vector<AlgebraicNumber>& a,
                           const std::vector<AlgebraicNumber>& b) {
  AlgebraicNumber s;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline bool proportional(const std::vector<AlgebraicNumber>& a,
                         const std::vector<AlgebraicNumber>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = i + 1; j < a.size(); ++j)
      if (!(a[i] * b[j] - a[j] * b[i]).is_zero()) return false;
  return true;
}

}  // namespace detail

class ProjPoint {
public:
  ProjPoint() = default;
  explicit ProjPoint(std::vector<AlgebraicNumber> coords)
      : x_(matqz::canonicalize_vector(std::move(coords))) {}

  static ProjPoint from_ints(const std::vector<long>& v) {
    std::vector<AlgebraicNumber> c;
    c.reserve(v.size());
    for (long e : v) c.emplace_back(e);
    return ProjPoint(std::move(c));
  }

  const std::vector<AlgebraicNumber>& coords() const { return x_; }
  std::size_t dim() const { return x_.size(); }

  // Canonicalization makes representations unique, but equality is still
  // decided by vanishing 2x2 minors so values from different constructions
  // compare robustly.
  bool operator==(const ProjPoint& o) const { return detail::proportional(x_, o.x_); }
  bool operator!=(const ProjPoint& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s = "[";
    for (std::size_t i = 0; i < x_.size(); ++i) {
      if (i) s += " : ";
      s += x_[i].to_string();
    }
    return s + "]";
  }

private:
  std::vector<AlgebraicNumber> x_;
};

class ProjHyperplane {
public:
  ProjHyperplane() = default;
  explicit ProjHyperplane(std::vector<AlgebraicNumber> normal)
      : n_(matqz::canonicalize_vector(std::move(normal))) {}

  const std::vector<AlgebraicNumber>& normal() const { return n_; }

  bool operator==(const ProjHyperplane& o) const { return detail::proportional(n_, o.n_); }
  bool operator!=(const ProjHyperplane& o) const { return !(*this == o); }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < n_.size(); ++i) {
      if (i) s += " : ";
      s += n_[i].to_string();
    }
    return s + "}";
  }

private:
  std::vector<AlgebraicNumber> n_;
};

// d^2(p, q) = 1 - (p.q)^2 / ((p.p)(q.q)), exact in [0, 1].
inline AlgebraicNumber dist2_points(const ProjPoint& p, const ProjPoint& q) {
  AlgebraicNumber pq = detail::dot(p.coords(), q.coords());
  AlgebraicNumber pp = detail::dot(p.coords(), p.coords());
  AlgebraicNumber qq = detail::dot(q.coords(), q.coords());
  return AlgebraicNumber(1) - pq * pq * (pp * qq).invert();
}

// d^2(p, H) = (n.p)^2 / ((n.n)(p.p)); zero iff p lies on H.
inline AlgebraicNumber dist2_point_hyperplane(const ProjPoint& p, const ProjHyperplane& h) {
  AlgebraicNumber np = detail::dot(h.normal(), p.coords());
  AlgebraicNumber nn = detail::dot(h.normal(), h.normal());
  AlgebraicNumber pp = detail::dot(p.coords(), p.coords());
  return np * np * (nn * pp).invert();
}

// --- group action -------------------------------------------------------------

inline ProjPoint act(const IntMatrix& g, const ProjPoint& p) {
  if (det(g) == 0) throw input_error("Singular", "action of a singular matrix");
  int n = g.n();
  std::vector<AlgebraicNumber> out(n);
  for (int i = 0; i < n; ++i) {
    AlgebraicNumber s;
    for (int j = 0; j < n; ++j) s += AlgebraicNumber(Rat(g.at(i, j))) * p.coords()[j];
    out[i] = s;
  }
  return ProjPoint(std::move(out));
}

// Hyperplane normals transform by the inverse transpose; projectively the
// adjugate transpose is the same map and stays over Z.
inline ProjHyperplane act(const IntMatrix& g, const ProjHyperplane& h) {
  if (det(g) == 0) throw input_error("Singular", "action of a singular matrix");
  IntMatrix m = matqz::adjugate(g).transpose();
  int n = g.n();
  std::vector<AlgebraicNumber> out(n);
  for (int i = 0; i < n; ++i) {
    AlgebraicNumber s;
    for (int j = 0; j < n; ++j) s += AlgebraicNumber(Rat(m.at(i, j))) * h.normal()[j];
    out[i] = s;
  }
  return ProjHyperplane(std::move(out));
}

// --- balls and regions --------------------------------------------------------

struct Ball {
  ProjPoint center;
  Rat radius;

  Ball() = default;
  Ball(ProjPoint c, Rat r) : center(std::move(c)), radius(std::move(r)) {
    if (radius <= 0 || radius >= 1)
      throw input_error("BadRadius", "chordal balls need radius in (0,1), got " +
                                         rat_to_string(radius));
  }
};

struct Region {
  std::vector<std::pair<std::string, Ball>> balls;  // labelled

  void add(const std::string& label, Ball b) {
    for (const auto& [l, bb] : balls)
      if (l == label) throw input_error("DuplicateLabel", label);
    balls.emplace_back(label, std::move(b));
  }
  bool empty() const { return balls.empty(); }
};

// Certified Lipschitz constant for the chordal metric: the wedge of two
// vectors grows by at most sigma1*sigma2 and norms shrink by at most
// sigma_min, so (sigma_max/sigma_min)^2 <= ||g||_F^2 * ||g^-1||_F^2 bounds
// the metric distortion; exactly 1 for orthogonal matrices.
inline Rat lipschitz_bound(const IntMatrix& g) {
  Int d = det(g);
  if (d == 0) throw input_error("Singular", "Lipschitz bound of a singular matrix");
  if (matqz::is_orthogonal(g)) return Rat(1);
  Int fro2(0);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) fro2 += g.at(i, j) * g.at(i, j);
  IntMatrix adj = matqz::adjugate(g);
  Int afro2(0);
  for (int i = 0; i < g.n(); ++i)
    for (int j = 0; j < g.n(); ++j) afro2 += adj.at(i, j) * adj.at(i, j);
  // ||g^-1||_F^2 = ||adj||_F^2 / det^2
  return Rat(fro2) * make_rat(afro2, d * d);
}

// Sound ball image: non-orthogonal letters map B(c, r) into B(gc, L(g) r).
inline Ball enclose_ball_image(const IntMatrix& g, const Rat& lipschitz, const Ball& b) {
  return Ball(act(g, b.center), lipschitz * b.radius);
}

// --- proximal certificates ------------------------------------------------------

struct ProximalCert {
  IntMatrix matrix;            // the matrix this certificate is for
  AlgebraicNumber lambda1_abs; // modulus of the unique dominant eigenvalue
  AlgebraicNumber lambda2_mod; // max modulus among the remaining eigenvalues
  ProjPoint attracting;
  ProjHyperplane repelling;
  Rat basis_const_ub;  // upper bound of K = sum ||row_i(S^-1)|| * ||s_i||, i >= 2
  Rat dph_lb;          // lower bound of d(attracting, repelling) in (0,1]
};

namespace detail {

// Hyperplane spanned by the given vectors (as the kernel of their row matrix).
inline ProjHyperplane span_hyperplane(const std::vector<std::vector<AlgebraicNumber>>& rows,
                                      int dim) {
  FieldMatrix m(dim);
  for (int i = 0; i < static_cast<int>(rows.size()); ++i)
    for (int j = 0; j < dim; ++j) m.at(i, j) = rows[i][j];
  auto kernel = matqz::kernel_basis(m);
  if (kernel.size() != 1)
    throw Error("SpanCheckFailed",
                "expected a unique normal, kernel dimension " + std::to_string(kernel.size()));
  return ProjHyperplane(kernel[0]);
}

inline Rat ub_norm(const std::vector<AlgebraicNumber>& v) {
  return ub_sqrt(dot(v, v));
}

// Certificate for one direction given eigenpairs sorted by modulus
// descending for that direction.
inline ProximalCert make_cert(const IntMatrix& mat,
                              const std::vector<AlgebraicNumber>& lambdas_abs,
                              const std::vector<std::vector<AlgebraicNumber>>& vectors) {
  int n = mat.n();
  if (lambdas_abs[0].compare(lambdas_abs[1]) <= 0)
    throw unsupported_error("NotProximal", "no unique eigenvalue of maximal modulus");

  ProximalCert cert;
  cert.matrix = mat;
  cert.lambda1_abs = lambdas_abs[0];
  cert.lambda2_mod = lambdas_abs[1];
  cert.attracting = ProjPoint(vectors[0]);
  std::vector<std::vector<AlgebraicNumber>> rest(vectors.begin() + 1, vectors.end());
  cert.repelling = span_hyperplane(rest, n);

  // Invariance self-checks.
  if (act(mat, cert.attracting) != cert.attracting)
    throw Error("ProximalCheckFailed", "attracting point is not fixed");
  if (act(mat, cert.repelling) != cert.repelling)
    throw Error("ProximalCheckFailed", "repelling hyperplane is not invariant");
  if ((cert.lambda1_abs - cert.lambda2_mod).sign() != 1)
    throw Error("ProximalCheckFailed", "modulus gap not positive");

  // Eigenbasis constant: K = sum_{i>=2} ||row_i(S^-1)|| ||s_i||, bounded
  // above in rationals.  S^-1 computed by exact elimination.
  FieldMatrix s(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) s.at(i, j) = vectors[j][i];
  // invert S by solving S * X = I column by column via kernel-style elimination
  FieldMatrix aug(n);
  // Gaussian elimination with full copy: build inverse directly.
  std::vector<std::vector<AlgebraicNumber>> a(n, std::vector<AlgebraicNumber>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) a[i][j] = s.at(i, j);
    a[i][n + i] = AlgebraicNumber(1);
  }
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r)
      if (!a[r][col].is_zero()) {
        piv = r;
        break;
      }
    if (piv < 0) throw Error("ProximalCheckFailed", "eigenbasis is singular");
    std::swap(a[piv], a[col]);
    AlgebraicNumber inv = a[col][col].invert();
    for (int j = 0; j < 2 * n; ++j) a[col][j] = a[col][j] * inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      AlgebraicNumber f = a[r][col];
      for (int j = 0; j < 2 * n; ++j) a[r][j] = a[r][j] - f * a[col][j];
    }
  }
  Rat k_ub(0);
  for (int i = 1; i < n; ++i) {
    std::vector<AlgebraicNumber> row(n);
    for (int j = 0; j < n; ++j) row[j] = a[i][n + j];
    k_ub += ub_norm(row) * ub_norm(vectors[i]);
  }
  cert.basis_const_ub = k_ub;

  AlgebraicNumber q = dist2_point_hyperplane(cert.attracting, cert.repelling);
  if (q.sign() != 1)
    throw Error("ProximalCheckFailed", "attracting point lies on the repelling hyperplane");
  cert.dph_lb = lb_sqrt_above(q, Rat(0));
  return cert;
}

}  // namespace detail

// Certificates for M and M^-1.  Requires det(M) = +-1 so both directions
// stay over Z; NotProximal if the modulus ordering has ties.
inline std::pair<ProximalCert, ProximalCert> analyze_proximal(const IntMatrix& m) {
  Int d = det(m);
  if (d == 0) throw input_error("Singular", "proximal analysis of a singular matrix");
  if (d != 1 && d != -1)
    throw unsupported_error("UnsupportedField", "proximal analysis requires det +-1");

  auto ed = matqz::eigen_decompose(m);
  int n = m.n();
  struct Pair {
    AlgebraicNumber lambda_abs;
    std::vector<AlgebraicNumber> vec;
  };
  std::vector<Pair> pairs;
  for (std::size_t i = 0; i < ed.eigenvalues.size(); ++i) {
    if (ed.eigenvalues[i].is_zero())
      throw input_error("Singular", "zero eigenvalue under proximal analysis");
    pairs.push_back({ed.eigenvalues[i].abs(), ed.eigenvectors[i]});
  }

  auto build = [&](bool inverse_direction) {
    std::vector<Pair> sorted = pairs;
    std::sort(sorted.begin(), sorted.end(), [&](const Pair& a, const Pair& b) {
      int c = a.lambda_abs.compare(b.lambda_abs);
      return inverse_direction ? c < 0 : c > 0;
    });
    std::vector<AlgebraicNumber> lambdas;
    std::vector<std::vector<AlgebraicNumber>> vecs;
    for (auto& p : sorted) {
      lambdas.push_back(inverse_direction ? p.lambda_abs.invert() : p.lambda_abs);
      vecs.push_back(p.vec);
    }
    IntMatrix mat = inverse_direction ? matqz::unimodular_inverse(m) : m;
    return detail::make_cert(mat, lambdas, vecs);
  };

  return {build(false), build(true)};
}

// --- contraction powers ---------------------------------------------------------

struct ContractionResult {
  int power = 0;
  Rat delta;  // certified margin between the source and the repelling hyperplane
};

// Least k such that M^k maps every point at chordal distance >= delta from
// the repelling hyperplane into B(attracting, eps), where delta is the
// certified margin of `source`; doubling then bisection with exact
// comparisons.
inline ContractionResult contraction_power(const ProximalCert& cert, const Region& source,
                                           const Rat& eps, int max_power) {
  if (source.empty()) throw input_error("EmptyRegion", "contraction with empty source");
  // Margin delta: min over balls of lb(d(center, H)) - radius, with exact
  // positivity check first.
  std::optional<Rat> delta;
  for (const auto& [label, ball] : source.balls) {
    AlgebraicNumber q = dist2_point_hyperplane(ball.center, cert.repelling);
    AlgebraicNumber gap = q - AlgebraicNumber(ball.radius * ball.radius);
    if (gap.sign() != 1)
      throw input_error("SourceTouchesRepelling",
                        "ball '" + label + "' touches the repelling hyperplane");
    Rat lb = lb_sqrt_above(q, ball.radius);
    Rat margin = lb - ball.radius;
    if (!delta || margin < *delta) delta = margin;
  }

  // Condition at power k:
  //   (1+eps) * K * (1 + 1/dph) * lambda2^k  <=  eps * delta * lambda1^k
  AlgebraicNumber rhs_c(eps * *delta);
  AlgebraicNumber lhs_c(Rat((1 + eps) * cert.basis_const_ub * (1 + 1 / cert.dph_lb)));
  auto satisfied = [&](int k) {
    AlgebraicNumber lhs = lhs_c * cert.lambda2_mod.pow(static_cast<unsigned>(k));
    AlgebraicNumber rhs = rhs_c * cert.lambda1_abs.pow(static_cast<unsigned>(k));
    return (rhs - lhs).sign() >= 0;
  };

  int hi = 1;
  while (hi <= max_power && !satisfied(hi)) hi *= 2;
  if (hi > max_power)
    throw resource_error("PowerCapExceeded",
                         "no certified power within cap " + std::to_string(max_power));
  int lo = hi / 2 + 1;
  if (hi == 1) lo = 1;
  while (lo < hi) {
    int mid = lo + (hi - lo) / 2;
    if (satisfied(mid))
      hi = mid;
    else
      lo = mid + 1;
  }
  return {hi, *delta};
}

// --- region predicates ------------------------------------------------------------

struct BallCheck {
  bool ok = false;
  std::string lhs_label, rhs_label;
  AlgebraicNumber margin;  // exact squared-comparison slack
};

// Disjointness of two balls: d(c1,c2) > r1 + r2 via squared comparison.
inline BallCheck balls_disjoint(const std::string& l1, const Ball& b1, const std::string& l2,
                                const Ball& b2) {
  AlgebraicNumber d2 = dist2_points(b1.center, b2.center);
  Rat rr = b1.radius + b2.radius;
  AlgebraicNumber margin = d2 - AlgebraicNumber(rr * rr);
  return {margin.sign() == 1, l1, l2, margin};
}

// Containment B(c1,r1) inside B(c2,r2): d(c1,c2) <= r2 - r1.
inline BallCheck ball_inside(const std::string& l1, const Ball& b1, const std::string& l2,
                             const Ball& b2) {
  if (b2.radius < b1.radius) return {false, l1, l2, AlgebraicNumber(-1)};
  AlgebraicNumber d2 = dist2_points(b1.center, b2.center);
  Rat rr = b2.radius - b1.radius;
  AlgebraicNumber margin = AlgebraicNumber(rr * rr) - d2;
  return {margin.sign() >= 0, l1, l2, margin};
}

// Ball avoids hyperplane: d(center, H) > radius.
inline BallCheck ball_avoids_hyperplane(const std::string& label, const Ball& b,
                                        const ProjHyperplane& h) {
  AlgebraicNumber d2 = dist2_point_hyperplane(b.center, h);
  AlgebraicNumber margin = d2 - AlgebraicNumber(b.radius * b.radius);
  return {margin.sign() == 1, label, "hyperplane", margin};
}

enum class RegionRelation { disjoint, r1_subset_r2, overlap_witness };

struct RegionCheckResult {
  RegionRelation relation;
  std::string witness_lhs, witness_rhs;  // offending or certifying pair
};

// Pairwise-ball relations; union containment only ball-by-ball (a ball must
// fit inside a single ball of the union), conservative otherwise.
inline RegionCheckResult region_checks(const Region& r1, const Region& r2) {
  bool all_disjoint = true;
  std::string dj_l, dj_r;
  for (const auto& [l1, b1] : r1.balls)
    for (const auto& [l2, b2] : r2.balls) {
      auto c = balls_disjoint(l1, b1, l2, b2);
      if (!c.ok) {
        all_disjoint = false;
        dj_l = l1;
        dj_r = l2;
      }
    }
  if (all_disjoint) return {RegionRelation::disjoint, "", ""};

  bool all_inside = true;
  std::string in_l;
  for (const auto& [l1, b1] : r1.balls) {
    bool found = false;
    for (const auto& [l2, b2] : r2.balls)
      if (ball_inside(l1, b1, l2, b2).ok) {
        found = true;
        break;
      }
    if (!found) {
      all_inside = false;
      in_l = l1;
      break;
    }
  }
  if (all_inside) return {RegionRelation::r1_subset_r2, "", ""};
  return {RegionRelation::overlap_witness, dj_l.empty() ? in_l : dj_l, dj_r};
}

}  // namespace ppcert::projdyn
