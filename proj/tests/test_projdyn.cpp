#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ppcert/oraclekit.hpp"
#include "ppcert/projdyn.hpp"
#include "test_util.hpp"

using namespace ppcert;
using namespace ppcert::projdyn;
namespace tu = ppcert::testutil;

namespace {

AlgebraicNumber sqrt_n(long n) { return AlgebraicNumber::sqrt_of(Int(n)); }

ProjPoint random_point(std::mt19937_64& rng, int dim) {
  std::uniform_int_distribution<int> d(-6, 6);
  while (true) {
    std::vector<AlgebraicNumber> c(dim);
    bool nonzero = false;
    for (auto& x : c) {
      int v = d(rng);
      x = AlgebraicNumber(v);
      if (v != 0) nonzero = true;
    }
    if (!nonzero) continue;
    // occasionally mix in an irrational coordinate
    if (d(rng) > 4) c[0] = c[0] + sqrt_n(2);
    return ProjPoint(std::move(c));
  }
}

// Exact decision of sqrt(a) <= sqrt(b) + sqrt(c) for nonnegative field
// elements, via repeated squaring.
bool sqrt_triangle_leq(const AlgebraicNumber& a, const AlgebraicNumber& b,
                       const AlgebraicNumber& c) {
  AlgebraicNumber lhs = a - b - c;
  if (lhs.sign() <= 0) return true;
  return (lhs * lhs - AlgebraicNumber(4) * b * c).sign() <= 0;
}

}  // namespace

TEST_CASE("chordal metric examples") {
  ProjPoint e1 = ProjPoint::from_ints({1, 0, 0});
  ProjPoint e2 = ProjPoint::from_ints({0, 1, 0});
  CHECK(dist2_points(e1, e1).is_zero());
  CHECK(dist2_points(e1, e2) == AlgebraicNumber(1));

  // P_A^+ and P_A^- have orthogonal representatives: distance exactly 1.
  ProjPoint pa_plus({AlgebraicNumber(1) + sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  ProjPoint pa_minus({AlgebraicNumber(1) - sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  AlgebraicNumber d2 = dist2_points(pa_plus, pa_minus);
  CHECK(d2.sign() == 1);
  CHECK(d2 == AlgebraicNumber(1));
}

TEST_CASE("point-hyperplane distances") {
  ProjPoint pa_plus({AlgebraicNumber(1) + sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  ProjPoint pa_minus({AlgebraicNumber(1) - sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  ProjHyperplane ha_plus({AlgebraicNumber(2), sqrt_n(5) - AlgebraicNumber(1), AlgebraicNumber(0)});

  CHECK(dist2_point_hyperplane(pa_plus, ha_plus).sign() == 1);
  // the non-dominant eigenvector lies on the repelling hyperplane
  CHECK(dist2_point_hyperplane(pa_minus, ha_plus).is_zero());

  ProjPoint e3 = ProjPoint::from_ints({0, 0, 1});
  ProjHyperplane z0({AlgebraicNumber(0), AlgebraicNumber(0), AlgebraicNumber(1)});
  CHECK(dist2_point_hyperplane(e3, z0) == AlgebraicNumber(1));
}

TEST_CASE("action on points and hyperplanes") {
  ProjPoint pb_plus({AlgebraicNumber(1) + sqrt_n(3), AlgebraicNumber(1), AlgebraicNumber(0)});
  ProjPoint pc_plus = act(tu::sl3_U(), pb_plus);
  ProjPoint expected({AlgebraicNumber(0), AlgebraicNumber(1), AlgebraicNumber(1) + sqrt_n(3)});
  CHECK(pc_plus == expected);

  CHECK(act(matqz::IntMatrix::identity(3), pb_plus) == pb_plus);

  ProjHyperplane hb_plus({AlgebraicNumber(1), sqrt_n(3) - AlgebraicNumber(1), AlgebraicNumber(0)});
  ProjHyperplane hc_plus = act(tu::sl3_U(), hb_plus);
  ProjHyperplane expected_h(
      {AlgebraicNumber(0), sqrt_n(3) - AlgebraicNumber(1), AlgebraicNumber(1)});
  CHECK(hc_plus == expected_h);

  CHECK_THROWS_AS(act(matqz::IntMatrix(3), pb_plus), Error);
}

TEST_CASE("lipschitz bounds") {
  CHECK(lipschitz_bound(tu::sl3_I()) == 1);
  CHECK(lipschitz_bound(tu::sl4_I()) == 1);
  CHECK(lipschitz_bound(tu::sl4_J()) == 25);
  CHECK(lipschitz_bound(tu::sl4_J() * tu::sl4_J()) == 25);

  // sampling never exceeds the certified bound
  for (const auto& g : {tu::sl4_J(), tu::sl4_J() * tu::sl4_J(), tu::sl4_C()}) {
    double sampled = oraclekit::lipschitz_ratio_max(g, 10000, 2026);
    double certified = static_cast<double>(rat_num(lipschitz_bound(g))) /
                       static_cast<double>(rat_den(lipschitz_bound(g)));
    REQUIRE(sampled <= certified + 1e-9);
  }
}

TEST_CASE("metric axioms") {
  std::mt19937_64 rng(123);
  for (int trial = 0; trial < 10000; ++trial) {
    ProjPoint p = random_point(rng, 3);
    ProjPoint q = random_point(rng, 3);
    ProjPoint r = random_point(rng, 3);
    AlgebraicNumber dpq = dist2_points(p, q);
    REQUIRE(dpq == dist2_points(q, p));
    REQUIRE((dpq.is_zero()) == (p == q));
    REQUIRE(sqrt_triangle_leq(dpq, dist2_points(p, r), dist2_points(r, q)));
  }
}

TEST_CASE("orthogonal equivariance") {
  std::mt19937_64 rng(124);
  for (int trial = 0; trial < 500; ++trial) {
    ProjPoint p = random_point(rng, 3);
    ProjPoint q = random_point(rng, 3);
    REQUIRE(dist2_points(act(tu::sl3_I(), p), act(tu::sl3_I(), q)) == dist2_points(p, q));
    REQUIRE(dist2_points(act(tu::sl3_U(), p), act(tu::sl3_U(), q)) == dist2_points(p, q));
  }
}

TEST_CASE("proximal analysis of the 3x3 matrices") {
  auto [plus, minus] = analyze_proximal(tu::sl3_A());

  ProjPoint pa_plus({AlgebraicNumber(1) + sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  ProjPoint pa_minus({AlgebraicNumber(1) - sqrt_n(5), AlgebraicNumber(2), AlgebraicNumber(0)});
  ProjHyperplane ha_plus({AlgebraicNumber(2), sqrt_n(5) - AlgebraicNumber(1), AlgebraicNumber(0)});
  ProjHyperplane ha_minus(
      {AlgebraicNumber(2), -(sqrt_n(5) + AlgebraicNumber(1)), AlgebraicNumber(0)});

  CHECK(plus.attracting == pa_plus);
  CHECK(plus.repelling == ha_plus);
  CHECK(minus.attracting == pa_minus);
  CHECK(minus.repelling == ha_minus);
  AlgebraicNumber half(make_rat(1, 2));
  CHECK(plus.lambda1_abs == (AlgebraicNumber(3) + sqrt_n(5)) * half);
  CHECK(plus.lambda2_mod == AlgebraicNumber(1));

  CHECK_THROWS_AS(analyze_proximal(matqz::IntMatrix::identity(3)), Error);
}

TEST_CASE("proximal analysis of D") {
  auto [plus, minus] = analyze_proximal(tu::sl4_D());

  ProjPoint pd_plus({AlgebraicNumber(1), AlgebraicNumber(-1),
                     AlgebraicNumber(2) * (sqrt_n(2) - AlgebraicNumber(1)), AlgebraicNumber(0)});
  ProjHyperplane hd_plus({AlgebraicNumber(1), AlgebraicNumber(-1), sqrt_n(2) - AlgebraicNumber(1),
                          AlgebraicNumber(0)});
  CHECK(plus.attracting == pd_plus);
  CHECK(plus.repelling == hd_plus);
  CHECK(plus.lambda1_abs == AlgebraicNumber(3) + AlgebraicNumber(2) * sqrt_n(2));
  CHECK(plus.lambda2_mod == AlgebraicNumber(2) + sqrt_n(3));

  ProjPoint pd_minus({AlgebraicNumber(1), AlgebraicNumber(-1),
                      AlgebraicNumber(-2) * (sqrt_n(2) + AlgebraicNumber(1)), AlgebraicNumber(0)});
  ProjHyperplane hd_minus({AlgebraicNumber(1), AlgebraicNumber(-1),
                           -(AlgebraicNumber(1) + sqrt_n(2)), AlgebraicNumber(0)});
  CHECK(minus.attracting == pd_minus);
  CHECK(minus.repelling == hd_minus);
}

TEST_CASE("contraction powers") {
  auto [a_plus, a_minus] = analyze_proximal(tu::sl3_A());
  auto [b_plus, b_minus] = analyze_proximal(tu::sl3_B());
  matqz::IntMatrix c_mat = tu::sl3_U() * tu::sl3_B() * matqz::unimodular_inverse(tu::sl3_U());
  auto [c_plus, c_minus] = analyze_proximal(c_mat);

  Rat eps = make_rat(1, 100);
  Region source;
  source.add("PB+", Ball(b_plus.attracting, eps));
  source.add("PB-", Ball(b_minus.attracting, eps));
  source.add("PC+", Ball(c_plus.attracting, eps));
  source.add("PC-", Ball(c_minus.attracting, eps));

  auto res = contraction_power(a_plus, source, eps, 4096);
  CHECK(res.power >= 1);
  CHECK(res.delta > 0);

  // certified power dominates the empirical minimum over sampled points
  auto attracting = oraclekit::to_double_vec(a_plus.attracting.coords());
  oraclekit::SampleCloud cloud;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> jitter(-0.005, 0.005);
  for (const auto& [label, ball] : source.balls) {
    auto c = oraclekit::to_double_vec(ball.center.coords());
    double n = oraclekit::norm(c);
    for (auto& x : c) x /= n;
    for (int s = 0; s < 250; ++s) {
      auto p = c;
      for (auto& x : p) x += jitter(rng);
      cloud.points.push_back(p);
    }
  }
  int k_emp = oraclekit::empirical_contraction(tu::sl3_A(), cloud, attracting, 0.01, 4096);
  CHECK(res.power >= k_emp);
  CHECK(k_emp >= 1);

  // source touching the repelling hyperplane is rejected
  Region touching;
  touching.add("bad", Ball(a_minus.attracting, eps));  // P_A^- lies on H_A^+
  CHECK_THROWS_AS(contraction_power(a_plus, touching, eps, 4096), Error);

  // a source already sitting at the attracting point still yields k >= 1
  Region trivial;
  trivial.add("PA+", Ball(a_plus.attracting, eps));
  auto res2 = contraction_power(a_plus, trivial, eps, 4096);
  CHECK(res2.power >= 1);
}

TEST_CASE("region checks") {
  auto [a_plus, a_minus] = analyze_proximal(tu::sl3_A());
  auto [b_plus, b_minus] = analyze_proximal(tu::sl3_B());
  Rat eps = make_rat(1, 100);

  Region na;
  na.add("PA+", Ball(a_plus.attracting, eps));
  na.add("PA-", Ball(a_minus.attracting, eps));
  Region nb;
  nb.add("PB+", Ball(b_plus.attracting, eps));
  nb.add("PB-", Ball(b_minus.attracting, eps));

  CHECK(region_checks(na, nb).relation == RegionRelation::disjoint);
  CHECK(region_checks(na, na).relation == RegionRelation::r1_subset_r2);

  Region bigger;
  bigger.add("PA+big", Ball(a_plus.attracting, make_rat(1, 50)));
  Region smaller;
  smaller.add("PA+small", Ball(a_plus.attracting, make_rat(1, 200)));
  CHECK(region_checks(smaller, bigger).relation == RegionRelation::r1_subset_r2);

  // hyperplane avoidance
  auto avoid = ball_avoids_hyperplane("PB+", nb.balls[0].second, a_plus.repelling);
  CHECK(avoid.ok);
  auto touch = ball_avoids_hyperplane("PA-", Ball(a_minus.attracting, eps), a_plus.repelling);
  CHECK_FALSE(touch.ok);
}
