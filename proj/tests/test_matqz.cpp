#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ppcert/matqz.hpp"
#include "ppcert/oraclekit.hpp"
#include "test_util.hpp"

using namespace ppcert;
using namespace ppcert::matqz;
namespace tu = ppcert::testutil;

namespace {
AlgebraicNumber sqrt_n(long n) { return AlgebraicNumber::sqrt_of(Int(n)); }
}  // namespace

TEST_CASE("determinants") {
  CHECK(det(tu::sl3_U()) == 1);
  CHECK(det(IntMatrix::identity(3)) == 1);
  CHECK(det(tu::gl3_M1()) == 1);
  CHECK(det(tu::sl3_I()) == 1);
  CHECK(det(tu::sl3_A()) == 1);
  CHECK(det(tu::sl3_B()) == 1);
  for (const auto& m : {tu::sl4_I(), tu::sl4_J(), tu::sl4_A(), tu::sl4_B(), tu::sl4_C(),
                        tu::sl4_D()})
    CHECK(det(m) == 1);

  // cross-implementation agreement on random matrices
  std::mt19937_64 rng(42);
  for (int n = 1; n <= 4; ++n)
    for (int trial = 0; trial < 1000; ++trial) {
      IntMatrix m = tu::random_int_matrix(rng, n);
      REQUIRE(det(m) == oraclekit::reference_det(m));
    }
}

TEST_CASE("charpoly golden values") {
  // A (4x4): (x-1)^2 (x^2-3x+1)
  RatPolynomial expected_a = RatPolynomial::from_ints({-1, 1}) *
                             RatPolynomial::from_ints({-1, 1}) *
                             RatPolynomial::from_ints({1, -3, 1});
  CHECK(charpoly(tu::sl4_A()) == expected_a);

  // D (4x4): (x^2-6x+1)(x^2-4x+1)
  RatPolynomial expected_d =
      RatPolynomial::from_ints({1, -6, 1}) * RatPolynomial::from_ints({1, -4, 1});
  CHECK(charpoly(tu::sl4_D()) == expected_d);

  // identity: (x-1)^4
  RatPolynomial lin = RatPolynomial::from_ints({-1, 1});
  CHECK(charpoly(IntMatrix::identity(4)) == lin * lin * lin * lin);

  // cross-implementation agreement
  std::mt19937_64 rng(43);
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 200; ++trial) {
      IntMatrix m = tu::random_int_matrix(rng, n);
      REQUIRE(charpoly(m) == oraclekit::reference_charpoly(m));
    }
}

TEST_CASE("charpoly is a conjugation invariant") {
  std::mt19937_64 rng(44);
  for (const auto& m : {tu::sl3_A(), tu::sl3_B(), tu::sl4_C(), tu::sl4_D()}) {
    RatPolynomial p = charpoly(m);
    for (int trial = 0; trial < 50; ++trial) {
      IntMatrix q = tu::random_unimodular(rng, m.n());
      REQUIRE(charpoly(unimodular_inverse(q) * m * q) == p);
    }
  }
}

TEST_CASE("factor_charpoly") {
  auto fs = factor_charpoly(RatPolynomial::from_ints({-1, 1}) *
                            RatPolynomial::from_ints({1, -3, 1}));
  REQUIRE(fs.size() == 2);
  CHECK(fs[0].poly == RatPolynomial::from_ints({-1, 1}));
  CHECK(fs[1].poly == RatPolynomial::from_ints({1, -3, 1}));
  CHECK_FALSE(fs[1].high_degree);

  auto quad = factor_charpoly(charpoly(IntMatrix::identity(4)));
  REQUIRE(quad.size() == 1);
  CHECK(quad[0].multiplicity == 4);
  CHECK(quad[0].poly == RatPolynomial::from_ints({-1, 1}));

  auto dd = factor_charpoly(charpoly(tu::sl4_D()));
  REQUIRE(dd.size() == 2);
  CHECK(dd[0].poly == RatPolynomial::from_ints({1, -6, 1}));
  CHECK(dd[1].poly == RatPolynomial::from_ints({1, -4, 1}));

  // irreducible cubic comes back flagged
  auto cubic = factor_charpoly(RatPolynomial::from_ints({-2, 0, 0, 1}));  // x^3 - 2
  REQUIRE(cubic.size() == 1);
  CHECK(cubic[0].high_degree);
}

TEST_CASE("eigen_decompose golden values") {
  // A (3x3): {(3+sqrt5)/2, 1, (3-sqrt5)/2}, dominant eigenvector [1+sqrt5 : 2 : 0]
  auto ed = eigen_decompose(tu::sl3_A());
  REQUIRE(ed.eigenvalues.size() == 3);
  AlgebraicNumber half(make_rat(1, 2));
  CHECK(ed.eigenvalues[0] == (AlgebraicNumber(3) + sqrt_n(5)) * half);
  CHECK(ed.eigenvalues[1] == AlgebraicNumber(1));
  CHECK(ed.eigenvalues[2] == (AlgebraicNumber(3) - sqrt_n(5)) * half);
  // proportionality to (1+sqrt5, 2, 0): cross products vanish
  const auto& v = ed.eigenvectors[0];
  AlgebraicNumber e0 = AlgebraicNumber(1) + sqrt_n(5);
  CHECK((v[0] * AlgebraicNumber(2) - v[1] * e0).is_zero());
  CHECK(v[2].is_zero());

  // J (4x4): complex cube roots of unity
  CHECK_THROWS_AS(eigen_decompose(tu::sl4_J()), Error);

  // C (4x4): {2+sqrt3, 1, 1, 2-sqrt3} with a 2-dimensional eigenspace for 1
  auto ec = eigen_decompose(tu::sl4_C());
  REQUIRE(ec.eigenvalues.size() == 4);
  CHECK(ec.eigenvalues[0] == AlgebraicNumber(2) + sqrt_n(3));
  CHECK(ec.eigenvalues[1] == AlgebraicNumber(1));
  CHECK(ec.eigenvalues[2] == AlgebraicNumber(1));
  CHECK(ec.eigenvalues[3] == AlgebraicNumber(2) - sqrt_n(3));

  // identity is not proximal but is perfectly diagonalizable
  auto ei = eigen_decompose(IntMatrix::identity(3));
  CHECK(ei.eigenvalues.size() == 3);
}

TEST_CASE("smith normal form") {
  auto s1 = smith_normal_form(tu::gl3_M1() - IntMatrix::identity(3));
  CHECK(s1.d.at(0, 0) == 1);
  CHECK(s1.d.at(1, 1) == 3);
  CHECK(s1.d.at(2, 2) == 0);

  auto s0 = smith_normal_form(IntMatrix(2));
  CHECK(s0.d.at(0, 0) == 0);
  CHECK(s0.d.at(1, 1) == 0);

  IntMatrix diag24(2);
  diag24.at(0, 0) = 2;
  diag24.at(1, 1) = 4;
  auto s2 = smith_normal_form(diag24);
  CHECK(s2.d.at(0, 0) == 2);
  CHECK(s2.d.at(1, 1) == 4);

  // agreement with the gcd-of-minors oracle on random matrices
  std::mt19937_64 rng(45);
  for (int n = 2; n <= 4; ++n)
    for (int trial = 0; trial < 300; ++trial) {
      IntMatrix m = tu::random_int_matrix(rng, n, -4, 4);
      auto snf = smith_normal_form(m);
      auto ref = oraclekit::reference_snf_diagonal(m);
      for (int i = 0; i < n; ++i) REQUIRE(snf.d.at(i, i) == ref[i]);
    }
}

TEST_CASE("primitive_extend") {
  auto p1 = primitive_extend({Int(1), Int(0), Int(0)});
  CHECK(p1 == IntMatrix::identity(3));

  auto p2 = primitive_extend({Int(2), Int(3), Int(5)});
  Int d = det(p2);
  CHECK((d == 1 || d == -1));
  CHECK(p2.at(0, 0) == 2);
  CHECK(p2.at(1, 0) == 3);
  CHECK(p2.at(2, 0) == 5);

  CHECK_THROWS_AS(primitive_extend({Int(2), Int(4), Int(6)}), Error);

  std::mt19937_64 rng(46);
  std::uniform_int_distribution<int> d9(-9, 9);
  int done = 0;
  while (done < 200) {
    std::vector<Int> v = {Int(d9(rng)), Int(d9(rng)), Int(d9(rng)), Int(d9(rng))};
    if (gcd_vec(v) != 1) continue;
    auto p = primitive_extend(v);
    Int dp = det(p);
    REQUIRE((dp == 1 || dp == -1));
    for (int i = 0; i < 4; ++i) REQUIRE(p.at(i, 0) == v[i]);
    ++done;
  }
}

TEST_CASE("kernel vectors") {
  // M1 - id has a primitive integer kernel vector
  auto v = primitive_kernel_vector(tu::gl3_M1() - IntMatrix::identity(3));
  auto img = (tu::gl3_M1() - IntMatrix::identity(3)).apply(v);
  for (const auto& x : img) CHECK(x == 0);
  CHECK(gcd_vec(v) == 1);
}

TEST_CASE("matrix powers and inverse") {
  CHECK(tu::sl3_U().pow(4) == IntMatrix::identity(3));
  CHECK(tu::sl4_J().pow(3) == IntMatrix::identity(4));
  IntMatrix a = tu::sl3_A();
  CHECK(a * unimodular_inverse(a) == IntMatrix::identity(3));
  CHECK(is_orthogonal(tu::sl3_I()));
  CHECK(is_orthogonal(tu::sl4_I()));
  CHECK_FALSE(is_orthogonal(tu::sl4_J()));
}
