#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "ppcert/groupcheck.hpp"
#include "test_util.hpp"

using namespace ppcert;
using namespace ppcert::groupcheck;
namespace tu = ppcert::testutil;

namespace {

// H * K with H = F2(a,b) x <i>, K = <c>.
FreeProductStructure hk_structure() {
  FreeProductStructure st;
  st.factors.push_back({2, 2});  // F2 x Z/2
  st.factors.push_back({1, 0});  // Z
  return st;
}

GroupWord random_word(std::mt19937_64& rng, const FreeProductStructure& st, int len) {
  std::uniform_int_distribution<int> pickf(0, static_cast<int>(st.factors.size()) - 1);
  std::uniform_int_distribution<int> pickw(0, 3);
  GroupWord w;
  for (int i = 0; i < len; ++i) {
    int f = pickf(rng);
    const auto& fac = st.factors[f];
    FactorElem e;
    int wl = pickw(rng) % (fac.rank > 0 ? 3 : 1);
    for (int j = 0; j < wl; ++j) {
      int letter = std::uniform_int_distribution<int>(0, fac.rank - 1)(rng);
      bool inv = std::uniform_int_distribution<int>(0, 1)(rng);
      e.word.push_back(static_cast<char>((inv ? 'A' : 'a') + letter));
    }
    e.word = free_reduce(e.word);
    if (fac.torsion > 0) e.exp = std::uniform_int_distribution<int>(0, fac.torsion - 1)(rng);
    w.push_back({f, e});
  }
  return w;
}

}  // namespace

TEST_CASE("normal form examples") {
  FreeProductStructure st = hk_structure();

  // I A A^-1 C -> (I)(C)
  GroupWord raw = {{0, {"", 1}}, {0, {"a", 0}}, {0, {"A", 0}}, {1, {"a", 0}}};
  GroupWord nf = normal_form(st, raw);
  REQUIRE(nf.size() == 2);
  CHECK(nf[0] == Syllable{0, {"", 1}});
  CHECK(nf[1] == Syllable{1, {"a", 0}});

  // A I A^-1 -> (I) by centrality of the torsion generator
  GroupWord raw2 = {{0, {"a", 0}}, {0, {"", 1}}, {0, {"A", 0}}};
  GroupWord nf2 = normal_form(st, raw2);
  REQUIRE(nf2.size() == 1);
  CHECK(nf2[0] == Syllable{0, {"", 1}});

  // empty word is the identity
  CHECK(normal_form(st, {}).empty());
}

TEST_CASE("S3 block multiplication") {
  // J*I in <I,J> = S3: an order-2 element; once as matrices, once as
  // permutations of three symbols (the derivation oracle).
  matqz::IntMatrix ji = tu::sl4_J() * tu::sl4_I();
  CHECK(ji * ji == matqz::IntMatrix::identity(4));
  CHECK_FALSE(ji == matqz::IntMatrix::identity(4));

  Perm i_perm = {1, 0, 2};
  Perm j_perm = {1, 2, 0};
  Perm prod = perm_mul(j_perm, i_perm);
  CHECK(perm_mul(prod, prod) == Perm{0, 1, 2});
}

TEST_CASE("evaluate_word") {
  LetterMap letters;
  letters.emplace("U", tu::sl3_U());
  letters.emplace("U-", matqz::unimodular_inverse(tu::sl3_U()));
  letters.emplace("B", tu::sl3_B());
  letters.emplace("I", tu::sl4_I());
  letters.emplace("J", tu::sl4_J());
  letters.emplace("J-", matqz::unimodular_inverse(tu::sl4_J()));
  letters.emplace("I-", matqz::unimodular_inverse(tu::sl4_I()));

  CHECK(evaluate_word({}, letters, 3) == matqz::IntMatrix::identity(3));
  matqz::IntMatrix c = evaluate_word({"U", "B", "U-"}, letters, 3);
  CHECK(c == tu::sl3_U() * tu::sl3_B() * matqz::unimodular_inverse(tu::sl3_U()));
  // I and J do not commute: the commutator is J, not the identity.  (Note
  // I J I^-1 J itself IS trivial, since I J I^-1 = J^2 and J^3 = 1.)
  CHECK_FALSE(evaluate_word({"I", "J", "I-", "J-"}, letters, 4) ==
              matqz::IntMatrix::identity(4));
  CHECK(evaluate_word({"I", "J", "I-", "J"}, letters, 4) == matqz::IntMatrix::identity(4));
  CHECK_THROWS_AS(evaluate_word({"missing"}, letters, 3), Error);
}

TEST_CASE("relation checks") {
  LetterMap letters;
  letters.emplace("A", tu::sl4_A());
  letters.emplace("B", tu::sl4_B());
  letters.emplace("I", tu::sl4_I());
  letters.emplace("J", tu::sl4_J());
  letters.emplace("A2", tu::sl3_A());
  letters.emplace("B2", tu::sl3_B());

  std::vector<RelationCheck> rels = {
      {"AJ=JA", {"A", "J"}, {"J", "A"}, true},
      {"BJ=JB", {"B", "J"}, {"J", "B"}, true},
      {"I2=1", {"I", "I"}, {}, true},
      {"J3=1", {"J", "J", "J"}, {}, true},
      {"IJI=J2", {"I", "J", "I"}, {"J", "J"}, true},
      {"IJ!=JI", {"I", "J"}, {"J", "I"}, false},
  };
  auto res = relation_check(rels, letters, 4);
  for (const auto& r : res) {
    INFO(r.name);
    CHECK(r.satisfied);
  }
  auto res3 = relation_check({{"AB!=BA", {"A2", "B2"}, {"B2", "A2"}, false}}, letters, 3);
  CHECK(res3[0].satisfied);
}

TEST_CASE("normal form confluence") {
  FreeProductStructure st = hk_structure();
  std::mt19937_64 rng(314);
  std::uniform_int_distribution<int> len(0, 6);
  for (int trial = 0; trial < 10000; ++trial) {
    GroupWord w = random_word(rng, st, len(rng));
    GroupWord nf = normal_form(st, w);
    // insert a cancelling pair at a random position
    GroupWord padded = w;
    std::size_t pos = padded.empty() ? 0 : rng() % (padded.size() + 1);
    int f = static_cast<int>(rng() % st.factors.size());
    FactorElem e;
    if (st.factors[f].rank > 0) e.word = "a";
    else e.exp = 1;
    FactorElem einv = factor_inv(st.factors[f], e);
    padded.insert(padded.begin() + pos, {f, einv});
    padded.insert(padded.begin() + pos, {f, e});
    REQUIRE(normal_form(st, padded) == nf);
  }
}

TEST_CASE("nontriviality sweep") {
  // Sanov generators: <[[1,2],[0,1]], [[1,0],[2,1]]> is free of rank 2.
  FreeProductStructure f2;
  f2.factors.push_back({1, 0});
  f2.factors.push_back({1, 0});
  SweepLetters sl;
  sl.dim = 2;
  sl.free_letters = {{matqz::IntMatrix::from_rows({{1, 2}, {0, 1}})},
                     {matqz::IntMatrix::from_rows({{1, 0}, {2, 1}})}};
  sl.torsion_letters = {std::nullopt, std::nullopt};

  auto res = nontriviality_sweep(f2, sl, 4, 2);
  CHECK(res.pass);
  CHECK(res.words_checked > 100);

  // L = 1 passes whenever the letters are non-identity
  auto res1 = nontriviality_sweep(f2, sl, 1, 2);
  CHECK(res1.pass);

  // corrupting a letter to the identity produces a counterexample
  SweepLetters bad = sl;
  bad.free_letters[1][0] = matqz::IntMatrix::identity(2);
  auto resbad = nontriviality_sweep(f2, bad, 2, 1);
  CHECK_FALSE(resbad.pass);
  REQUIRE(resbad.counterexample.has_value());
}

TEST_CASE("evaluate is a homomorphism") {
  LetterMap letters;
  letters.emplace("a", tu::sl3_A());
  letters.emplace("b", tu::sl3_B());
  letters.emplace("u", tu::sl3_U());
  std::mt19937_64 rng(159);
  std::vector<std::string> alphabet = {"a", "b", "u"};
  for (int trial = 0; trial < 300; ++trial) {
    Word u, v;
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i) u.push_back(alphabet[rng() % 3]);
    for (int i = 0; i < static_cast<int>(rng() % 4); ++i) v.push_back(alphabet[rng() % 3]);
    Word uv = u;
    uv.insert(uv.end(), v.begin(), v.end());
    REQUIRE(evaluate_word(uv, letters, 3) ==
            evaluate_word(u, letters, 3) * evaluate_word(v, letters, 3));
  }
}

TEST_CASE("pgl2 actions") {
  auto a3 = pgl2_action(3);
  CHECK(a3.npoints == 4);
  CHECK(a3.perms.size() == 24);

  auto a5 = pgl2_action(5);
  CHECK(a5.npoints == 6);
  CHECK(a5.perms.size() == 120);

  CHECK_THROWS_AS(pgl2_action(4), Error);
  CHECK_THROWS_AS(pgl2_action(25), Error);
}

TEST_CASE("sharply transitive checks") {
  auto a5 = pgl2_action(5);
  auto rep = sharply_transitive_check(a5, 3);
  CHECK(rep.pass);
  CHECK(rep.group_order == 120);
  CHECK(rep.expected_order == 120);

  // S3 acting on 3 points is sharply 3-transitive
  FiniteAction s3;
  s3.npoints = 3;
  s3.perms = {{0, 1, 2}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}, {1, 2, 0}, {2, 0, 1}};
  s3.labels = {"e", "s01", "s12", "s02", "c", "c2"};
  verify_group(s3);
  CHECK(sharply_transitive_check(s3, 3).pass);

  // Z/4 on 4 points is regular but not sharply 2-transitive
  FiniteAction z4;
  z4.npoints = 4;
  z4.perms = {{0, 1, 2, 3}, {1, 2, 3, 0}, {2, 3, 0, 1}, {3, 0, 1, 2}};
  z4.labels = {"0", "1", "2", "3"};
  verify_group(z4);
  CHECK_FALSE(sharply_transitive_check(z4, 2).pass);
}

TEST_CASE("lemma 3.2 witness construction") {
  auto a5 = pgl2_action(5);
  // find an element of order 3
  Perm id(a5.npoints);
  for (int i = 0; i < a5.npoints; ++i) id[i] = i;
  Perm g;
  for (const auto& p : a5.perms) {
    if (p != id && perm_mul(p, perm_mul(p, p)) == id) {
      g = p;
      break;
    }
  }
  REQUIRE(!g.empty());
  auto rep = lemma32_witness(a5, g);
  CHECK(rep.pass);
  CHECK(rep.fixed_points == 0);  // x^2+x+1 is irreducible mod 5
  CHECK(rep.witnesses == 6);

  CHECK_THROWS_AS(lemma32_witness(a5, id), Error);

  auto a7 = pgl2_action(7);
  Perm id7(a7.npoints);
  for (int i = 0; i < a7.npoints; ++i) id7[i] = i;
  Perm g7;
  for (const auto& p : a7.perms) {
    if (p != id7 && perm_mul(p, perm_mul(p, p)) == id7) {
      g7 = p;
      break;
    }
  }
  REQUIRE(!g7.empty());
  auto rep7 = lemma32_witness(a7, g7);
  CHECK(rep7.pass);
  CHECK(rep7.fixed_points == 2);  // x^2+x+1 splits mod 7
  CHECK(rep7.witnesses == 6);
}
