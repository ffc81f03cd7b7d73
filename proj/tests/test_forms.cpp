#include <minent/abelian.hpp>
#include <minent/forms.hpp>

#include <doctest.h>

#include "support/oracles.hpp"

using namespace minent;

TEST_SUITE_BEGIN("forms");

TEST_CASE("abelian groups parse and normalize") {
  CHECK(AbelianGroup::parse("0").trivial());
  CHECK(AbelianGroup::parse("Z").rank == 1);
  CHECK(AbelianGroup::parse("Z^2+Z4+Z4") == AbelianGroup{2, {4, 4}});
  CHECK(AbelianGroup::parse("Z2+Z2") == AbelianGroup{0, {2, 2}});
  // summands in any order, normalized to an invariant-factor chain
  CHECK(AbelianGroup::from_summands(0, {2, 3}) == AbelianGroup{0, {6}});
  CHECK(AbelianGroup::from_summands(0, {4, 2, 8}) == AbelianGroup{0, {2, 4, 8}});
  CHECK(AbelianGroup::from_summands(1, {12, 2, 9}) == AbelianGroup{1, {6, 36}});
  CHECK(AbelianGroup::parse("Z2+Z2").chain_valid());
  CHECK(AbelianGroup::parse("Z+Z6+Z12").str() == "Z + Z6 + Z12");
  CHECK(AbelianGroup{}.str() == "0");

  const auto p = AbelianGroup::parse("Z2+Z12+Z12").primary();
  CHECK(p.at(2) == std::vector<int>{1, 2, 2});
  CHECK(p.at(3) == std::vector<int>{1, 1});

  const auto s = direct_sum(AbelianGroup::parse("Z+Z2"), AbelianGroup::parse("Z+Z3"));
  CHECK(s == AbelianGroup{2, {6}});
}

TEST_CASE("building-block forms") {
  const IntersectionForm h = hyperbolic_form();
  CHECK(h.rank() == 2);
  CHECK(h.signature() == 0);
  CHECK(h.even());
  CHECK(h.unimodular());
  CHECK_FALSE(h.definite());

  const IntersectionForm e8 = e8_form();
  CHECK(e8.rank() == 8);
  CHECK(e8.signature() == 8);
  CHECK(e8.even());
  CHECK(e8.unimodular());
  CHECK(e8.definite());
  CHECK(negate(e8).signature() == -8);

  const IntersectionForm k3 = k3_form();
  CHECK(k3.rank() == 22);
  CHECK(k3.signature() == -16);
  CHECK(k3.even());
  CHECK(k3.unimodular());
}

TEST_CASE("forms of connected-sum words") {
  const IntersectionForm k3 = form_of_word({Gen4::K3});
  CHECK(k3.rank() == 22);
  CHECK(k3.signature() == -16);
  CHECK(k3.even());

  const IntersectionForm pm = form_of_word({Gen4::CP2, Gen4::CP2r});
  CHECK(pm.Q == diag_form({1, -1}).Q);
  CHECK_FALSE(pm.even());

  CHECK(form_of_word({Gen4::S4}).rank() == 0);
  CHECK(form_of_word({}).rank() == 0);
}

TEST_CASE("form_of_word is additive") {
  const Word4 w1{Gen4::CP2, Gen4::S2xS2};
  const Word4 w2{Gen4::K3, Gen4::CP2r};
  Word4 both = w1;
  both.insert(both.end(), w2.begin(), w2.end());
  const IntersectionForm f1 = form_of_word(w1), f2 = form_of_word(w2);
  const IntersectionForm sum = form_of_word(both);
  CHECK(sum.Q == direct_sum(f1, f2).Q);
  CHECK(sum.signature() == f1.signature() + f2.signature());
  CHECK(sum.even() == (f1.even() && f2.even()));
}

TEST_CASE("word parsing") {
  CHECK(parse_word4("") == Word4{});
  CHECK(parse_word4("CP2,CP2~") == Word4{Gen4::CP2, Gen4::CP2r});
  CHECK(parse_word4("K3") == Word4{Gen4::K3});
  CHECK(parse_gen4("S2xS2") == Gen4::S2xS2);
  CHECK(gen4_name(Gen4::CP2r) == "CP2~");
  CHECK_THROWS_AS(parse_gen4("T4"), std::invalid_argument);
}

TEST_CASE("homeomorphism types for b2 <= 2") {
  CHECK(homeotype_b2le2(hyperbolic_form()) == "S^2 x S^2");
  CHECK(homeotype_b2le2(diag_form({1, 1})) == "CP^2 # CP^2");
  CHECK(homeotype_b2le2(diag_form({-1, -1})) == "CP^2 # CP^2");
  CHECK(homeotype_b2le2(diag_form({1, -1})) == "CP^2 # -CP^2");
  CHECK(homeotype_b2le2(diag_form({})) == "S^4");
  CHECK(homeotype_b2le2(diag_form({1})) == "CP^2");
  CHECK_THROWS_AS(homeotype_b2le2(k3_form()), std::invalid_argument);
}

TEST_CASE("even-form realizability") {
  const EvenFormResult k3 = even_form_realizable(-2, 3);
  CHECK(k3.verdict == EvenFormVerdict::realizable);
  CHECK(k3.witness == Word4{Gen4::K3});
  CHECK_FALSE(k3.reversed);

  CHECK(even_form_realizable(1, 100).verdict == EvenFormVerdict::rokhlin_violation);
  CHECK(even_form_realizable(7, 2).verdict == EvenFormVerdict::rokhlin_violation);
  CHECK(even_form_realizable(-4, 5).verdict == EvenFormVerdict::open_under_11_8);
  CHECK(even_form_realizable(0, 2).verdict == EvenFormVerdict::realizable);
  CHECK(verdict_name(EvenFormVerdict::open_under_11_8) == "open_under_11_8");
}

TEST_CASE("realizable witnesses reproduce the form") {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const long long k = 2 * (static_cast<long long>(rng.span(-4.0, 4.0)));
    const long long l = 3 * std::abs(k) / 2 + static_cast<long long>(rng.span(0.0, 5.0));
    if (l == 0) continue;
    const EvenFormResult r = even_form_realizable(k, l);
    REQUIRE(r.verdict == EvenFormVerdict::realizable);
    IntersectionForm target = e8h_sum(k, l);
    if (r.reversed) target = negate(target);
    CHECK(same_form_type(form_of_word(r.witness), target));
  }
}

TEST_CASE("minimal-entropy decisions in dimension four") {
  SUBCASE("solvable words") {
    CHECK(entropy_decision_4m({}).solvable);
    CHECK(entropy_decision_4m({Gen4::S4}).witness == "S^4");
    CHECK(entropy_decision_4m({Gen4::CP2}).solvable);
    CHECK(entropy_decision_4m({Gen4::S2xS2}).solvable);
    CHECK(entropy_decision_4m({Gen4::CP2, Gen4::CP2r}).solvable);
    CHECK(entropy_decision_4m({Gen4::CP2, Gen4::CP2}).solvable);
  }
  SUBCASE("orientation reversal is ignored") {
    CHECK(entropy_decision_4m({Gen4::CP2r}).solvable);
    CHECK(entropy_decision_4m({Gen4::CP2r, Gen4::CP2r}).solvable);
  }
  SUBCASE("everything else is unsolved") {
    CHECK_FALSE(entropy_decision_4m({Gen4::K3}).solvable);
    CHECK_FALSE(entropy_decision_4m({Gen4::CP2, Gen4::CP2, Gen4::CP2}).solvable);
    CHECK_FALSE(entropy_decision_4m({Gen4::S2xS2, Gen4::S2xS2}).solvable);
  }
  SUBCASE("minimal entropy vanishes on every word") {
    oracle::Rng rng(5);
    for (int trial = 0; trial < 30; ++trial) {
      Word4 w;
      const int len = static_cast<int>(rng.span(0.0, 4.0));
      for (int i = 0; i < len; ++i)
        w.push_back(static_cast<Gen4>(static_cast<int>(rng.span(0.0, 4.99))));
      CHECK(entropy_decision_4m(w).minimal_entropy == 0.0);
    }
  }
}

TEST_SUITE_END();
