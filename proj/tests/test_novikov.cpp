#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "symfloer/errors.hpp"
#include "symfloer/novikov.hpp"

using namespace symfloer;

namespace {

NovikovSeries P(const char* text) { return NovikovSeries::parse(text); }

Rational q(long n, long d = 1) { return make_rational(n, d); }

// Random exact series with exponents on the grid (1/den)Z in [lo, lo + span).
NovikovSeries random_series(std::mt19937& rng, long den, long lo, long span, int max_terms) {
  std::uniform_int_distribution<long> expo(0, span - 1);
  std::uniform_int_distribution<long> coeff(-5, 5);
  std::uniform_int_distribution<int> count(1, max_terms);
  std::vector<NovikovSeries::Term> terms;
  int n = count(rng);
  for (int i = 0; i < n; ++i) terms.push_back({q(lo + expo(rng), den), q(coeff(rng))});
  return NovikovSeries::from_terms(std::move(terms));
}

}  // namespace

TEST_CASE("valuation") {
  CHECK(P("T^(1/2)").val() == ExtRational(q(1, 2)));
  CHECK(NovikovSeries().val().is_infinite());
  CHECK(P("3*T^(-2) + 5*T").val() == ExtRational(-2));
}

TEST_CASE("ring operations") {
  CHECK(P("1 + T") + NovikovSeries(-1) == P("T"));
  CHECK(P("1 + T") * P("1 - T") == P("1 - T^(2)"));

  // Multiply exactly, then cut at T^3.
  NovikovSeries a = P("1 + T").truncated(3);
  NovikovSeries b = P("1 + T^(2)").truncated(3);
  NovikovSeries exact = (P("1 + T") * P("1 + T^(2)")).truncated(3);
  CHECK(a * b == exact);
  CHECK((a * b).str() == "1 + T^(1) + T^(2) + O(T^(3))");
}

TEST_CASE("invert") {
  CHECK(NovikovSeries(2).invert() == NovikovSeries(q(1, 2)));
  CHECK(P("T").invert() == P("T^(-1)"));

  NovikovSeries s = P("1 + T").truncated(3);
  NovikovSeries t = s.invert();
  CHECK(t == P("1 - T + T^(2)").truncated(3));
  CHECK((s * t).truncated(3) == NovikovSeries(1).truncated(3));

  CHECK_THROWS_AS(NovikovSeries().invert(), ZeroInverse);
  CHECK_THROWS_AS(NovikovSeries::zero_mod(ExtRational(2)).invert(), ZeroInverse);
}

TEST_CASE("invert exact multi-term input at requested precision") {
  NovikovSeries s = P("2*T^(-1) + 3 + T^(1/2)");
  NovikovSeries t = s.invert(q(5));
  CHECK(t.val() == ExtRational(1));
  CHECK(t.truncation() == ExtRational(6));
  NovikovSeries one = (s * t).truncated(ExtRational(q(5)));
  CHECK(one == NovikovSeries(1).truncated(5));
}

TEST_CASE("sqrt") {
  CHECK(P("T^(2)").sqrt() == P("T"));
  NovikovSeries s = P("4 + 4*T").truncated(3);
  NovikovSeries r = s.sqrt();
  CHECK(r == P("2 + T - 1/4*T^(2)").truncated(3));
  CHECK(r * r == s);

  CHECK_THROWS_AS(NovikovSeries(2).sqrt(), NonSquareLeading);
  CHECK_THROWS_AS(NovikovSeries(-4).sqrt(), NonSquareLeading);
  CHECK_THROWS_AS(P("T").sqrt(std::nullopt, q(1)), OddValuation);
  CHECK(P("T").sqrt() == P("T^(1/2)"));
}

TEST_CASE("parse and format") {
  NovikovSeries s = P("3*T^(1/2) - 2*T^(2)");
  REQUIRE(s.terms().size() == 2);
  CHECK(s.terms()[0].exponent == q(1, 2));
  CHECK(s.terms()[0].coefficient == 3);
  CHECK(s.terms()[1].exponent == 2);
  CHECK(s.terms()[1].coefficient == -2);
  CHECK(s.str() == "3*T^(1/2) - 2*T^(2)");

  CHECK(P("0").is_zero());
  CHECK(P("0").str() == "0");

  NovikovSeries m = P("T^(1/3)+T^(1/3)");
  REQUIRE(m.terms().size() == 1);
  CHECK(m.terms()[0].exponent == q(1, 3));
  CHECK(m.terms()[0].coefficient == 2);

  CHECK(P("-1/2 + T^(-3/4) + O(T^(5))").str() == "T^(-3/4) - 1/2 + O(T^(5))");
  CHECK(P("O(T^(2))") == NovikovSeries::zero_mod(2));

  for (const char* text : {"7/3*T^(-1/2) - T^(1/2) + 2", "-T^(2)", "1 + O(T^(1/7))"}) {
    NovikovSeries x = P(text);
    CHECK(P(x.str().c_str()) == x);
  }
}

TEST_CASE("parse errors carry positions") {
  try {
    P("3*X");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.position() == 2);
  }
  CHECK_THROWS_AS(P(""), ParseError);
  CHECK_THROWS_AS(P("1 2"), ParseError);
  CHECK_THROWS_AS(P("T^(1/0)"), ParseError);
  CHECK_THROWS_AS(P("O(T^(1)) + T"), ParseError);
}

TEST_CASE("field axioms on random samples") {
  std::mt19937 rng(7);
  for (int i = 0; i < 200; ++i) {
    NovikovSeries s = random_series(rng, 3, -3, 9, 4);
    NovikovSeries t = random_series(rng, 2, -2, 8, 4);
    NovikovSeries u = random_series(rng, 6, 0, 12, 3);
    CHECK((s + t) + u == s + (t + u));
    CHECK(s * (t + u) == s * t + s * u);
    CHECK(s * t == t * s);
    if (!s.is_zero()) {
      NovikovSeries inv = s.invert(q(4));
      ExtRational cut = ExtRational(q(4));
      CHECK((s * inv).truncated(cut) == NovikovSeries(1).truncated(cut));
      CHECK(inv.val() == ExtRational(Rational(-s.leading_exponent())));
    }
  }
}

TEST_CASE("valuation is non-archimedean") {
  std::mt19937 rng(11);
  for (int i = 0; i < 200; ++i) {
    NovikovSeries s = random_series(rng, 2, -4, 10, 3);
    NovikovSeries t = random_series(rng, 3, -4, 10, 3);
    CHECK((s + t).val() >= min(s.val(), t.val()));
    if (s.val() != t.val()) CHECK((s + t).val() == min(s.val(), t.val()));
    CHECK((s * t).val() == s.val() + t.val());
  }
}

TEST_CASE("truncation monotonicity") {
  std::mt19937 rng(3);
  for (int i = 0; i < 100; ++i) {
    NovikovSeries s = random_series(rng, 2, 0, 6, 3) + NovikovSeries(1);
    NovikovSeries coarse = s.invert(q(3));
    NovikovSeries fine = s.invert(q(7));
    CHECK(fine.truncated(coarse.truncation()) == coarse);
    if (s.leading_coefficient() == 1) {
      NovikovSeries root = s.sqrt(q(2));
      CHECK(s.sqrt(q(6)).truncated(root.truncation()) == root);
    }
  }
}

TEST_CASE("membership predicates") {
  CHECK(P("1 + T").is_unitary());
  CHECK_FALSE(P("T").is_unitary());
  CHECK(P("T^(1/2)").in_positive_ideal());
  CHECK(NovikovSeries().in_positive_ideal());
  CHECK(P("1 + T").in_nonnegative());
  CHECK_FALSE(P("T^(-1)").in_nonnegative());
  CHECK(P("T^(2/3) + 5*T^(4/3)").in_periodic_positive(q(2, 3)));
  CHECK_FALSE(P("T^(2/3) + T").in_periodic_positive(q(2, 3)));
  CHECK_FALSE(P("1 + T^(2/3)").in_periodic_positive(q(2, 3)));
}

TEST_CASE("default relative precision follows the exponent grid") {
  CHECK(P("1 + T").default_relative_precision() == 64);
  CHECK(P("1 + T^(1/3) + T^(1/2)").default_relative_precision() == q(64, 6));
}

TEST_CASE("matrix determinant, rank, solve") {
  NovikovMatrix m(2, 2);
  m(0, 0) = P("T");
  m(0, 1) = P("1");
  m(1, 0) = P("1");
  m(1, 1) = P("T^(2)");
  CHECK(m.determinant() == P("T^(3) - 1"));
  CHECK(m.rank() == 2);
  auto x = m.solve({P("1"), P("0")}, q(8));
  auto back = m.apply(x);
  CHECK(back[0].truncated(ExtRational(q(6))) == NovikovSeries(1).truncated(6));
  CHECK(back[1].truncated(ExtRational(q(6))) == NovikovSeries::zero_mod(6));

  NovikovMatrix singular(2, 2);
  singular(0, 0) = P("1 + T");
  singular(0, 1) = P("2 + 2*T");
  singular(1, 0) = P("1");
  singular(1, 1) = P("2");
  CHECK(singular.rank() == 1);
  CHECK(singular.determinant().is_zero());
  CHECK_THROWS_AS(singular.solve({P("1"), P("1")}), ZeroDeterminant);
}

TEST_CASE("characteristic polynomial") {
  NovikovMatrix m(2, 2);
  m(0, 1) = P("T");
  m(1, 0) = P("1");
  // x^2 - T
  auto c = m.characteristic_polynomial();
  REQUIRE(c.size() == 3);
  CHECK(c[0] == P("-T"));
  CHECK(c[1].is_zero());
  CHECK(c[2] == NovikovSeries(1));

  NovikovMatrix d(3, 3);
  d(0, 0) = P("1");
  d(1, 1) = P("2");
  d(2, 2) = P("T");
  // (x-1)(x-2)(x-T)
  auto e = d.characteristic_polynomial();
  CHECK(e[0] == P("-2*T"));
  CHECK(e[1] == P("2 + 3*T"));
  CHECK(e[2] == P("-3 - T"));
}
