#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "symfloer/capped_orbits.hpp"
#include "symfloer/errors.hpp"

using namespace symfloer;
using namespace symfloer::ledger;

namespace {

Rational q(long n, long d = 1) { return make_rational(n, d); }

FormalCappedOrbit orbit(Rational h, Rational area = 0, long k = 0) {
  FormalCappedOrbit c;
  c.orbit = "x";
  c.hamiltonian = h;
  c.cap_area = area;
  c.cap_orb_points = k;
  return c;
}

struct Gen {
  std::mt19937_64 rng;
  explicit Gen(std::uint64_t seed) : rng(seed) {}
  long integer(long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); }
  Rational rational() { return q(integer(-12, 12), integer(1, 6)); }
  SphereClass sphere() { return {q(integer(0, 12), integer(1, 4)), Rational(integer(-2, 3)), integer(0, 3)}; }
  FormalCappedOrbit ledger() {
    FormalCappedOrbit c = orbit(rational(), q(integer(0, 9), integer(1, 3)), integer(1, 3));
    c.cz = Rational(integer(-4, 4));
    for (long i = integer(0, 3); i > 0; --i) c.spheres.push_back({integer(1, 2), sphere()});
    return c;
  }
};

// Minkowski sums over ordered compositions of k.
std::set<Rational> compositions_oracle(const SpectrumTable& t, long k) {
  std::set<Rational> out;
  if (k == 0) return {Rational(0)};
  for (long first = 1; first <= k; ++first)
    for (const auto& rest : compositions_oracle(t, k - first))
      for (const auto& a : t.at(first)) out.insert(a + rest);
  return out;
}

}  // namespace

TEST_CASE("actions") {
  CHECK(action(orbit(3), q(1, 4)) == 3);
  CHECK(action(orbit(0, 1, 2), q(1, 4)) == q(-3, 2));
  FormalCappedOrbit c = orbit(0);
  c.spheres.push_back({2, {1, 0, 1}});
  CHECK(action(c, q(1, 4)) == q(-5, 2));
  CHECK(omega(c.spheres, q(1, 4)) == q(5, 2));
}

TEST_CASE("equivalence of cappings") {
  FormalCappedOrbit a = orbit(1, q(1, 2), 1);
  CHECK(equivalent(a, a, q(1, 4)));
  FormalCappedOrbit b = orbit(1, q(1, 4), 2);
  CHECK(equivalent(a, b, q(1, 4)));
  CHECK_FALSE(equivalent(orbit(0, 1), orbit(0, 2), q(1, 4)));
  FormalCappedOrbit other = a;
  other.orbit = "y";
  CHECK_THROWS_AS(equivalent(a, other, q(1, 4)), DifferentOrbit);
}

TEST_CASE("recapping examples") {
  FormalCappedOrbit c = orbit(2, 1, 1);
  c.cz = 3;
  FormalCappedOrbit smooth = recap(c, {1, 1, 0}, false, q(1, 4));
  CHECK(action(smooth, q(1, 4)) - action(c, q(1, 4)) == -1);
  CHECK(cz_index(smooth) - cz_index(c) == 2);

  FormalCappedOrbit orb = recap(c, {0, 0, 2}, true, q(1, 4));
  CHECK(action(orb, q(1, 4)) == action(c, q(1, 4)));
  FormalCappedOrbit aged = recap(c, {0, 1, 2}, true, q(1, 4), 1, Ages{q(1, 2), q(1, 2)});
  CHECK(cz_index(aged) - cz_index(c) == 4);

  FormalCappedOrbit zero = recap(c, {0, 0, 0}, false, q(1, 4));
  CHECK(action(zero, q(1, 4)) == action(c, q(1, 4)));
  CHECK(cz_index(zero) == cz_index(c));

  CHECK_THROWS_AS(recap(c, {1, 0, 0}, true, q(1, 4)), PreconditionViolation);
  CHECK_THROWS_AS(recap(orbit(0), {1, 0, 1}, true, q(1, 4)), PreconditionViolation);
  CHECK_THROWS_AS(recap(c, {1, 0, 1}, false, q(1, 4), 0), PreconditionViolation);
}

TEST_CASE("recapping shifts and round trips on random ledgers") {
  Gen gen(11);
  for (int trial = 0; trial < 100; ++trial) {
    FormalCappedOrbit c = gen.ledger();
    SphereClass s = gen.sphere();
    Rational val = q(gen.integer(1, 6), gen.integer(1, 6));
    FormalCappedOrbit smooth = recap(c, s, false, val);
    CHECK(action(smooth, val) == action(c, val) - s.area - Rational(s.orb_points) * val);
    CHECK(cz_index(smooth) == cz_index(c) + 2 * s.c1);
    CHECK(parity(smooth) == parity(c));
    CHECK(recap(smooth, s, false, val, -1) == c);

    if (s.orb_points >= 1) {
      FormalCappedOrbit glued = recap(c, s, true, val);
      CHECK(action(glued, val) == action(c, val) - s.area - Rational(s.orb_points - 2) * val);
      FormalCappedOrbit back = recap(glued, s, true, val, -1);
      CHECK(back == c);
      CHECK(action(back, val) == action(c, val));
      CHECK(cz_index(back) == cz_index(c));
    }

    // Energy identity on ledgers related by recapping.
    CHECK(energy_identity(c, smooth, s.area, s.orb_points, val));
    CHECK_FALSE(energy_identity(c, smooth, s.area + q(1, 8), s.orb_points, val));
  }
}

TEST_CASE("energy identity examples") {
  FormalCappedOrbit c = orbit(1);
  CHECK(energy_identity(c, c, 0, 0, q(1, 4)));
  FormalCappedOrbit y = recap(c, {1, 0, 0}, false, q(1, 4));
  CHECK(energy_identity(c, y, 1, 0, q(1, 4)));
  CHECK_FALSE(energy_identity(c, y, q(9, 8), 0, q(1, 4)));
}

TEST_CASE("parity") {
  FormalCappedOrbit c = orbit(0);
  c.cz = 3;
  CHECK(parity(c) == Parity::odd);
  c.spheres.push_back({1, {0, 1, 0}});
  CHECK(cz_index(c) == 5);
  CHECK(parity(c) == Parity::odd);
  c.cz = 4;
  CHECK(parity(c) == Parity::even);
  FormalCappedOrbit half = orbit(0);
  half.cz = q(1, 2);
  CHECK_THROWS_AS(parity(half), NonIntegralCZ);
  half.spheres.push_back({1, {0, q(3, 4), 0}});
  CHECK(parity(half) == Parity::even);
}

TEST_CASE("Floer virtual dimension") {
  CHECK(vdim_floer(5, 5, 0) == -1);
  CHECK(vdim_floer(2, 3, 0) == 0);
  CHECK(vdim_floer(2, 2, 1) == 1);
  for (long a = -3; a <= 3; ++a)
    for (long b = -3; b <= 3; ++b)
      for (long c = -3; c <= 3; ++c)
        for (long k0 = 0; k0 <= 2; ++k0)
          for (long k1 = 0; k1 <= 2; ++k1)
            CHECK(vdim_floer(a, b, k0) + vdim_floer(b, c, k1) == vdim_floer(a, c, k0 + k1) - 1);
}

TEST_CASE("integralized actions") {
  Integralization a = integralize({0, q(1, 2), q(3, 2)}, std::nullopt, {});
  CHECK(a.n == 2);
  CHECK(a.epsilon == 0);
  CHECK(a.values == std::vector<Integer>{0, 1, 3});
  CHECK(integralize({q(1, 3), q(1, 2)}, std::nullopt, {}).n == 6);
  Integralization s = integralize({q(7, 5)}, std::nullopt, {});
  CHECK(s.n == 1);
  CHECK(s.epsilon == q(-7, 5));
  CHECK(integralize({0, 1}, q(1, 4), {q(2, 3)}).n == 12);

  Gen gen(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> acts;
    for (long i = gen.integer(1, 8); i > 0; --i) acts.push_back(gen.rational());
    Integralization r = integralize(acts, std::nullopt, {});
    for (std::size_t i = 0; i < acts.size(); ++i) {
      CHECK(r.values[i] >= 0);
      for (std::size_t j = 0; j < acts.size(); ++j) {
        CHECK((acts[i] < acts[j]) == (r.values[i] < r.values[j]));
        CHECK(Rational(r.values[i] - r.values[j]) == Rational(r.n) * (acts[i] - acts[j]));
      }
    }
    // Minimality: halving any prime factor of n breaks integrality.
    for (Integer p = 2; p <= r.n; ++p) {
      if (r.n % p != 0) continue;
      Integer smaller = r.n / p;
      bool integral = true;
      for (const auto& x : acts) integral = integral && is_integer(Rational(smaller) * (x + r.epsilon));
      CHECK_FALSE(integral);
    }
  }
}

TEST_CASE("Spec_k") {
  SpectrumTable t{{1, {0, 1}}, {2, {3}}};
  CHECK(spec_k(t, 1) == std::set<Rational>{0, 1});
  CHECK(spec_k(t, 2) == std::set<Rational>{0, 1, 2, 3});
  SpectrumTable zeros;
  for (long j = 1; j <= 6; ++j) zeros[j] = {0};
  for (long k = 1; k <= 6; ++k) CHECK(spec_k(zeros, k) == std::set<Rational>{0});
  CHECK_THROWS_AS(spec_k(t, 3), MissingTableEntry);

  Gen gen(17);
  for (int trial = 0; trial < 20; ++trial) {
    SpectrumTable r;
    for (long j = 1; j <= 6; ++j)
      while (r[j].size() < 5) r[j].insert(gen.rational());
    for (long k = 1; k <= 6; ++k) CHECK(spec_k(r, k) == compositions_oracle(r, k));
  }

  nlohmann::json j = nlohmann::json::parse(R"({"1": ["0", 1], "2": ["3/2"]})");
  SpectrumTable parsed = spectrum_table_from_json(j);
  CHECK(parsed.at(2) == std::set<Rational>{q(3, 2)});
  CHECK_THROWS_AS(spectrum_table_from_json(nlohmann::json::parse(R"({"x": []})")), ParseError);
}

TEST_CASE("spectrum is independent of val_v on the period lattice") {
  // Caps with area in (1/2)Z and orbifold points 0..3; val_v in (1/2)Z.
  auto spectrum = [](const Rational& val) {
    std::set<Rational> out;
    for (long a = -40; a <= 40; ++a)
      for (long k = 0; k <= 3; ++k) {
        Rational v = action(orbit(q(1, 3), q(a, 2), k), val);
        if (v >= -5 && v <= 5) out.insert(v);
      }
    return out;
  };
  CHECK(spectrum(q(1, 2)) == spectrum(q(3, 2)));
  CHECK(spectrum(q(1, 2)) == spectrum(1));
  CHECK(spectrum(q(1, 2)) != spectrum(q(1, 4)));
}

TEST_CASE("ledger JSON") {
  Gen gen(3);
  FormalCappedOrbit c = gen.ledger();
  c.marking = "1_x";
  CHECK(FormalCappedOrbit::from_json(nlohmann::json::parse(c.to_json().dump())) == c);
  CHECK_THROWS_AS(FormalCappedOrbit::from_json(nlohmann::json{{"cap_area", "1"}}), ParseError);
}

TEST_CASE("orbit classification") {
  PermutationGroup trivial = PermutationGroup::generated_by(3, {});
  OrbitClassification id = classify_orbits(trivial, {0, 1, 2});
  CHECK(id.pairs.size() == 3);
  CHECK(id.orbit_count == 3);

  PermutationGroup sym2 = PermutationGroup::generated_by(2, {{1, 0}});
  OrbitClassification swapped = classify_orbits(sym2, {1, 0});
  REQUIRE(swapped.pairs.size() == 2);
  for (const auto& p : swapped.pairs) {
    CHECK(sym2.cycle_notation(p.h) == "(1 2)");
    CHECK(p.stabilizer_order == 1);
  }
  CHECK(swapped.orbit_count == 1);

  OrbitClassification fixed = classify_orbits(sym2, {0, 1});
  CHECK(fixed.pairs.size() == 2);
  for (const auto& p : fixed.pairs) CHECK(p.h == 0);
  CHECK(fixed.orbit_count == 1);

  CHECK_THROWS_AS(classify_orbits(sym2, {0, 1, 2}), NonEquivariant);
  PermutationGroup sym3 = PermutationGroup::generated_by(3, {{1, 0, 2}, {1, 2, 0}});
  CHECK(sym3.order() == 6);
  CHECK_THROWS_AS(classify_orbits(sym3, {1, 0, 2}), NonEquivariant);

  // Orbit-stabilizer on Sym_3 acting on 3 points x Z/2 sheets, phi = sheet swap.
  std::vector<std::size_t> a{1, 0, 2, 4, 3, 5}, b{1, 2, 0, 4, 5, 3};
  PermutationGroup g6 = PermutationGroup::generated_by(6, {a, b});
  std::vector<std::size_t> phi{3, 4, 5, 0, 1, 2};
  OrbitClassification big = classify_orbits(g6, phi);
  std::map<std::size_t, std::size_t> orbit_size;
  for (const auto& p : big.pairs) ++orbit_size[p.orbit];
  for (const auto& p : big.pairs) CHECK(orbit_size[p.orbit] * p.stabilizer_order == g6.order());
  // Brute-force count of pairs.
  std::size_t expected = 0;
  for (std::size_t p = 0; p < 6; ++p)
    for (const auto& h : g6.elements) expected += h[p] == phi[p];
  CHECK(big.pairs.size() == expected);
}
