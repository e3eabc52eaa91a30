// Acceptance gate: one PASS/FAIL line per criterion. Exact criteria use
// tolerance 0; each criterion also has a wall-clock limit.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>

#include "json.hpp"
#include "symfloer/capped_orbits.hpp"
#include "symfloer/errors.hpp"
#include "symfloer/flow.hpp"
#include "symfloer/orbifold.hpp"
#include "symfloer/potential.hpp"
#include "symfloer/quantum_algebra.hpp"
#include "symfloer/quasimorphism.hpp"

using namespace symfloer;

namespace {

// Collects failed checks; the first few are echoed under the criterion line.
struct Checker {
  std::size_t checks = 0;
  std::vector<std::string> failures;

  void operator()(bool ok, const std::string& what) {
    ++checks;
    if (!ok) failures.push_back(what);
  }
  template <class E, class F>
  void throws(F&& f, const std::string& what) {
    ++checks;
    try {
      f();
      failures.push_back(what + ": no exception");
    } catch (const E&) {
    } catch (const std::exception& e) {
      failures.push_back(what + ": wrong exception " + e.what());
    }
  }
};

Rational q(long n, long d = 1) { return make_rational(n, d); }
std::string str(const Rational& r) { return to_string(r); }

// ---------------------------------------------------------------------------

std::string hessian_law(Checker& check) {
  auto cert = potential::weyl_certificate(potential::parse_bk_rule("1/ceil(sqrt(k))"), 1, 8, 1);
  check(cert.rows.size() == 8, "eight rows");
  for (const auto& row : cert.rows) {
    long s = 1;
    while (s * s < row.k) ++s;
    std::string k = "k=" + std::to_string(row.k);
    check(row.B == q(1, s), k + ": B_k");
    check(row.k == 1 || row.A == (1 - 2 * row.B) / (row.k - 1), k + ": A_k");
    check(!row.config_error, k + ": config rejected");
    if (row.config_error) continue;
    check(row.morse, k + ": not Morse");
    for (const auto& z : row.critical_point) check(z.is_unitary(), k + ": coordinate off the unitary torus");
    check(row.hessian->valuation == row.k * row.B, k + ": val det Hess = " + str(row.hessian->valuation));
  }
  for (std::size_t i = 0; i + 1 < cert.rows.size(); ++i) check(cert.rows[i + 1].ratio <= cert.rows[i].ratio, "ratio increases");
  check(cert.rows.back().ratio < cert.rows.front().ratio, "ratio does not decrease");
  check(cert.pass, "certificate verdict");
  return "val(det Hess) = k B_k for k = 1..8, ratio B_k from 1 to 1/3";
}

std::string idempotent_obstruction(Checker& check) {
  for (long omega : {1L, 2L}) {
    qalg::FiniteCommAlgebra p1 = qalg::qh_p1(omega);
    std::vector<qalg::InvariantSubalgebra> algebras;
    for (long k = 1; k <= 6; ++k) algebras.push_back(qalg::symmetric_invariant_subalgebra(p1, k));
    std::vector<qalg::WeylFamilyMember> family;
    for (long k = 1; k <= 6; ++k) {
      const auto& alg = algebras[k - 1].algebra;
      std::string tag = "omega=" + std::to_string(omega) + " k=" + std::to_string(k);
      auto es = qalg::idempotent_decomposition(alg);
      check(es.size() == static_cast<std::size_t>(k + 1), tag + ": idempotent count");
      qalg::Element total = alg.zero();
      for (std::size_t i = 0; i < es.size(); ++i) {
        total = qalg::add(total, es[i]);
        check(qalg::valuation(es[i]) == ExtRational(q(-k * omega, 2)), tag + ": valuation");
        check(qalg::grade_check(alg, es[i]) == Rational(0), tag + ": grade");
        check(qalg::is_zero(qalg::sub(alg.multiply(es[i], es[i]), es[i])), tag + ": not idempotent");
        for (std::size_t j = i + 1; j < es.size(); ++j)
          check(qalg::is_zero(alg.multiply(es[i], es[j])), tag + ": not orthogonal");
        // Indecomposable: e A is one-dimensional.
        check(alg.multiplication_matrix(es[i]).rank() == 1, tag + ": summand rank");
      }
      check(qalg::is_zero(qalg::sub(total, alg.unit())), tag + ": idempotents do not sum to 1");
      if (!es.empty()) family.push_back({k, &alg, es.front()});
    }
    auto report = qalg::weyl_idempotent_predicate(family);
    check(!report.pass(), "omega=" + std::to_string(omega) + ": predicate passes");
    check(report.constant_ratio == q(-omega, 2), "omega=" + std::to_string(omega) + ": constant ratio");
  }
  return "k+1 idempotents of valuation -k omega/2, grade 0; predicate FAIL with ratio -omega/2";
}

// prod_m (1 - x^m)^(-2) up to x^n.
std::vector<Integer> two_colour_partitions(long n) {
  std::vector<Integer> c(n + 1);
  c[0] = 1;
  for (int copy = 0; copy < 2; ++copy)
    for (long m = 1; m <= n; ++m)
      for (long i = m; i <= n; ++i) c[i] += c[i - m];
  return c;
}

std::string chen_ruan_tables(Checker& check) {
  auto oracle = two_colour_partitions(12);
  for (long k = 1; k <= 12; ++k) {
    std::string tag = "k=" + std::to_string(k);
    auto table = orbifold::cr_betti_table(k);
    check(Integer(orbifold::total_rank(table)) == oracle[k], tag + ": total rank");
    for (const auto& [deg, rank] : table) check(is_integer(deg) && rank > 0, tag + ": degree " + str(deg));
    for (const auto& p : orbifold::conjugacy_classes(k))
      for (long n = 1; n <= 3; ++n) {
        // Eigenvalue fractions j/m on each m-cycle block, n copies; the
        // inverse has fractions (m-j)/m.
        Rational a, a_inv;
        for (long m : p.parts)
          for (long j = 1; j < m; ++j) {
            a += q(n * j, m);
            a_inv += q(n * (m - j), m);
          }
        Rational codim(n * (k - p.cycles()));
        check(orbifold::age(p, n) == a, tag + " " + p.str() + ": age");
        check(a + a_inv == codim, tag + " " + p.str() + ": age identity oracle");
        check(orbifold::age_conjugation_check(p, n), tag + " " + p.str() + ": age identity");
      }
  }
  orbifold::BettiTable k2{{0, 1}, {1, 1}, {2, 1}, {3, 1}, {4, 1}};
  check(orbifold::cr_betti_table(2) == k2, "k=2 table");
  return "ranks match prod (1-x^m)^-2 through k=12; k=2 table {0..4: 1}; age identity for n=1,2,3";
}

std::string flow_soundness(Checker& check) {
  std::size_t nonzero = 0, subadd_samples = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto cat = flow::random_consistent_category(seed, 5 + seed % 4, 2 + static_cast<long>(seed % 3) * 2);
    auto rep = flow::verify_d_squared(cat, seed);
    check(rep.ok, "seed " + std::to_string(seed) + ": " + rep.str(cat));
    if (!rep.ok || seed > 60) continue;
    flow::FilteredComplex c = flow::build_differential(cat);
    flow::Reduction r = flow::reduce(c);
    const Rational delta = q(static_cast<long>(seed % 11) - 5, 3);
    flow::FilteredComplex shifted = c.level_shifted(delta);
    flow::Reduction rs = flow::reduce(shifted);
    for (const auto& z : r.cycles) {
      auto v = flow::spectral_invariant(c, r, z);
      auto vs = flow::spectral_invariant(shifted, rs, z);
      check(v.has_value() == vs.has_value(), "seed " + std::to_string(seed) + ": shift changes zero class");
      if (!v || !vs) continue;
      ++nonzero;
      bool in_spectrum = false;
      for (const auto& l : c.levels) {
        Rational n = (l - *v) / c.step;
        in_spectrum = in_spectrum || (is_integer(n) && n >= 0);
      }
      check(in_spectrum, "seed " + std::to_string(seed) + ": spectrality");
      check(*vs == *v + delta, "seed " + std::to_string(seed) + ": shift");
    }
  }
  check(nonzero >= 40, "too few nonzero classes");
  for (std::uint64_t seed = 1; seed <= 50; ++seed) {
    auto inst = flow::random_compatible_product(seed, 4 + seed % 3);
    auto rep = flow::verify_subadditivity(inst.left, inst.right, inst.target, inst.table, 8, seed);
    check(rep.pass, "product " + std::to_string(seed) + ": subadditivity");
    subadd_samples += rep.samples - rep.skipped;
  }
  return "200 categories d^2 = 0; " + std::to_string(nonzero) + " classes spectral and shift-exact; 50 products, " +
         std::to_string(subadd_samples) + " subadditive samples";
}

// Minkowski sums over ordered compositions of k.
std::set<Rational> compositions(const ledger::SpectrumTable& t, long k) {
  if (k == 0) return {Rational(0)};
  std::set<Rational> out;
  for (long first = 1; first <= k; ++first)
    for (const auto& rest : compositions(t, k - first))
      for (const auto& a : t.at(first)) out.insert(a + rest);
  return out;
}

std::string ledger_identities(Checker& check) {
  std::mt19937_64 rng(2024);
  auto integer = [&](long lo, long hi) { return std::uniform_int_distribution<long>(lo, hi)(rng); };
  auto rational = [&] { return q(integer(-12, 12), integer(1, 6)); };
  auto sphere = [&] { return ledger::SphereClass{q(integer(0, 12), integer(1, 4)), Rational(integer(-2, 3)), integer(1, 3)}; };
  for (int trial = 0; trial < 100; ++trial) {
    ledger::FormalCappedOrbit c;
    c.orbit = "x" + std::to_string(trial % 3);
    c.hamiltonian = rational();
    c.cap_area = q(integer(0, 9), integer(1, 3));
    c.cap_orb_points = integer(1, 3);
    c.cz = Rational(integer(-4, 4));
    for (long i = integer(0, 3); i > 0; --i) c.spheres.push_back({integer(1, 2), sphere()});
    ledger::SphereClass s = sphere();
    Rational val = q(integer(1, 6), integer(1, 6));
    std::string tag = "ledger " + std::to_string(trial);

    auto smooth = ledger::recap(c, s, false, val);
    check(ledger::action(smooth, val) - ledger::action(c, val) == -(s.area + s.orb_points * val), tag + ": smooth shift");
    check(ledger::cz_index(smooth) - ledger::cz_index(c) == 2 * s.c1, tag + ": smooth CZ");
    check(ledger::recap(smooth, s, false, val, -1) == c, tag + ": smooth round trip");
    check(ledger::energy_identity(c, smooth, s.area, s.orb_points, val), tag + ": energy identity");

    auto glued = ledger::recap(c, s, true, val);
    check(ledger::action(glued, val) - ledger::action(c, val) == -(s.area + (s.orb_points - 2) * val),
          tag + ": orbifold shift");
    check(ledger::recap(glued, s, true, val, -1) == c, tag + ": orbifold round trip");
    check(ledger::energy_identity(c, glued, s.area, s.orb_points - 2, val), tag + ": energy identity (orbifold)");
  }
  for (int trial = 0; trial < 20; ++trial) {
    ledger::SpectrumTable t;
    for (long j = 1; j <= 6; ++j)
      while (t[j].size() < 5) t[j].insert(rational());
    for (long k = 1; k <= 6; ++k) check(ledger::spec_k(t, k) == compositions(t, k), "spec_k k=" + std::to_string(k));
  }
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Rational> acts;
    for (long i = integer(1, 8); i > 0; --i) acts.push_back(rational());
    auto r = ledger::integralize(acts, std::nullopt, {});
    for (std::size_t i = 0; i < acts.size(); ++i) {
      check(r.values[i] >= 0, "integralize: negative value");
      check(Rational(r.values[i]) == r.n * (acts[i] + r.epsilon), "integralize: value");
      for (std::size_t j = 0; j < acts.size(); ++j)
        check((acts[i] < acts[j]) == (r.values[i] < r.values[j]), "integralize: order");
    }
  }
  return "recap round trips, action shifts and energy identity on 100 ledgers; spec_k = compositions for k <= 6";
}

std::string quasimorphism_mechanism(Checker& check) {
  auto a5 = qm::FiniteGroupTable::alternating5();
  check(qm::is_perfect(a5), "A5 perfect");
  std::size_t f = a5.index_of("(1 2 3)");
  std::vector<std::vector<qm::ConjugateFactor>> closure;
  std::vector<std::vector<qm::Commutator>> commutators;
  for (std::size_t x = 0; x < a5.order(); ++x) {
    closure.push_back(qm::closure_expression(a5, {f}, x));
    commutators.push_back(qm::commutator_expression(a5, x));
    check(qm::evaluate(a5, closure.back()) == x, "closure expression product");
    check(qm::evaluate(a5, commutators.back()) == x, "commutator expression product");
  }
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 100; ++trial) {
    auto mu = qm::random_function(a5, rng);
    Rational d = qm::defect(a5, mu);
    check(abs(mu[0]) <= d, "|mu(e)| <= defect");
    for (std::size_t x = 0; x < a5.order(); ++x) {
      check(qm::conjugate_bound_check(a5, mu, d, closure[x]), "conjugate-product bound at " + a5.names[x]);
      check(qm::commutator_bound_check(a5, mu, d, commutators[x]), "commutator bound at " + a5.names[x]);
    }
  }
  return "100 random mu x 60 elements: conjugate-product 5N D and commutator (8N-1) D bounds, |mu(e)| <= D";
}

std::string error_paths(Checker& check) {
  potential::LaurentPoly mono(1);
  mono.add_term({1}, NovikovSeries::T(q(1, 2)));
  check.throws<NoLeadingCriticalPoint>([&] { potential::leading_critical_points(mono); }, "single monomial");

  potential::LinkConfig cfg{3, q(1, 4), q(1, 4), 1, std::nullopt};
  check.throws<ConfigError>([&] { cfg.validate(); }, "A = B config");
  cfg.A = q(1, 2);
  check.throws<ConfigError>([&] { cfg.validate(); }, "A > B config");

  check.throws<NonSquareLeading>([] { NovikovSeries(2).sqrt(); }, "sqrt of 2");
  check.throws<NonSquareLeading>([] { NovikovSeries::parse("3*T^(2) + T^(3)").sqrt(); }, "sqrt of 3 T^2 + ...");

  auto hand = nlohmann::json::parse(R"({
    "generators": [{"id": "p1", "action": 0}, {"id": "p2", "action": 1},
                   {"id": "p3", "action": 2}, {"id": "p4", "action": 3}],
    "step": 8,
    "counts": [{"k": 0, "from": "p1", "to": "p2", "value": "1"},
               {"k": 0, "from": "p1", "to": "p3", "value": "1"},
               {"k": 0, "from": "p2", "to": "p4", "value": "1"},
               {"k": 0, "from": "p3", "to": "p4", "value": "1"}]})");
  auto cat = flow::SyntheticFlowCategory::from_json(hand);
  auto rep = flow::verify_d_squared(cat);
  check(!rep.ok, "d^2 violation accepted");
  check(rep.p && cat.generators[*rep.p].id == "p1" && rep.q && cat.generators[*rep.q].id == "p4" && rep.k == 0L,
        "violating triple " + rep.str(cat));
  check.throws<InvariantViolation>([&] { flow::build_differential(cat); }, "build_differential on a bad table");
  return rep.str(cat);
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    double limit_seconds;
    std::function<std::string(Checker&)> run;
  };
  std::vector<Criterion> criteria{
      {1, "Hessian-valuation law", 5, hessian_law},
      {2, "symmetric idempotent obstruction", 10, idempotent_obstruction},
      {3, "Chen-Ruan tables", 2, chen_ruan_tables},
      {4, "flow engine soundness", 30, flow_soundness},
      {5, "ledger identities", 5, ledger_identities},
      {6, "quasimorphism mechanism", 30, quasimorphism_mechanism},
      {7, "error paths", 5, error_paths},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Checker check;
    std::string detail;
    auto start = std::chrono::steady_clock::now();
    try {
      detail = c.run(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("unexpected exception: ") + e.what());
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = seconds < c.limit_seconds;
    bool pass = check.failures.empty() && in_time;
    failed += !pass;
    std::ostringstream line;
    line.setf(std::ios::fixed);
    line.precision(2);
    line << (pass ? "PASS" : "FAIL") << " [" << c.id << "] " << c.name << ": " << check.checks << " checks, "
         << check.failures.size() << " failed, " << seconds << " s (limit " << c.limit_seconds << " s)";
    if (!detail.empty()) line << "; " << detail;
    std::cout << line.str() << "\n";
    for (std::size_t i = 0; i < check.failures.size() && i < 5; ++i) std::cout << "    " << check.failures[i] << "\n";
    if (!in_time) std::cout << "    runtime limit exceeded\n";
  }
  std::cout << (failed ? "acceptance: FAIL" : "acceptance: PASS") << " (" << criteria.size() - failed << "/"
            << criteria.size() << ")\n";
  return failed ? 1 : 0;
}
