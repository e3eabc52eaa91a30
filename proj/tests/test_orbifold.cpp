#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <numeric>
#include <random>
#include <set>

#include "symfloer/orbifold.hpp"

using namespace symfloer;
using namespace symfloer::orbifold;

namespace {

long partition_count(long n, long max_part) {
  if (n == 0) return 1;
  long total = 0;
  for (long part = 1; part <= std::min(n, max_part); ++part) total += partition_count(n - part, part);
  return total;
}

// Coefficients of prod_{m>=1} (1 - x^m)^{-2} up to x^n, by repeated
// multiplication with the geometric series 1/(1 - x^m).
std::vector<long> squared_partition_series(long n) {
  std::vector<long> c(n + 1, 0);
  c[0] = 1;
  for (long m = 1; m <= n; ++m) {
    for (int twice = 0; twice < 2; ++twice) {
      for (long i = m; i <= n; ++i) c[i] += c[i - m];
    }
  }
  return c;
}

// Cycle type of a permutation in one-line notation.
std::vector<long> cycle_type(const std::vector<int>& perm) {
  std::vector<bool> seen(perm.size(), false);
  std::vector<long> lengths;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    long len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    lengths.push_back(len);
  }
  std::sort(lengths.rbegin(), lengths.rend());
  return lengths;
}

// |{g in Sym_k : g s g^-1 = s}| for a representative s of the class.
long brute_centralizer(const Partition& p) {
  long k = p.k();
  std::vector<int> s(k);
  int start = 0;
  for (long len : p.parts) {
    for (long j = 0; j < len; ++j) s[start + j] = static_cast<int>(start + (j + 1) % len);
    start += static_cast<int>(len);
  }
  std::vector<int> g(k);
  std::iota(g.begin(), g.end(), 0);
  long count = 0;
  do {
    bool commutes = true;
    for (long i = 0; i < k && commutes; ++i) commutes = g[s[i]] == s[g[i]];
    if (commutes) ++count;
  } while (std::next_permutation(g.begin(), g.end()));
  return count;
}

// Age from the eigenvalues of the permutation action on C^{nk}: an m-cycle
// contributes weights j/m, j = 0..m-1, once per complex dimension.
Rational eigenvalue_age(const Partition& p, long n) {
  Rational total = 0;
  for (long m : p.parts)
    for (long j = 0; j < m; ++j) total += make_rational(j, m);
  return total * n;
}

}  // namespace

TEST_CASE("conjugacy classes") {
  auto two = conjugacy_classes(2);
  REQUIRE(two.size() == 2);
  CHECK(two[0].parts == std::vector<long>{1, 1});
  CHECK(two[1].parts == std::vector<long>{2});
  auto three = conjugacy_classes(3);
  REQUIRE(three.size() == 3);
  CHECK(three[1].str() == "(2,1)");
  CHECK(conjugacy_classes(5).size() == 7);
  for (long k = 1; k <= 12; ++k) {
    auto classes = conjugacy_classes(k);
    CHECK(static_cast<long>(classes.size()) == partition_count(k, k));
    std::set<std::vector<long>> unique;
    for (const auto& p : classes) {
      CHECK(p.k() == k);
      unique.insert(p.parts);
    }
    CHECK(unique.size() == classes.size());
  }
}

TEST_CASE("ages") {
  CHECK(age({{1, 1, 1}}, 2) == 0);
  CHECK(age({{2}}, 1) == make_rational(1, 2));
  CHECK(age({{3}}, 1) == 1);
  for (long k = 1; k <= 7; ++k)
    for (const auto& p : conjugacy_classes(k))
      for (long n = 1; n <= 3; ++n) CHECK(age(p, n) == eigenvalue_age(p, n));
}

TEST_CASE("age conjugation identity for k <= 12") {
  CHECK(age_conjugation_check({{1, 1}}, 1));
  CHECK(age_conjugation_check({{2}}, 1));
  CHECK(age_conjugation_check({{3, 2}}, 2));
  for (long k = 1; k <= 12; ++k)
    for (const auto& p : conjugacy_classes(k))
      for (long n = 1; n <= 3; ++n) CHECK(age_conjugation_check(p, n));
}

TEST_CASE("centralizer orders") {
  CHECK(centralizer_order({{1, 1, 1, 1}}) == 24);
  CHECK(centralizer_order({{2}}) == 2);
  CHECK(centralizer_order({{2, 1}}) == 2);
  for (long k = 1; k <= 6; ++k) {
    Integer class_sizes = 0;
    for (const auto& p : conjugacy_classes(k)) {
      CHECK(centralizer_order(p) == brute_centralizer(p));
      class_sizes += factorial(k) / centralizer_order(p);
    }
    CHECK(class_sizes == factorial(k));
  }
}

TEST_CASE("sector ranks") {
  // Sym^2 of a rank-2 space: multisets of size 2 from 2 basis vectors.
  CHECK(sector_rank_sym_p1({{1, 1}}) == 3);
  CHECK(sector_rank_sym_p1({{2}}) == 2);
  CHECK(sector_rank_sym_p1({{1, 1}}) + sector_rank_sym_p1({{2}}) == 5);
  auto series = squared_partition_series(12);
  for (long k = 1; k <= 12; ++k) {
    long sum = 0;
    for (const auto& p : conjugacy_classes(k)) sum += sector_rank_sym_p1(p);
    CHECK(sum == series[k]);
  }
}

TEST_CASE("Chen-Ruan Betti tables") {
  BettiTable one = cr_betti_table(1);
  CHECK(one == BettiTable{{Rational(0), 1}, {Rational(2), 1}});
  BettiTable two = cr_betti_table(2);
  BettiTable expected;
  for (long d = 0; d <= 4; ++d) expected[Rational(d)] = 1;
  CHECK(two == expected);
  CHECK(total_rank(cr_betti_table(3)) == 10);

  auto series = squared_partition_series(12);
  for (long k = 1; k <= 12; ++k) {
    BettiTable t = cr_betti_table(k);
    CHECK(total_rank(t) == series[k]);
    for (const auto& [deg, rank] : t) {
      CHECK(is_integer(deg));
      CHECK(deg >= 0);
      CHECK(deg <= 2 * k);
    }
    // Poincare duality of the coarse space pairs degree d with 2k - d.
    for (const auto& [deg, rank] : t) CHECK(t.at(Rational(2 * k - deg)) == rank);
  }
}

TEST_CASE("virtual dimensions") {
  CHECK(vdim_closed(0, 3, 0, {}) == 0);
  CHECK(vdim_closed(2, 1, 0, {0, 0, 0}) == 3);
  CHECK(vdim_closed(0, 2, 0, {make_rational(1, 2), make_rational(1, 2)}) == 0);
  CHECK(vdim_breaking_defect(2, 2, 0, 0) == 0);
  CHECK(vdim_breaking_defect(1, 0, make_rational(1, 2), make_rational(1, 2)) == 0);
  CHECK(vdim_breaking_defect(2, 0, make_rational(1, 2), make_rational(1, 2)) == 1);
}

TEST_CASE("vdim bookkeeping under node insertion") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<long> small(0, 4);
  std::uniform_int_distribution<long> denom(1, 4);
  auto random_ages = [&](long count) {
    std::vector<Rational> out;
    for (long i = 0; i < count; ++i) out.push_back(make_rational(small(rng), denom(rng)));
    return out;
  };
  for (int trial = 0; trial < 200; ++trial) {
    long n = 1 + small(rng) % 3;
    long dim_z = small(rng) % (n + 1);
    Rational c1a = small(rng), c1b = small(rng);
    auto ages_a = random_ages(small(rng));
    auto ages_b = random_ages(small(rng));
    Rational node_a = make_rational(small(rng), 2), node_b = make_rational(small(rng), 2);

    auto with_a = ages_a;
    with_a.push_back(node_a);
    auto with_b = ages_b;
    with_b.push_back(node_b);
    auto glued_ages = ages_a;
    glued_ages.insert(glued_ages.end(), ages_b.begin(), ages_b.end());

    Rational broken = vdim_closed(c1a, n, 0, with_a) + vdim_closed(c1b, n, 0, with_b) - dim_z;
    Rational glued = vdim_closed(c1a + c1b, n, 0, glued_ages);
    CHECK(broken == glued - 1 + vdim_breaking_defect(n, dim_z, node_a, node_b));
  }
}
