#include "symfloer/orbifold.hpp"

#include <algorithm>
#include <stdexcept>

namespace symfloer::orbifold {

long Partition::k() const {
  long sum = 0;
  for (long part : parts) sum += part;
  return sum;
}

long Partition::multiplicity(long m) const {
  return static_cast<long>(std::count(parts.begin(), parts.end(), m));
}

std::map<long, long> Partition::multiplicities() const {
  std::map<long, long> out;
  for (long part : parts) ++out[part];
  return out;
}

std::string Partition::str() const {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(parts[i]);
  }
  return out + ")";
}

namespace {

void partitions_into(long remaining, long max_part, std::vector<long>& prefix,
                     std::vector<Partition>& out) {
  if (remaining == 0) {
    out.push_back({prefix});
    return;
  }
  for (long part = std::min(remaining, max_part); part >= 1; --part) {
    prefix.push_back(part);
    partitions_into(remaining - part, part, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

std::vector<Partition> conjugacy_classes(long k) {
  if (k < 1) throw std::invalid_argument("conjugacy_classes: k must be >= 1");
  std::vector<Partition> out;
  std::vector<long> prefix;
  partitions_into(k, k, prefix, out);
  std::sort(out.begin(), out.end(),
            [](const Partition& a, const Partition& b) { return a.parts < b.parts; });
  return out;
}

Rational age(const Partition& p, long n) {
  if (n < 1) throw std::invalid_argument("age: dimension must be >= 1");
  return make_rational(n * (p.k() - p.cycles()), 2);
}

bool age_conjugation_check(const Partition& p, long n) {
  return 2 * age(p, n) == Rational(n * (p.k() - p.cycles()));
}

Integer centralizer_order(const Partition& p) {
  Integer out = 1;
  for (auto [m, a] : p.multiplicities()) {
    Integer mp;
    mpz_ui_pow_ui(mp.get_mpz_t(), static_cast<unsigned long>(m), static_cast<unsigned long>(a));
    out *= mp * factorial(static_cast<unsigned long>(a));
  }
  return out;
}

Sector sector(const Partition& p, long n) {
  return {p, p.cycles(), age(p, n), centralizer_order(p), n * p.cycles()};
}

long sector_rank_sym_p1(const Partition& p) {
  long rank = 1;
  for (auto [m, a] : p.multiplicities()) rank *= a + 1;
  return rank;
}

BettiTable sector_betti_sym_p1(const Partition& p) {
  // Sym^a(P^1) = P^a has one class in each even degree 0..2a.
  std::map<long, long> table{{0, 1}};
  for (auto [m, a] : p.multiplicities()) {
    std::map<long, long> next;
    for (auto [deg, rank] : table)
      for (long j = 0; j <= a; ++j) next[deg + 2 * j] += rank;
    table = std::move(next);
  }
  BettiTable out;
  for (auto [deg, rank] : table) out[Rational(deg)] = rank;
  return out;
}

BettiTable cr_betti_table(long k) {
  BettiTable out;
  for (const auto& p : conjugacy_classes(k)) {
    Rational shift = 2 * age(p, 1);
    for (const auto& [deg, rank] : sector_betti_sym_p1(p)) out[Rational(deg + shift)] += rank;
  }
  return out;
}

long total_rank(const BettiTable& table) {
  long sum = 0;
  for (const auto& [deg, rank] : table) sum += rank;
  return sum;
}

Rational vdim_closed(const Rational& c1_pairing, long n, long genus,
                     const std::vector<Rational>& ages) {
  Rational out = c1_pairing + Rational((n - 3) * (1 - genus)) + Rational(static_cast<long>(ages.size()));
  for (const auto& a : ages) out -= a;
  return out;
}

Rational vdim_breaking_defect(long n, long dim_z, const Rational& a1, const Rational& a2) {
  return Rational(n - dim_z) - (a1 + a2);
}

}  // namespace symfloer::orbifold
