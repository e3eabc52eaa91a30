#pragma once

#include <map>
#include <string>
#include <vector>

#include "symfloer/rational.hpp"

namespace symfloer::orbifold {

// A cycle type of Sym_k, stored as parts in non-increasing order.
struct Partition {
  std::vector<long> parts;

  long k() const;
  long cycles() const { return static_cast<long>(parts.size()); }
  // a_m: the number of m-cycles.
  long multiplicity(long m) const;
  std::map<long, long> multiplicities() const;
  std::string str() const;  // "(2,1,1)"

  friend bool operator==(const Partition&, const Partition&) = default;
};

// Degree -> rank. Degrees are rational in general, integral for Sym^k.
using BettiTable = std::map<Rational, long>;

struct Sector {
  Partition partition;
  long cycles;
  Rational age;
  Integer centralizer_order;
  long fixed_dimension;  // complex dimension n * l(lambda)
};

// All partitions of k, ordered lexicographically on the part vectors:
// k=3 gives (1,1,1), (2,1), (3).
std::vector<Partition> conjugacy_classes(long k);

Rational age(const Partition& p, long n);
bool age_conjugation_check(const Partition& p, long n);
Integer centralizer_order(const Partition& p);
Sector sector(const Partition& p, long n);

// Rank of the tensor product of Sym^{a_m} H*(P^1) over the cycle lengths m.
long sector_rank_sym_p1(const Partition& p);
// Unshifted Betti table of the fixed locus prod_m Sym^{a_m}(P^1).
BettiTable sector_betti_sym_p1(const Partition& p);
// Chen-Ruan Betti table of Sym^k(P^1), each sector shifted by 2 * age.
BettiTable cr_betti_table(long k);
long total_rank(const BettiTable& table);

// Complex virtual dimension of closed orbifold curves.
Rational vdim_closed(const Rational& c1_pairing, long n, long genus,
                     const std::vector<Rational>& ages);
// (n - dim Z) - (a1 + a2); zero means the nodal configuration is smoothable.
Rational vdim_breaking_defect(long n, long dim_z, const Rational& a1, const Rational& a2);

}  // namespace symfloer::orbifold
