#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "symfloer/rational.hpp"

namespace symfloer::qm {

/// A finite group by its multiplication table; element 0 is the identity.
struct FiniteGroupTable {
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul;  // mul[a][b] = ab
  std::vector<std::size_t> inv;

  // Checks closure, identity at 0, inverses and associativity; fills inv.
  // Throws GroupAxiomViolation.
  static FiniteGroupTable from_table(std::vector<std::string> names, std::vector<std::vector<std::size_t>> mul);
  // Closure of the given permutations of {0..n-1}; x y acts as x after y.
  static FiniteGroupTable from_permutations(std::size_t n, const std::vector<std::vector<std::size_t>>& generators);
  static FiniteGroupTable alternating5();
  static FiniteGroupTable cyclic(std::size_t n);
  static FiniteGroupTable by_name(const std::string& name);  // "a5", "s3", "z2", "trivial", "zN"

  std::size_t order() const { return names.size(); }
  std::size_t commutator(std::size_t a, std::size_t b) const { return mul[mul[a][b]][mul[inv[a]][inv[b]]]; }
  std::size_t index_of(const std::string& name) const;  // throws PreconditionViolation
};

using GroupFunction = std::vector<Rational>;

// max_{g,h} |mu(gh) - mu(g) - mu(h)|.
Rational defect(const FiniteGroupTable& g, const GroupFunction& mu);
Rational sup_norm(const GroupFunction& mu);

// Numerators in [-bound, bound], denominators in [1, 6].
GroupFunction random_function(const FiniteGroupTable& g, std::mt19937_64& rng, long bound = 20);

bool is_perfect(const FiniteGroupTable& g);

/// l f^sign l^-1.
struct ConjugateFactor {
  std::size_t ell;
  std::size_t f;
  int sign;
};

// Shortest product of conjugates of F^{+-1} equal to target, by BFS over
// group elements. Throws NotInClosure.
std::vector<ConjugateFactor> closure_expression(const FiniteGroupTable& g, const std::vector<std::size_t>& f,
                                                std::size_t target);
std::size_t evaluate(const FiniteGroupTable& g, const std::vector<ConjugateFactor>& expr);

// |mu(h) - sum mu(f_j^{+-1})| <= 5 N defect; for N = 0, |mu(e)| <= defect.
bool conjugate_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const std::vector<ConjugateFactor>& expr);
bool conjugate_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const Rational& defect,
                      const std::vector<ConjugateFactor>& expr);

/// [a, b] = a b a^-1 b^-1.
struct Commutator {
  std::size_t a;
  std::size_t b;
};

// Shortest product of commutators equal to target. Throws NotInClosure.
std::vector<Commutator> commutator_expression(const FiniteGroupTable& g, std::size_t target);
std::size_t evaluate(const FiniteGroupTable& g, const std::vector<Commutator>& expr);

// Commutator length of every element. Throws NotPerfect.
std::vector<std::size_t> commutator_lengths(const FiniteGroupTable& g);

// 8N - 1 for N >= 1; 1 for the identity.
Rational commutator_constant(std::size_t n);

// |mu(target)| <= commutator_constant(N) defect with N = expr.size().
bool commutator_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const std::vector<Commutator>& expr);
bool commutator_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const Rational& defect,
                            const std::vector<Commutator>& expr);

struct SequenceRow {
  std::size_t k = 0;
  Rational defect;
  Rational sup;
  Rational bound;   // C_G defect
  Rational margin;  // bound - sup
};

struct SequenceReport {
  Rational constant;  // C_G = max_g commutator_constant(N_g)
  std::vector<SequenceRow> rows;
  bool bounds_hold = true;
  bool decaying = true;  // defects and sup-norms non-increasing, last below first unless all zero
};

// Throws NotPerfect.
SequenceReport sequence_report(const FiniteGroupTable& g, const std::vector<GroupFunction>& sequence);

}  // namespace symfloer::qm
