#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "symfloer/novikov.hpp"

namespace symfloer::qalg {

using Element = std::vector<NovikovSeries>;

// deg(b_i) = basis_degree[i], deg(T^a) = 4a / omega. With this sign
// H^2 = T^omega is homogeneous of degree 4 in QH(P^1).
struct Grading {
  std::vector<Rational> basis_degree;
  Rational omega;
};

/// Unital commutative algebra over the Novikov field, free on a finite
/// basis, given by structure constants b_i b_j = sum_k c_ijk b_k.
class FiniteCommAlgebra {
 public:
  struct Entry {
    std::size_t index;
    NovikovSeries coefficient;
  };
  // products[i * n + j] lists the nonzero c_ijk.
  FiniteCommAlgebra(std::vector<std::string> labels, std::vector<std::vector<Entry>> products,
                    Element unit, std::optional<Grading> grading = std::nullopt);

  // The one-dimensional algebra Lambda.
  static FiniteCommAlgebra scalars();

  std::size_t dim() const { return labels_.size(); }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::vector<Entry>& product(std::size_t i, std::size_t j) const {
    return products_[i * dim() + j];
  }
  const Element& unit() const { return unit_; }
  const std::optional<Grading>& grading() const { return grading_; }

  Element zero() const { return Element(dim()); }
  Element basis(std::size_t i) const;
  Element multiply(const Element& a, const Element& b) const;
  // Column j holds the coordinates of x * b_j.
  NovikovMatrix multiplication_matrix(const Element& x) const;

  // Checks commutativity, the unit, and associativity (exhaustive up to
  // dimension 32, 4096 sampled triples above). Throws AlgebraAxiomViolation.
  void verify_axioms() const;

  std::string format(const Element& x) const;

 private:
  std::vector<std::string> labels_;
  std::vector<std::vector<Entry>> products_;
  Element unit_;
  std::optional<Grading> grading_;
};

Element add(const Element& a, const Element& b);
Element sub(const Element& a, const Element& b);
Element scale(const NovikovSeries& c, const Element& a);
Element truncated(const Element& a, const ExtRational& t);
Element as_exact(const Element& a);
// Minimum coordinate valuation (+inf for zero).
ExtRational valuation(const Element& a);
bool is_zero(const Element& a);  // no known nonzero coordinate term

// Basis {1, H} with H^2 = T^omega; deg 1 = 0, deg H = 2.
FiniteCommAlgebra qh_p1(const Rational& omega);

// A^{(x)k} on k-tuples of basis labels joined by '|'. Throws
// DimensionOverflow when dim(A)^k exceeds max_dim.
FiniteCommAlgebra tensor_power(const FiniteCommAlgebra& a, long k, std::size_t max_dim = 4096);

struct InvariantSubalgebra {
  FiniteCommAlgebra algebra;
  // orbits[i]: ambient basis indices whose sum is the i-th invariant basis vector.
  std::vector<std::vector<std::size_t>> orbits;
  std::size_t ambient_dim;

  Element embed(const Element& x) const;
};

// Fixed subalgebra of a group acting by basis permutations; each generator
// maps ambient basis index i to generators[g][i]. The basis is orbit sums.
InvariantSubalgebra invariant_subalgebra(const FiniteCommAlgebra& a,
                                         const std::vector<std::vector<std::size_t>>& generators);
// (A^{(x)k})^{Sym_k} with Sym_k permuting tensor factors.
InvariantSubalgebra symmetric_invariant_subalgebra(const FiniteCommAlgebra& a, long k,
                                                   std::size_t max_dim = 4096);

struct LiftReport {
  Element idempotent;
  // val(e^2 - e) before the first step and after each step.
  std::vector<ExtRational> defect_valuations;
};

// Iterates e <- 3e^2 - 2e^3 until e^2 = e modulo T^precision. Iterates are
// cut at a working precision and treated as exact, so an exact idempotent is
// returned unchanged and without truncation. Throws NoConvergence when the
// defect valuation stalls or fails to double once positive.
LiftReport idempotent_lift(const FiniteCommAlgebra& a, const Element& e0, const Rational& precision);

struct DecompositionOptions {
  std::optional<Rational> precision;  // default: 64 steps of the exponent grid
  std::uint64_t seed = 1;
  int random_attempts = 32;
};

// Complete set of primitive orthogonal idempotents of a split algebra, found
// from a primitive element whose characteristic polynomial has distinct
// roots with rational residues. Throws ResidueNotSplit.
std::vector<Element> idempotent_decomposition(const FiniteCommAlgebra& a,
                                              const DecompositionOptions& options = {});

std::vector<ExtRational> idempotent_valuations(const std::vector<Element>& idempotents);

// Common degree of all terms of x, or nullopt when x is not homogeneous.
// Zero reports degree 0. Precondition: a.grading().
std::optional<Rational> grade_check(const FiniteCommAlgebra& a, const Element& x);

struct WeylEntry {
  long k;
  std::size_t summand_rank;  // rank of e * A over Lambda
  ExtRational valuation;
  std::optional<Rational> ratio;  // val(e_k) / k
};

struct WeylPredicateReport {
  std::vector<WeylEntry> entries;
  std::optional<Rational> constant_ratio;
  bool all_field_summands = true;
  bool sublinear = false;
  bool pass() const { return all_field_summands && sublinear; }
};

struct WeylFamilyMember {
  long k;
  const FiniteCommAlgebra* algebra;
  Element idempotent;
};

// Trend rule for ratios r_1..r_m: |r_{i+1}| <= |r_i| + tolerance for all i,
// and either r_m = 0 or |r_m| < |r_1|. A single ratio passes only when it is 0.
bool sublinear_trend(const std::vector<Rational>& ratios, const Rational& tolerance = 0);

WeylPredicateReport weyl_idempotent_predicate(const std::vector<WeylFamilyMember>& family,
                                              const Rational& tolerance = 0);

}  // namespace symfloer::qalg
