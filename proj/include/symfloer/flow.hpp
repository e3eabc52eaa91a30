#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "symfloer/novikov.hpp"

namespace symfloer::flow {

// ---------------------------------------------------------------------------
// The posets A^k_pq

/// (p r_1 ... r_l q, h_1..h_k). Generators are integer ids ordered by value;
/// the endpoints p, q are implicit.
struct FlowPosetElem {
  std::vector<int> chain;    // r_1 < ... < r_l
  std::vector<long> markers; // h_j in {0..l}

  std::size_t depth() const { return chain.size(); }
  std::string str() const;
  friend bool operator==(const FlowPosetElem&, const FlowPosetElem&) = default;
  friend auto operator<=>(const FlowPosetElem&, const FlowPosetElem&) = default;
};

// a <= b. Segment h of b, between r_h and r_{h+1}, covers the segments
// f(h) .. f(h+1)-1 of a, with f(0) = 0 and f(l+1) = m+1.
bool poset_leq(const FlowPosetElem& a, const FlowPosetElem& b);

// All elements of A^k_pq whose intermediate generators come from `between`.
std::vector<FlowPosetElem> enumerate_poset(const std::vector<int>& between, long k);

// Every cover relation drops the depth by exactly one.
bool poset_homogeneous(const std::vector<int>& between, long k);

struct BoundaryIsoReport {
  long k0 = 0;
  long k1 = 0;
  std::vector<std::pair<std::pair<FlowPosetElem, FlowPosetElem>, FlowPosetElem>> mapping;
  bool bijective = false;
  bool order_isomorphism = false;
  bool ok() const { return bijective && order_isomorphism; }
};

// The relabeling A^{k0}_pr x A^{k1}_rq -> boundary of a depth-1 element
// (p r q, h), checked by enumeration.
BoundaryIsoReport boundary_iso(const std::vector<int>& between, const FlowPosetElem& depth_one);

// ---------------------------------------------------------------------------
// Synthetic flow categories

struct Generator {
  std::string id;
  long action = 0;
  std::string label;
  std::optional<long> gamma_orbit;
};

/// n^k from `from` to the translate a^shift . `to`, whose action is
/// action(to) + shift * step.
struct Count {
  long k = 0;
  std::size_t from = 0;
  std::size_t to = 0;
  long shift = 0;
  Rational value;
};

struct SyntheticFlowCategory {
  std::vector<Generator> generators;
  long step = 1;
  std::vector<Count> counts;

  // Throws InvariantViolation: bad indices, step <= 0, k < 0, zero count,
  // or a count that does not raise the action.
  void validate() const;
  long max_k() const;
  std::optional<std::size_t> index_of(const std::string& id) const;

  nlohmann::json to_json() const;
  static SyntheticFlowCategory from_json(const nlohmann::json& j);  // throws ParseError
};

/// Basis = orbit representatives; level(m . p) = level(p) - val(m).
/// d(q, p) is the coefficient of q in d(p).
struct FilteredComplex {
  std::vector<std::string> ids;
  std::vector<Rational> levels;
  NovikovMatrix d;
  Rational step{1};

  std::size_t size() const { return ids.size(); }
  // max_i level_i - val(v_i); nullopt for the zero vector.
  std::optional<Rational> level_of(const std::vector<NovikovSeries>& v) const;
  std::vector<NovikovSeries> apply(const std::vector<NovikovSeries>& v) const;
  bool is_filtered() const;  // every entry strictly lowers the level
  FilteredComplex level_shifted(const Rational& delta) const;
};

// level(p) = -action(p); the translation a^n . q is T^(n step) q. Throws
// InvariantViolation when the d^2 identity fails.
FilteredComplex build_differential(const SyntheticFlowCategory& cat, const NovikovSeries& alpha = NovikovSeries(0));

struct DSquaredReport {
  bool ok = true;
  bool identity_ok = true;
  bool matrix_ok = true;
  // First violated identity, ordered by (p, q, k, shift).
  std::optional<std::size_t> p, q;
  std::optional<long> k, shift;
  std::string str(const SyntheticFlowCategory& cat) const;
};

DSquaredReport verify_d_squared(const SyntheticFlowCategory& cat, std::uint64_t seed = 1);

// Counts n^k = ad_S^k(D0) of the family exp(aS) D0 exp(-aS), with D0 a
// square-zero pairing spread by a unipotent conjugation. S is layered so that
// S^m = 0 with m = depth/2 + 1, hence n^k = 0 for k > depth.
SyntheticFlowCategory random_consistent_category(std::uint64_t seed, std::size_t size, long depth);

/// A signed permutation of the basis: g(e_i) = sign[i] e_{perm[i]}.
struct SignedPermutation {
  std::vector<std::size_t> perm;
  std::vector<int> sign;
};

// Basis: nonzero orbit averages, indexed by the least basis index in the
// orbit. Throws NonEquivariant when a group element does not commute with d
// or does not preserve levels.
FilteredComplex gamma_invariant_subcomplex(const FilteredComplex& c, const std::vector<SignedPermutation>& generators);

struct Reduction {
  std::vector<std::vector<NovikovSeries>> boundaries;  // orthogonal basis of im d
  std::vector<std::size_t> pivots;
  std::vector<std::vector<NovikovSeries>> cycles;      // basis of ker d
};

// Persistence-style column reduction in decreasing level order; lower basis
// index breaks ties.
Reduction reduce(const FilteredComplex& c);

// min over representatives y of [x] of level_of(y); nullopt for the zero
// class. Throws NotACycle.
std::optional<Rational> spectral_invariant(const FilteredComplex& c, const std::vector<NovikovSeries>& x);
std::optional<Rational> spectral_invariant(const FilteredComplex& c, const Reduction& r,
                                           const std::vector<NovikovSeries>& x);

/// mu(e_i, e'_j) = entries[i * right_size + j], a vector in the target.
struct ProductTable {
  std::size_t left_size = 0;
  std::size_t right_size = 0;
  std::vector<std::vector<NovikovSeries>> entries;

  std::vector<NovikovSeries> multiply(const std::vector<NovikovSeries>& x, const std::vector<NovikovSeries>& y) const;
};

struct SubadditivityReport {
  std::size_t samples = 0;
  std::size_t skipped = 0;  // a factor or the product is the zero class
  std::size_t strict = 0;
  bool pass = true;
};

// Checks the table (levels do not increase, d'' mu = mu(d x, y) + mu(x, d' y))
// and then c(x y) <= c(x) + c(y) on random cycle samples. Throws
// IncompatibleProduct.
SubadditivityReport verify_subadditivity(const FilteredComplex& left, const FilteredComplex& right,
                                         const FilteredComplex& target, const ProductTable& table,
                                         std::size_t samples, std::uint64_t seed = 1);

struct ProductInstance {
  FilteredComplex left, right, target;
  ProductTable table;
};

// left from random_consistent_category, right with zero differential, target
// the tensor product with per-generator level drops.
ProductInstance random_compatible_product(std::uint64_t seed, std::size_t size);

// Parses "p3 + 2*p5 - (T^(1/2))*p1" against the complex's ids.
std::vector<NovikovSeries> parse_class(const FilteredComplex& c, const std::string& text);

}  // namespace symfloer::flow
