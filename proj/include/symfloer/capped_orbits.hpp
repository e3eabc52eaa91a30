#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "json.hpp"
#include "symfloer/rational.hpp"

namespace symfloer::ledger {

struct SphereClass {
  Rational area;
  Rational c1;
  long orb_points = 0;

  friend auto operator<=>(const SphereClass&, const SphereClass&) = default;
  friend bool operator==(const SphereClass&, const SphereClass&) = default;
};

struct FormalSphere {
  long multiplicity = 1;
  SphereClass sphere;
  friend bool operator==(const FormalSphere&, const FormalSphere&) = default;
};

/// Cap ledger of a Hamiltonian orbit. `orbifold_gluings` counts spheres glued
/// along an orbifold point; each one consumes two orbifold points.
struct FormalCappedOrbit {
  std::string orbit;
  Rational hamiltonian;  // integral of H/Gamma over the orbit
  Rational cap_area;
  long cap_orb_points = 0;
  std::vector<FormalSphere> spheres;  // U, merged by class, no zero multiplicities
  std::string marking;
  Rational cz;  // index of the cap, rational in general
  long orbifold_gluings = 0;

  void validate() const;  // throws PreconditionViolation
  nlohmann::json to_json() const;
  static FormalCappedOrbit from_json(const nlohmann::json& j);  // throws ParseError
  friend bool operator==(const FormalCappedOrbit&, const FormalCappedOrbit&) = default;
};

// omega(U) = sum a_i (area_i + k_i val_v), c1(U) = sum a_i c1_i.
Rational omega(const std::vector<FormalSphere>& u, const Rational& val_v);
Rational c1(const std::vector<FormalSphere>& u);

// Cap area + (k(cap) - 2 gluings) val_v + omega(U).
Rational cap_total(const FormalCappedOrbit& c, const Rational& val_v);

// integral H - cap_total.
Rational action(const FormalCappedOrbit& c, const Rational& val_v);

// Throws DifferentOrbit.
bool equivalent(const FormalCappedOrbit& a, const FormalCappedOrbit& b, const Rational& val_v);

struct Ages {
  Rational cap;
  Rational sphere;
};

// Glues `multiplicity` copies of s. Smooth gluing changes the action by
// -multiplicity (area + k val_v) and CZ by 2 multiplicity c1; orbifold gluing
// changes the action by -multiplicity (area + (k-2) val_v) and CZ by
// 2 multiplicity (c1 + a + a'). Throws PreconditionViolation.
FormalCappedOrbit recap(const FormalCappedOrbit& c, const SphereClass& s, bool at_orbifold_point,
                        const Rational& val_v, long multiplicity = 1, std::optional<Ages> ages = std::nullopt);

Rational cz_index(const FormalCappedOrbit& c);  // cz + 2 c1(U)

enum class Parity { even, odd };
Parity parity(const FormalCappedOrbit& c);  // throws NonIntegralCZ

bool energy_identity(const FormalCappedOrbit& x, const FormalCappedOrbit& y, const Rational& energy, long k_v,
                     const Rational& val_v);

long vdim_floer(long mu_in, long mu_glued, long k_u);

struct Integralization {
  Integer n;
  Rational epsilon;
  std::vector<Integer> values;  // n (action + epsilon), same order as the input
};

// n = lcm of the denominators of all pairwise differences and of every b in
// omega_values (and val_v when given); epsilon = -min(actions).
Integralization integralize(const std::vector<Rational>& actions, std::optional<Rational> val_v,
                            const std::vector<Rational>& omega_values);

using SpectrumTable = std::map<long, std::set<Rational>>;

// Union over partitions k = k_1 + ... + k_l of Spec(H^{k_1}) + ... +
// Spec(H^{k_l}). Throws MissingTableEntry.
std::set<Rational> spec_k(const SpectrumTable& table, long k);

SpectrumTable spectrum_table_from_json(const nlohmann::json& j);  // throws ParseError

/// A finite group acting faithfully on {0..n-1}, closed under composition;
/// elements[0] is the identity.
struct PermutationGroup {
  std::vector<std::vector<std::size_t>> elements;

  static PermutationGroup generated_by(std::size_t n, const std::vector<std::vector<std::size_t>>& generators);
  std::size_t order() const { return elements.size(); }
  std::size_t degree() const { return elements.empty() ? 0 : elements[0].size(); }
  std::size_t compose(std::size_t a, std::size_t b) const;  // a after b
  std::size_t inverse(std::size_t a) const;
  std::size_t index_of(const std::vector<std::size_t>& perm) const;
  std::string cycle_notation(std::size_t a) const;  // "e" for the identity
};

struct OrbitPair {
  std::size_t point;
  std::size_t h;  // index into the group
  std::size_t orbit;
  std::size_t stabilizer_order;  // |Gamma_p  cap  C(h)|
};

struct OrbitClassification {
  std::vector<OrbitPair> pairs;
  std::size_t orbit_count = 0;
};

// Pairs (p, h) with h p = phi(p), grouped under g.(p, h) = (g p, g h g^-1).
// Throws NonEquivariant when phi does not commute with the group.
OrbitClassification classify_orbits(const PermutationGroup& gamma, const std::vector<std::size_t>& phi);

}  // namespace symfloer::ledger
