#include "symfloer/capped_orbits.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "symfloer/errors.hpp"

namespace symfloer::ledger {

namespace {

Rational rational_field(const nlohmann::json& j, const char* key, Rational fallback = 0) {
  if (!j.contains(key)) return fallback;
  const auto& v = j.at(key);
  if (v.is_string()) return parse_rational(v.get<std::string>());
  if (v.is_number_integer()) return Rational(v.get<long>());
  throw ParseError(std::string("field '") + key + "' must be an integer or a rational string", 0);
}

void merge_sphere(std::vector<FormalSphere>& u, const SphereClass& s, long multiplicity) {
  for (auto it = u.begin(); it != u.end(); ++it) {
    if (it->sphere != s) continue;
    it->multiplicity += multiplicity;
    if (it->multiplicity == 0) u.erase(it);
    return;
  }
  u.push_back({multiplicity, s});
}

}  // namespace

void FormalCappedOrbit::validate() const {
  if (cap_orb_points < 0) throw PreconditionViolation("cap orbifold point count must be non-negative");
  for (const auto& f : spheres)
    if (f.sphere.orb_points < 0) throw PreconditionViolation("sphere orbifold point count must be non-negative");
}

nlohmann::json FormalCappedOrbit::to_json() const {
  nlohmann::json u = nlohmann::json::array();
  for (const auto& f : spheres)
    u.push_back({{"multiplicity", f.multiplicity},
                 {"area", to_string(f.sphere.area)},
                 {"c1", to_string(f.sphere.c1)},
                 {"orb_points", f.sphere.orb_points}});
  return {{"orbit", orbit},
          {"hamiltonian", to_string(hamiltonian)},
          {"cap_area", to_string(cap_area)},
          {"cap_orb_points", cap_orb_points},
          {"spheres", u},
          {"marking", marking},
          {"cz", to_string(cz)},
          {"orbifold_gluings", orbifold_gluings}};
}

FormalCappedOrbit FormalCappedOrbit::from_json(const nlohmann::json& j) {
  FormalCappedOrbit c;
  try {
    c.orbit = j.at("orbit").get<std::string>();
    c.hamiltonian = rational_field(j, "hamiltonian");
    c.cap_area = rational_field(j, "cap_area");
    c.cap_orb_points = j.value("cap_orb_points", 0L);
    c.marking = j.value("marking", std::string());
    c.cz = rational_field(j, "cz");
    c.orbifold_gluings = j.value("orbifold_gluings", 0L);
    if (j.contains("spheres"))
      for (const auto& s : j.at("spheres")) {
        SphereClass sc{rational_field(s, "area"), rational_field(s, "c1"), s.value("orb_points", 0L)};
        merge_sphere(c.spheres, sc, s.value("multiplicity", 1L));
      }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("ledger file: ") + e.what(), 0);
  }
  c.validate();
  return c;
}

Rational omega(const std::vector<FormalSphere>& u, const Rational& val_v) {
  Rational total;
  for (const auto& f : u) total += Rational(f.multiplicity) * (f.sphere.area + Rational(f.sphere.orb_points) * val_v);
  return total;
}

Rational c1(const std::vector<FormalSphere>& u) {
  Rational total;
  for (const auto& f : u) total += Rational(f.multiplicity) * f.sphere.c1;
  return total;
}

Rational cap_total(const FormalCappedOrbit& c, const Rational& val_v) {
  return c.cap_area + Rational(c.cap_orb_points - 2 * c.orbifold_gluings) * val_v + omega(c.spheres, val_v);
}

Rational action(const FormalCappedOrbit& c, const Rational& val_v) { return c.hamiltonian - cap_total(c, val_v); }

bool equivalent(const FormalCappedOrbit& a, const FormalCappedOrbit& b, const Rational& val_v) {
  if (a.orbit != b.orbit) throw DifferentOrbit(a.orbit + " vs " + b.orbit);
  return cap_total(a, val_v) == cap_total(b, val_v);
}

FormalCappedOrbit recap(const FormalCappedOrbit& c, const SphereClass& s, bool at_orbifold_point,
                        const Rational& val_v, long multiplicity, std::optional<Ages> ages) {
  if (multiplicity == 0) throw PreconditionViolation("multiplicity must be nonzero");
  if (s.orb_points < 0) throw PreconditionViolation("sphere orbifold point count must be non-negative");
  if (val_v <= 0) throw PreconditionViolation("val_v must be positive");
  FormalCappedOrbit out = c;
  merge_sphere(out.spheres, s, multiplicity);
  if (at_orbifold_point) {
    if (s.orb_points < 1) throw PreconditionViolation("orbifold gluing needs an orbifold point on the sphere");
    if (multiplicity > 0 && c.cap_orb_points < 1)
      throw PreconditionViolation("orbifold gluing needs an orbifold point on the cap");
    if (multiplicity < 0 && c.orbifold_gluings < -multiplicity)
      throw PreconditionViolation("no orbifold gluing left to undo");
    out.orbifold_gluings += multiplicity;
    if (ages) out.cz += Rational(2 * multiplicity) * (ages->cap + ages->sphere);
  } else if (ages) {
    throw PreconditionViolation("ages apply to orbifold gluing only");
  }
  return out;
}

Rational cz_index(const FormalCappedOrbit& c) { return c.cz + 2 * c1(c.spheres); }

Parity parity(const FormalCappedOrbit& c) {
  Rational mu = cz_index(c);
  if (!is_integer(mu)) throw NonIntegralCZ("CZ index " + to_string(mu) + " is not an integer");
  return mpz_even_p(mu.get_num().get_mpz_t()) ? Parity::even : Parity::odd;
}

bool energy_identity(const FormalCappedOrbit& x, const FormalCappedOrbit& y, const Rational& energy, long k_v,
                     const Rational& val_v) {
  return action(x, val_v) - action(y, val_v) == energy + Rational(k_v) * val_v;
}

long vdim_floer(long mu_in, long mu_glued, long k_u) { return mu_glued - mu_in - 1 + 2 * k_u; }

Integralization integralize(const std::vector<Rational>& actions, std::optional<Rational> val_v,
                            const std::vector<Rational>& omega_values) {
  Integralization out;
  out.n = 1;
  for (std::size_t i = 0; i < actions.size(); ++i)
    for (std::size_t j = i + 1; j < actions.size(); ++j)
      out.n = lcm(out.n, Rational(actions[i] - actions[j]).get_den());
  for (const auto& b : omega_values) out.n = lcm(out.n, b.get_den());
  if (val_v) out.n = lcm(out.n, val_v->get_den());
  if (actions.empty()) return out;
  out.epsilon = -*std::min_element(actions.begin(), actions.end());
  for (const auto& a : actions) {
    Rational v = Rational(out.n) * (a + out.epsilon);
    out.values.push_back(v.get_num());
  }
  return out;
}

std::set<Rational> spec_k(const SpectrumTable& table, long k) {
  if (k < 1) throw PreconditionViolation("k must be positive");
  for (long j = 1; j <= k; ++j)
    if (!table.count(j)) throw MissingTableEntry("Spec(H^" + std::to_string(j) + ") is missing");
  std::set<Rational> out;
  // Partitions with non-increasing parts.
  auto recurse = [&](auto&& self, long remaining, long max_part, const std::set<Rational>& partial) -> void {
    if (remaining == 0) {
      out.insert(partial.begin(), partial.end());
      return;
    }
    for (long part = std::min(remaining, max_part); part >= 1; --part) {
      std::set<Rational> next;
      for (const auto& a : partial)
        for (const auto& b : table.at(part)) next.insert(a + b);
      if (!next.empty()) self(self, remaining - part, part, next);
    }
  };
  recurse(recurse, k, k, std::set<Rational>{Rational(0)});
  return out;
}

SpectrumTable spectrum_table_from_json(const nlohmann::json& j) {
  SpectrumTable table;
  if (!j.is_object()) throw ParseError("spectrum table must be an object keyed by j", 0);
  for (const auto& [key, values] : j.items()) {
    long index = 0;
    try {
      std::size_t used = 0;
      index = std::stol(key, &used);
      if (used != key.size() || index < 1) throw std::invalid_argument(key);
    } catch (const std::exception&) {
      throw ParseError("spectrum table key '" + key + "' is not a positive integer", 0);
    }
    std::set<Rational> spec;
    if (!values.is_array()) throw ParseError("Spec(H^" + key + ") must be an array", 0);
    for (const auto& v : values) {
      if (v.is_string()) spec.insert(parse_rational(v.get<std::string>()));
      else if (v.is_number_integer()) spec.insert(Rational(v.get<long>()));
      else throw ParseError("spectrum values must be integers or rational strings", 0);
    }
    table[index] = std::move(spec);
  }
  return table;
}

PermutationGroup PermutationGroup::generated_by(std::size_t n, const std::vector<std::vector<std::size_t>>& generators) {
  for (const auto& g : generators) {
    std::vector<std::size_t> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    std::vector<std::size_t> iota(n);
    std::iota(iota.begin(), iota.end(), 0);
    if (sorted != iota) throw PreconditionViolation("generator is not a permutation of the point set");
  }
  PermutationGroup group;
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  group.elements.push_back(id);
  std::set<std::vector<std::size_t>> seen{id};
  for (std::size_t i = 0; i < group.elements.size(); ++i)
    for (const auto& g : generators) {
      std::vector<std::size_t> h(n);
      for (std::size_t p = 0; p < n; ++p) h[p] = g[group.elements[i][p]];
      if (seen.insert(h).second) group.elements.push_back(h);
    }
  return group;
}

std::size_t PermutationGroup::index_of(const std::vector<std::size_t>& perm) const {
  for (std::size_t i = 0; i < elements.size(); ++i)
    if (elements[i] == perm) return i;
  throw PreconditionViolation("permutation is not in the group");
}

std::size_t PermutationGroup::compose(std::size_t a, std::size_t b) const {
  std::vector<std::size_t> h(degree());
  for (std::size_t p = 0; p < h.size(); ++p) h[p] = elements[a][elements[b][p]];
  return index_of(h);
}

std::size_t PermutationGroup::inverse(std::size_t a) const {
  std::vector<std::size_t> h(degree());
  for (std::size_t p = 0; p < h.size(); ++p) h[elements[a][p]] = p;
  return index_of(h);
}

std::string PermutationGroup::cycle_notation(std::size_t a) const {
  const auto& perm = elements[a];
  std::vector<bool> done(perm.size(), false);
  std::ostringstream out;
  for (std::size_t p = 0; p < perm.size(); ++p) {
    if (done[p] || perm[p] == p) continue;
    out << "(";
    for (std::size_t x = p; !done[x]; x = perm[x]) {
      if (x != p) out << " ";
      out << x + 1;
      done[x] = true;
    }
    out << ")";
  }
  std::string s = out.str();
  return s.empty() ? "e" : s;
}

OrbitClassification classify_orbits(const PermutationGroup& gamma, const std::vector<std::size_t>& phi) {
  const std::size_t n = gamma.degree();
  if (phi.size() != n) throw NonEquivariant("phi has the wrong size");
  for (const auto& g : gamma.elements)
    for (std::size_t p = 0; p < n; ++p)
      if (phi[g[p]] != g[phi[p]]) throw NonEquivariant("phi does not commute with the group action");

  OrbitClassification out;
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> where;
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t h = 0; h < gamma.order(); ++h)
      if (gamma.elements[h][p] == phi[p]) {
        where[{p, h}] = out.pairs.size();
        out.pairs.push_back({p, h, 0, 0});
      }

  std::vector<bool> assigned(out.pairs.size(), false);
  for (std::size_t i = 0; i < out.pairs.size(); ++i) {
    if (assigned[i]) continue;
    for (std::size_t g = 0; g < gamma.order(); ++g) {
      std::size_t gp = gamma.elements[g][out.pairs[i].point];
      std::size_t ghg = gamma.compose(gamma.compose(g, out.pairs[i].h), gamma.inverse(g));
      std::size_t j = where.at({gp, ghg});
      if (!assigned[j]) {
        assigned[j] = true;
        out.pairs[j].orbit = out.orbit_count;
      }
    }
    ++out.orbit_count;
  }
  for (auto& pr : out.pairs) {
    std::size_t stab = 0;
    for (std::size_t g = 0; g < gamma.order(); ++g)
      if (gamma.elements[g][pr.point] == pr.point && gamma.compose(g, pr.h) == gamma.compose(pr.h, g)) ++stab;
    pr.stabilizer_order = stab;
  }
  return out;
}

}  // namespace symfloer::ledger
