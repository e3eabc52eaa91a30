#include "symfloer/flow.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>
#include <tuple>

#include "symfloer/errors.hpp"

namespace symfloer::flow {

// ---------------------------------------------------------------------------
// Posets

std::string FlowPosetElem::str() const {
  std::ostringstream out;
  out << "(p";
  for (int r : chain) out << " r" << r;
  out << " q;";
  for (std::size_t j = 0; j < markers.size(); ++j) out << (j ? "," : "") << markers[j];
  out << ")";
  return out.str();
}

bool poset_leq(const FlowPosetElem& a, const FlowPosetElem& b) {
  if (a.markers.size() != b.markers.size()) return false;
  const long m = static_cast<long>(a.chain.size());
  const long l = static_cast<long>(b.chain.size());
  if (l > m) return false;
  // f(i) for i = 0..l+1; chains are strictly increasing, so f is forced.
  std::vector<long> f(l + 2);
  f[0] = 0;
  f[l + 1] = m + 1;
  long cursor = 0;
  for (long i = 0; i < l; ++i) {
    while (cursor < m && a.chain[cursor] != b.chain[i]) ++cursor;
    if (cursor == m) return false;
    f[i + 1] = ++cursor;
  }
  for (std::size_t j = 0; j < a.markers.size(); ++j) {
    const long h = b.markers[j];
    if (a.markers[j] < f[h] || a.markers[j] > f[h + 1] - 1) return false;
  }
  return true;
}

std::vector<FlowPosetElem> enumerate_poset(const std::vector<int>& between, long k) {
  std::vector<int> sorted = between;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const std::size_t n = sorted.size();
  if (n > 20) throw std::invalid_argument("too many intermediate generators");
  std::vector<FlowPosetElem> out;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    FlowPosetElem e;
    for (std::size_t i = 0; i < n; ++i)
      if (mask >> i & 1) e.chain.push_back(sorted[i]);
    const long l = static_cast<long>(e.chain.size());
    e.markers.assign(k, 0);
    while (true) {
      out.push_back(e);
      long j = k - 1;
      while (j >= 0 && e.markers[j] == l) e.markers[j--] = 0;
      if (j < 0) break;
      ++e.markers[j];
    }
  }
  std::sort(out.begin(), out.end(), [](const FlowPosetElem& x, const FlowPosetElem& y) {
    if (x.depth() != y.depth()) return x.depth() < y.depth();
    return x < y;
  });
  return out;
}

namespace {

using Bits = std::vector<std::uint64_t>;

std::vector<Bits> leq_matrix(const std::vector<FlowPosetElem>& elems, bool upward) {
  const std::size_t n = elems.size();
  const std::size_t words = (n + 63) / 64;
  std::vector<Bits> m(n, Bits(words, 0));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) {
      bool rel = upward ? poset_leq(elems[i], elems[j]) : poset_leq(elems[j], elems[i]);
      if (rel) m[i][j / 64] |= std::uint64_t{1} << (j % 64);
    }
  return m;
}

bool test_bit(const Bits& b, std::size_t i) { return b[i / 64] >> (i % 64) & 1; }

}  // namespace

bool poset_homogeneous(const std::vector<int>& between, long k) {
  auto elems = enumerate_poset(between, k);
  const std::size_t n = elems.size();
  auto up = leq_matrix(elems, true);     // up[i]: {j : i <= j}
  auto down = leq_matrix(elems, false);  // down[j]: {i : i <= j}
  for (std::size_t i = 0; i < n; ++i) {
    if (!test_bit(up[i], 0)) return false;  // elems[0] is the maximal (pq, 0)
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j || !test_bit(up[i], j)) continue;
      if (test_bit(up[j], i)) return false;  // antisymmetry
      std::size_t between_count = 0;
      for (std::size_t w = 0; w < up[i].size(); ++w)
        between_count += static_cast<std::size_t>(__builtin_popcountll(up[i][w] & down[j][w]));
      bool cover = between_count == 2;
      if (cover && elems[j].depth() + 1 != elems[i].depth()) return false;
    }
  }
  return true;
}

BoundaryIsoReport boundary_iso(const std::vector<int>& between, const FlowPosetElem& depth_one) {
  if (depth_one.depth() != 1) throw std::invalid_argument("boundary_iso needs a depth-one element");
  const int r = depth_one.chain[0];
  const long k = static_cast<long>(depth_one.markers.size());
  std::vector<int> left, right;
  for (int g : between) {
    if (g < r) left.push_back(g);
    if (g > r) right.push_back(g);
  }
  BoundaryIsoReport rep;
  for (long h : depth_one.markers) (h == 0 ? rep.k0 : rep.k1)++;

  auto image = [&](const FlowPosetElem& a, const FlowPosetElem& b) {
    FlowPosetElem out;
    out.chain = a.chain;
    out.chain.push_back(r);
    out.chain.insert(out.chain.end(), b.chain.begin(), b.chain.end());
    std::size_t i0 = 0, i1 = 0;
    for (long h : depth_one.markers)
      out.markers.push_back(h == 0 ? a.markers[i0++] : b.markers[i1++] + static_cast<long>(a.chain.size()) + 1);
    return out;
  };

  auto lefts = enumerate_poset(left, rep.k0);
  auto rights = enumerate_poset(right, rep.k1);
  for (const auto& a : lefts)
    for (const auto& b : rights) rep.mapping.push_back({{a, b}, image(a, b)});

  std::set<FlowPosetElem> targets;
  for (const auto& e : enumerate_poset(between, k))
    if (poset_leq(e, depth_one)) targets.insert(e);
  std::set<FlowPosetElem> images;
  for (const auto& entry : rep.mapping) images.insert(entry.second);
  rep.bijective = images.size() == rep.mapping.size() && images == targets;

  rep.order_isomorphism = true;
  for (const auto& x : rep.mapping)
    for (const auto& y : rep.mapping) {
      bool product = poset_leq(x.first.first, y.first.first) && poset_leq(x.first.second, y.first.second);
      if (product != poset_leq(x.second, y.second)) rep.order_isomorphism = false;
    }
  return rep;
}

// ---------------------------------------------------------------------------
// Categories

void SyntheticFlowCategory::validate() const {
  if (step <= 0) throw InvariantViolation("translation step must be positive");
  const std::size_t n = generators.size();
  for (const auto& c : counts) {
    if (c.from >= n || c.to >= n) throw InvariantViolation("count references an unknown generator");
    if (c.k < 0) throw InvariantViolation("negative marker count");
    if (c.value == 0) throw InvariantViolation("zero count entry");
    if (generators[c.from].action >= generators[c.to].action + c.shift * step)
      throw InvariantViolation("count from " + generators[c.from].id + " to " + generators[c.to].id +
                               " does not raise the action");
  }
}

long SyntheticFlowCategory::max_k() const {
  long m = -1;
  for (const auto& c : counts) m = std::max(m, c.k);
  return m;
}

std::optional<std::size_t> SyntheticFlowCategory::index_of(const std::string& id) const {
  for (std::size_t i = 0; i < generators.size(); ++i)
    if (generators[i].id == id) return i;
  return std::nullopt;
}

nlohmann::json SyntheticFlowCategory::to_json() const {
  nlohmann::json gens = nlohmann::json::array();
  for (const auto& g : generators) {
    nlohmann::json e{{"id", g.id}, {"action", g.action}, {"label", g.label}};
    if (g.gamma_orbit) e["gamma_orbit"] = *g.gamma_orbit;
    gens.push_back(e);
  }
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : counts)
    cs.push_back({{"k", c.k},
                  {"from", generators[c.from].id},
                  {"to", generators[c.to].id},
                  {"shift", c.shift},
                  {"value", to_string(c.value)}});
  return {{"generators", gens}, {"step", step}, {"counts", cs}};
}

SyntheticFlowCategory SyntheticFlowCategory::from_json(const nlohmann::json& j) {
  SyntheticFlowCategory cat;
  try {
    cat.step = j.value("step", 1L);
    for (const auto& g : j.at("generators")) {
      Generator gen;
      gen.id = g.at("id").get<std::string>();
      gen.action = g.at("action").get<long>();
      gen.label = g.value("label", gen.id);
      if (g.contains("gamma_orbit") && !g["gamma_orbit"].is_null()) gen.gamma_orbit = g["gamma_orbit"].get<long>();
      if (cat.index_of(gen.id)) throw ParseError("duplicate generator id " + gen.id, 0);
      cat.generators.push_back(gen);
    }
    std::size_t position = 0;
    for (const auto& c : j.at("counts")) {
      Count count;
      count.k = c.at("k").get<long>();
      auto from = cat.index_of(c.at("from").get<std::string>());
      auto to = cat.index_of(c.at("to").get<std::string>());
      if (!from || !to) throw ParseError("count references an unknown generator", position);
      count.from = *from;
      count.to = *to;
      count.shift = c.value("shift", 0L);
      const auto& v = c.at("value");
      count.value = v.is_string() ? parse_rational(v.get<std::string>()) : Rational(v.get<long>());
      cat.counts.push_back(count);
      ++position;
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("category file: ") + e.what(), 0);
  }
  return cat;
}

namespace {

FilteredComplex differential_unchecked(const SyntheticFlowCategory& cat, const NovikovSeries& alpha) {
  FilteredComplex c;
  const std::size_t n = cat.generators.size();
  for (const auto& g : cat.generators) {
    c.ids.push_back(g.id);
    c.levels.push_back(Rational(-g.action));
  }
  c.step = cat.step;
  c.d = NovikovMatrix(n, n);
  std::map<long, NovikovSeries> powers;
  for (const auto& count : cat.counts) {
    auto it = powers.find(count.k);
    if (it == powers.end())
      it = powers.emplace(count.k, alpha.pow(static_cast<unsigned long>(count.k))
                                       .scaled(Rational(1) / Rational(factorial(count.k))))
               .first;
    c.d(count.to, count.from) +=
        it->second.scaled(count.value).shifted(Rational(count.shift * cat.step));
  }
  return c;
}

bool is_zero_matrix(const NovikovMatrix& m) {
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j)
      if (!m(i, j).is_zero()) return false;
  return true;
}

}  // namespace

std::string DSquaredReport::str(const SyntheticFlowCategory& cat) const {
  if (ok) return "d^2 = 0";
  std::ostringstream out;
  if (p) {
    out << "d^2 identity violated at (p, q, k) = (" << cat.generators[*p].id << ", " << cat.generators[*q].id
        << ", " << *k << ")";
    if (*shift != 0) out << " with translation a^" << *shift;
  } else {
    out << "d^2 matrix square nonzero";
  }
  return out.str();
}

DSquaredReport verify_d_squared(const SyntheticFlowCategory& cat, std::uint64_t seed) {
  cat.validate();
  DSquaredReport rep;
  std::map<std::tuple<std::size_t, std::size_t, long, long>, Rational> sums;
  for (const auto& a : cat.counts)
    for (const auto& b : cat.counts) {
      if (a.to != b.from) continue;
      const long k = a.k + b.k;
      sums[{a.from, b.to, k, a.shift + b.shift}] += Rational(binomial(k, a.k)) * a.value * b.value;
    }
  for (const auto& [key, value] : sums) {
    if (value == 0) continue;
    rep.identity_ok = false;
    rep.p = std::get<0>(key);
    rep.q = std::get<1>(key);
    rep.k = std::get<2>(key);
    rep.shift = std::get<3>(key);
    break;
  }

  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coeff(1, 5);
  std::uniform_int_distribution<long> second(-3, 3);
  std::uniform_int_distribution<long> half_steps(0, 2);
  for (int trial = 0; trial < 3 && rep.matrix_ok; ++trial) {
    Rational e = make_rational(half_steps(rng), 2);
    NovikovSeries alpha = NovikovSeries::monomial(Rational(coeff(rng)), e) +
                          NovikovSeries::monomial(Rational(second(rng)), e + make_rational(1, 2));
    FilteredComplex c = differential_unchecked(cat, alpha);
    if (!is_zero_matrix(c.d * c.d)) rep.matrix_ok = false;
  }
  rep.ok = rep.identity_ok && rep.matrix_ok;
  return rep;
}

FilteredComplex build_differential(const SyntheticFlowCategory& cat, const NovikovSeries& alpha) {
  if (alpha.val_lower_bound() < ExtRational(0)) throw std::invalid_argument("alpha must have val >= 0");
  DSquaredReport rep = verify_d_squared(cat);
  if (!rep.ok) throw InvariantViolation(rep.str(cat));
  return differential_unchecked(cat, alpha);
}

SyntheticFlowCategory random_consistent_category(std::uint64_t seed, std::size_t size, long depth) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> gap(1, 2);
  std::uniform_int_distribution<long> step_dist(2, 4);
  std::uniform_int_distribution<long> small(-3, 3);
  std::uniform_int_distribution<long> coin(0, 2);

  SyntheticFlowCategory cat;
  cat.step = step_dist(rng);
  long action = 0;
  for (std::size_t i = 0; i < size; ++i) {
    action += gap(rng);
    std::string id = "p" + std::to_string(i + 1);
    cat.generators.push_back({id, action, id, std::nullopt});
  }
  if (size == 0) return cat;

  auto nonzero = [&] {
    long c = 0;
    while (c == 0) c = small(rng);
    return Rational(c);
  };
  auto entry = [&](Rational c) {
    return NovikovSeries::monomial(c, Rational(coin(rng) == 0 ? cat.step : 0));
  };

  // Disjoint pairs p < q give a square-zero D0.
  std::vector<std::size_t> order(size);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  NovikovMatrix d0(size, size);
  const std::size_t pairs = std::max<std::size_t>(size / 3, size >= 2 ? 1 : 0);
  for (std::size_t i = 0; i < pairs; ++i) {
    std::size_t p = std::min(order[2 * i], order[2 * i + 1]);
    std::size_t q = std::max(order[2 * i], order[2 * i + 1]);
    d0(q, p) = entry(nonzero());
  }

  NovikovMatrix nil(size, size);
  for (std::size_t q = 0; q < size; ++q)
    for (std::size_t p = 0; p < q; ++p)
      if (coin(rng) == 0) nil(q, p) = entry(nonzero());
  NovikovMatrix g = NovikovMatrix::identity(size);
  NovikovMatrix g_inv = NovikovMatrix::identity(size);
  NovikovMatrix power = NovikovMatrix::identity(size);
  for (std::size_t m = 1; m < size; ++m) {
    power = power * nil;
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) {
        g(i, j) += m == 1 ? power(i, j) : NovikovSeries();
        g_inv(i, j) += m % 2 ? -power(i, j) : power(i, j);
      }
  }
  NovikovMatrix current = g * d0 * g_inv;

  const std::size_t layers = static_cast<std::size_t>(std::max(depth, 0L) / 2 + 1);
  NovikovMatrix s(size, size);
  auto layer = [&](std::size_t i) { return i * layers / size; };
  for (std::size_t q = 0; q < size; ++q)
    for (std::size_t p = 0; p < q; ++p)
      if (layer(q) == layer(p) + 1 && coin(rng) != 0) s(q, p) = entry(nonzero());

  for (long k = 0; k <= depth; ++k) {
    for (std::size_t p = 0; p < size; ++p)
      for (std::size_t q = 0; q < size; ++q)
        for (const auto& term : current(q, p).terms()) {
          Rational shift = term.exponent / Rational(cat.step);
          cat.counts.push_back({k, p, q, static_cast<long>(shift.get_num().get_si()), term.coefficient});
        }
    NovikovMatrix next = s * current;
    NovikovMatrix right = current * s;
    for (std::size_t i = 0; i < size; ++i)
      for (std::size_t j = 0; j < size; ++j) next(i, j) -= right(i, j);
    current = next;
    if (is_zero_matrix(current)) break;
  }
  return cat;
}

// ---------------------------------------------------------------------------
// Filtered complexes

std::optional<Rational> FilteredComplex::level_of(const std::vector<NovikovSeries>& v) const {
  std::optional<Rational> out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i].is_zero()) continue;
    Rational l = levels[i] - v[i].leading_exponent();
    if (!out || l > *out) out = l;
  }
  return out;
}

std::vector<NovikovSeries> FilteredComplex::apply(const std::vector<NovikovSeries>& v) const { return d.apply(v); }

bool FilteredComplex::is_filtered() const {
  for (std::size_t q = 0; q < size(); ++q)
    for (std::size_t p = 0; p < size(); ++p) {
      const NovikovSeries& e = d(q, p);
      if (!e.is_zero() && !(levels[q] - e.leading_exponent() < levels[p])) return false;
    }
  return true;
}

FilteredComplex FilteredComplex::level_shifted(const Rational& delta) const {
  FilteredComplex out = *this;
  for (auto& l : out.levels) l += delta;
  return out;
}

FilteredComplex gamma_invariant_subcomplex(const FilteredComplex& c, const std::vector<SignedPermutation>& generators) {
  const std::size_t n = c.size();
  auto as_matrix = [&](const SignedPermutation& g) {
    NovikovMatrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(g.perm[i], i) = NovikovSeries(g.sign[i]);
    return m;
  };
  for (const auto& g : generators) {
    if (g.perm.size() != n || g.sign.size() != n) throw NonEquivariant("group element has the wrong size");
    std::vector<bool> hit(n, false);
    for (std::size_t i = 0; i < n; ++i) {
      if (g.perm[i] >= n || hit[g.perm[i]]) throw NonEquivariant("group element is not a permutation");
      hit[g.perm[i]] = true;
      if (g.sign[i] != 1 && g.sign[i] != -1) throw NonEquivariant("signs must be +1 or -1");
      if (c.levels[g.perm[i]] != c.levels[i]) throw NonEquivariant("group element changes a level");
    }
    NovikovMatrix m = as_matrix(g);
    NovikovMatrix commutator = m * c.d;
    NovikovMatrix other = c.d * m;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) commutator(i, j) -= other(i, j);
    if (!is_zero_matrix(commutator))
      throw NonEquivariant("group element does not commute with the differential");
  }

  // Close the generated group.
  auto key = [](const SignedPermutation& g) { return std::make_pair(g.perm, g.sign); };
  auto compose = [&](const SignedPermutation& a, const SignedPermutation& b) {  // a after b
    SignedPermutation out{std::vector<std::size_t>(n), std::vector<int>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      out.perm[i] = a.perm[b.perm[i]];
      out.sign[i] = b.sign[i] * a.sign[b.perm[i]];
    }
    return out;
  };
  SignedPermutation id{std::vector<std::size_t>(n), std::vector<int>(n, 1)};
  std::iota(id.perm.begin(), id.perm.end(), 0);
  std::vector<SignedPermutation> group{id};
  std::set<std::pair<std::vector<std::size_t>, std::vector<int>>> seen{key(id)};
  for (std::size_t i = 0; i < group.size(); ++i)
    for (const auto& g : generators) {
      SignedPermutation h = compose(g, group[i]);
      if (seen.insert(key(h)).second) group.push_back(h);
      if (group.size() > 100000) throw NonEquivariant("group is too large");
    }

  const Rational inv_order = Rational(1) / Rational(static_cast<long>(group.size()));
  std::vector<std::size_t> reps;
  std::vector<std::vector<NovikovSeries>> averages;
  std::vector<bool> covered(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (covered[i]) continue;
    std::vector<Rational> avg(n);
    for (const auto& g : group) {
      covered[g.perm[i]] = true;
      avg[g.perm[i]] += Rational(g.sign[i]) * inv_order;
    }
    if (avg[i] == 0) continue;
    std::vector<NovikovSeries> v(n);
    for (std::size_t j = 0; j < n; ++j) v[j] = NovikovSeries(avg[j]);
    reps.push_back(i);
    averages.push_back(std::move(v));
  }

  FilteredComplex out;
  out.step = c.step;
  const std::size_t m = reps.size();
  for (std::size_t a = 0; a < m; ++a) {
    out.ids.push_back(c.ids[reps[a]]);
    out.levels.push_back(c.levels[reps[a]]);
  }
  out.d = NovikovMatrix(m, m);
  for (std::size_t a = 0; a < m; ++a) {
    std::vector<NovikovSeries> image = c.apply(averages[a]);
    std::vector<NovikovSeries> rebuilt(n);
    for (std::size_t b = 0; b < m; ++b) {
      NovikovSeries coeff = image[reps[b]] * averages[b][reps[b]].invert();
      out.d(b, a) = coeff;
      for (std::size_t j = 0; j < n; ++j) rebuilt[j] += coeff * averages[b][j];
    }
    for (std::size_t j = 0; j < n; ++j)
      if (!(rebuilt[j] - image[j]).is_zero())
        throw NonEquivariant("differential does not preserve the invariant subspace");
  }
  return out;
}

namespace {

struct Leading {
  Rational level;
  std::vector<std::size_t> positions;
};

std::optional<Leading> leading_of(const FilteredComplex& c, const std::vector<NovikovSeries>& v) {
  auto lvl = c.level_of(v);
  if (!lvl) return std::nullopt;
  Leading out{*lvl, {}};
  for (std::size_t i = 0; i < v.size(); ++i)
    if (!v[i].is_zero() && c.levels[i] - v[i].leading_exponent() == *lvl) out.positions.push_back(i);
  return out;
}

void axpy(std::vector<NovikovSeries>& y, const NovikovSeries& a, const std::vector<NovikovSeries>& x) {
  for (std::size_t i = 0; i < y.size(); ++i)
    if (!x[i].is_zero()) y[i] -= a * x[i];
}

// v <- b_i v - v_i b for each boundary b in insertion order, clearing every
// pivot exactly. Returns the accumulated scalar s with v = s x + boundary.
NovikovSeries reduce_against(const Reduction& r, const std::vector<std::vector<NovikovSeries>>& sources,
                             std::vector<NovikovSeries>& v, std::vector<NovikovSeries>* comb) {
  NovikovSeries scale(1);
  for (std::size_t b = 0; b < r.pivots.size(); ++b) {
    const std::size_t piv = r.pivots[b];
    if (v[piv].is_zero()) continue;
    const NovikovSeries vi = v[piv];
    const NovikovSeries& bi = r.boundaries[b][piv];
    for (auto& e : v) e *= bi;
    axpy(v, vi, r.boundaries[b]);
    if (comb) {
      for (auto& e : *comb) e *= bi;
      axpy(*comb, vi, sources[b]);
    }
    scale *= bi;
  }
  return scale;
}

}  // namespace

Reduction reduce(const FilteredComplex& c) {
  const std::size_t n = c.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return c.levels[a] > c.levels[b]; });
  Reduction r;
  std::vector<std::vector<NovikovSeries>> sources;
  for (std::size_t p : order) {
    std::vector<NovikovSeries> comb(n);
    comb[p] = NovikovSeries(1);
    std::vector<NovikovSeries> v(n);
    for (std::size_t q = 0; q < n; ++q) v[q] = c.d(q, p);
    reduce_against(r, sources, v, &comb);
    auto lead = leading_of(c, v);
    if (!lead) {
      r.cycles.push_back(std::move(comb));
      continue;
    }
    r.pivots.push_back(*std::min_element(lead->positions.begin(), lead->positions.end()));
    r.boundaries.push_back(std::move(v));
    sources.push_back(std::move(comb));
  }
  return r;
}

std::optional<Rational> spectral_invariant(const FilteredComplex& c, const Reduction& r,
                                           const std::vector<NovikovSeries>& x) {
  if (x.size() != c.size()) throw std::invalid_argument("class has the wrong dimension");
  for (const auto& e : c.apply(x))
    if (!e.is_zero()) throw NotACycle("d x != 0");
  std::vector<NovikovSeries> v = x;
  NovikovSeries scale = reduce_against(r, {}, v, nullptr);
  auto level = c.level_of(v);
  if (!level) return std::nullopt;
  return *level + scale.leading_exponent();
}

std::optional<Rational> spectral_invariant(const FilteredComplex& c, const std::vector<NovikovSeries>& x) {
  return spectral_invariant(c, reduce(c), x);
}

std::vector<NovikovSeries> ProductTable::multiply(const std::vector<NovikovSeries>& x,
                                                  const std::vector<NovikovSeries>& y) const {
  std::vector<NovikovSeries> out;
  for (std::size_t i = 0; i < left_size; ++i) {
    if (x[i].is_zero()) continue;
    for (std::size_t j = 0; j < right_size; ++j) {
      if (y[j].is_zero()) continue;
      const auto& e = entries[i * right_size + j];
      if (out.empty()) out.resize(e.size());
      NovikovSeries a = x[i] * y[j];
      for (std::size_t t = 0; t < e.size(); ++t)
        if (!e[t].is_zero()) out[t] += a * e[t];
    }
  }
  if (out.empty() && !entries.empty()) out.resize(entries.front().size());
  return out;
}

SubadditivityReport verify_subadditivity(const FilteredComplex& left, const FilteredComplex& right,
                                         const FilteredComplex& target, const ProductTable& table,
                                         std::size_t samples, std::uint64_t seed) {
  const std::size_t n = left.size(), m = right.size(), t = target.size();
  if (table.left_size != n || table.right_size != m || table.entries.size() != n * m)
    throw IncompatibleProduct("table shape does not match the complexes");
  for (const auto& e : table.entries)
    if (e.size() != t) throw IncompatibleProduct("table entry has the wrong dimension");

  auto unit = [](std::size_t size, std::size_t i) {
    std::vector<NovikovSeries> v(size);
    v[i] = NovikovSeries(1);
    return v;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const auto& e = table.entries[i * m + j];
      auto lvl = target.level_of(e);
      if (lvl && *lvl > left.levels[i] + right.levels[j])
        throw IncompatibleProduct("product of " + left.ids[i] + " and " + right.ids[j] + " raises the level");
      auto lhs = target.apply(e);
      auto rhs = table.multiply(left.apply(unit(n, i)), unit(m, j));
      auto rhs2 = table.multiply(unit(n, i), right.apply(unit(m, j)));
      for (std::size_t s = 0; s < t; ++s)
        if (!(lhs[s] - rhs[s] - rhs2[s]).is_zero())
          throw IncompatibleProduct("product of " + left.ids[i] + " and " + right.ids[j] +
                                    " is not a chain map");
    }

  Reduction rl = reduce(left), rr = reduce(right), rt = reduce(target);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> coeff(-2, 2);
  std::uniform_int_distribution<long> lift(0, 2);
  auto sample = [&](const FilteredComplex& c, const Reduction& r) {
    std::vector<NovikovSeries> x(c.size());
    for (const auto& z : r.cycles) {
      NovikovSeries a = NovikovSeries::monomial(Rational(coeff(rng)), Rational(lift(rng)) * c.step);
      if (!a.is_zero()) axpy(x, -a, z);
    }
    return x;
  };

  SubadditivityReport rep;
  for (std::size_t s = 0; s < samples; ++s) {
    auto x = sample(left, rl);
    auto y = sample(right, rr);
    ++rep.samples;
    auto cx = spectral_invariant(left, rl, x);
    auto cy = spectral_invariant(right, rr, y);
    if (!cx || !cy) {
      ++rep.skipped;
      continue;
    }
    auto cxy = spectral_invariant(target, rt, table.multiply(x, y));
    if (!cxy) {
      ++rep.skipped;
      continue;
    }
    if (*cxy > *cx + *cy) rep.pass = false;
    if (*cxy < *cx + *cy) ++rep.strict;
  }
  return rep;
}

ProductInstance random_compatible_product(std::uint64_t seed, std::size_t size) {
  ProductInstance inst;
  inst.left = build_differential(random_consistent_category(seed, size, 2));
  std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_int_distribution<long> count(1, 3);
  std::uniform_int_distribution<long> level(-4, 0);
  std::uniform_int_distribution<long> drop(-2, 2);
  std::uniform_int_distribution<long> extra(0, 1);

  const std::size_t m = static_cast<std::size_t>(count(rng));
  inst.right.step = inst.left.step;
  inst.right.d = NovikovMatrix(m, m);
  std::vector<Rational> eta(m), eps(m);
  for (std::size_t j = 0; j < m; ++j) {
    inst.right.ids.push_back("e" + std::to_string(j + 1));
    inst.right.levels.push_back(Rational(level(rng)));
    eta[j] = make_rational(drop(rng), 2);
    eps[j] = std::max(eta[j], Rational(0)) + Rational(extra(rng));
  }

  const std::size_t n = inst.left.size();
  inst.target.step = inst.left.step;
  inst.target.d = NovikovMatrix(n * m, n * m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      inst.target.ids.push_back(inst.left.ids[i] + "|" + inst.right.ids[j]);
      inst.target.levels.push_back(inst.left.levels[i] + inst.right.levels[j] + eta[j]);
    }
  for (std::size_t q = 0; q < n; ++q)
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t j = 0; j < m; ++j) inst.target.d(q * m + j, p * m + j) = inst.left.d(q, p);

  inst.table.left_size = n;
  inst.table.right_size = m;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      std::vector<NovikovSeries> e(n * m);
      e[i * m + j] = NovikovSeries::T(eps[j]);
      inst.table.entries.push_back(std::move(e));
    }
  return inst;
}

std::vector<NovikovSeries> parse_class(const FilteredComplex& c, const std::string& text) {
  std::vector<NovikovSeries> x(c.size());
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto is_id_char = [](char ch) {
    return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_' || ch == '|' || ch == '[' || ch == ']';
  };
  bool first = true;
  while (true) {
    skip();
    if (pos == text.size()) break;
    int sign = 1;
    if (text[pos] == '+' || text[pos] == '-') {
      sign = text[pos] == '-' ? -1 : 1;
      ++pos;
      skip();
    } else if (!first) {
      throw ParseError("expected + or -", pos);
    }
    first = false;
    NovikovSeries coeff(1);
    if (pos < text.size() && text[pos] == '(') {
      std::size_t depth = 0, end = pos;
      for (; end < text.size(); ++end) {
        if (text[end] == '(') ++depth;
        if (text[end] == ')' && --depth == 0) break;
      }
      if (end == text.size()) throw ParseError("unbalanced parenthesis", pos);
      coeff = NovikovSeries::parse(text.substr(pos + 1, end - pos - 1));
      pos = end + 1;
      skip();
      if (pos >= text.size() || text[pos] != '*') throw ParseError("expected '*'", pos);
      ++pos;
      skip();
    } else if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
      std::size_t star = text.find('*', pos);
      if (star == std::string::npos) throw ParseError("expected '*' after coefficient", pos);
      std::string num = text.substr(pos, star - pos);
      while (!num.empty() && std::isspace(static_cast<unsigned char>(num.back()))) num.pop_back();
      coeff = NovikovSeries(parse_rational_at(num, pos));
      pos = star + 1;
      skip();
    }
    std::size_t start = pos;
    while (pos < text.size() && is_id_char(text[pos])) ++pos;
    std::string id = text.substr(start, pos - start);
    auto it = std::find(c.ids.begin(), c.ids.end(), id);
    if (it == c.ids.end()) throw ParseError("unknown generator '" + id + "'", start);
    x[static_cast<std::size_t>(it - c.ids.begin())] += sign > 0 ? coeff : -coeff;
  }
  return x;
}

}  // namespace symfloer::flow
