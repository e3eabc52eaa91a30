#include "symfloer/quantum_algebra.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include "symfloer/errors.hpp"
#include "symfloer/rational_poly.hpp"

namespace symfloer::qalg {

FiniteCommAlgebra::FiniteCommAlgebra(std::vector<std::string> labels,
                                     std::vector<std::vector<Entry>> products, Element unit,
                                     std::optional<Grading> grading)
    : labels_(std::move(labels)),
      products_(std::move(products)),
      unit_(std::move(unit)),
      grading_(std::move(grading)) {
  const std::size_t n = labels_.size();
  if (n == 0) throw AlgebraAxiomViolation("algebra must have a nonempty basis");
  if (products_.size() != n * n) throw AlgebraAxiomViolation("structure table has wrong size");
  if (unit_.size() != n) throw AlgebraAxiomViolation("unit has wrong length");
  if (grading_ && grading_->basis_degree.size() != n)
    throw AlgebraAxiomViolation("grading has wrong length");
  for (auto& row : products_) {
    for (const auto& e : row)
      if (e.index >= n) throw AlgebraAxiomViolation("structure constant index out of range");
    std::erase_if(row, [](const Entry& e) { return e.coefficient.is_zero() && e.coefficient.is_exact(); });
  }
}

FiniteCommAlgebra FiniteCommAlgebra::scalars() {
  return FiniteCommAlgebra({"1"}, {{{0, NovikovSeries(1)}}}, {NovikovSeries(1)},
                           Grading{{Rational(0)}, Rational(1)});
}

Element FiniteCommAlgebra::basis(std::size_t i) const {
  Element e(dim());
  e.at(i) = NovikovSeries(1);
  return e;
}

namespace {

bool is_exact_zero(const NovikovSeries& s) { return s.is_zero() && s.is_exact(); }

}  // namespace

Element FiniteCommAlgebra::multiply(const Element& a, const Element& b) const {
  const std::size_t n = dim();
  Element out(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (is_exact_zero(a[i])) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (is_exact_zero(b[j])) continue;
      NovikovSeries ab = a[i] * b[j];
      for (const auto& e : product(i, j)) out[e.index] += ab * e.coefficient;
    }
  }
  return out;
}

NovikovMatrix FiniteCommAlgebra::multiplication_matrix(const Element& x) const {
  const std::size_t n = dim();
  NovikovMatrix m(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    Element col = multiply(x, basis(j));
    for (std::size_t i = 0; i < n; ++i) m(i, j) = col[i];
  }
  return m;
}

void FiniteCommAlgebra::verify_axioms() const {
  const std::size_t n = dim();
  for (std::size_t i = 0; i < n; ++i) {
    Element bi = basis(i);
    if (!is_zero(sub(multiply(unit_, bi), bi)))
      throw AlgebraAxiomViolation("unit does not act as identity on " + labels_[i]);
    for (std::size_t j = i + 1; j < n; ++j) {
      Element bj = basis(j);
      if (!is_zero(sub(multiply(bi, bj), multiply(bj, bi))))
        throw AlgebraAxiomViolation("not commutative on " + labels_[i] + ", " + labels_[j]);
    }
  }
  auto check = [&](std::size_t i, std::size_t j, std::size_t k) {
    Element bi = basis(i), bj = basis(j), bk = basis(k);
    if (!is_zero(sub(multiply(multiply(bi, bj), bk), multiply(bi, multiply(bj, bk)))))
      throw AlgebraAxiomViolation("not associative on " + labels_[i] + ", " + labels_[j] + ", " +
                                  labels_[k]);
  };
  if (n <= 32) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k) check(i, j, k);
  } else {
    std::mt19937_64 rng(n);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int s = 0; s < 4096; ++s) check(pick(rng), pick(rng), pick(rng));
  }
}

std::string FiniteCommAlgebra::format(const Element& x) const {
  std::string out;
  for (std::size_t i = 0; i < dim(); ++i) {
    if (x[i].is_zero() && x[i].is_exact()) continue;
    if (!out.empty()) out += " + ";
    out += "(" + x[i].str() + ")*" + labels_[i];
  }
  return out.empty() ? "0" : out;
}

Element add(const Element& a, const Element& b) {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b.at(i);
  return out;
}

Element sub(const Element& a, const Element& b) {
  Element out = a;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b.at(i);
  return out;
}

Element scale(const NovikovSeries& c, const Element& a) {
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = c * a[i];
  return out;
}

Element truncated(const Element& a, const ExtRational& t) {
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].truncated(t);
  return out;
}

Element as_exact(const Element& a) {
  Element out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i].as_exact();
  return out;
}

ExtRational valuation(const Element& a) {
  ExtRational v = ExtRational::infinity();
  for (const auto& c : a) v = min(v, c.val());
  return v;
}

bool is_zero(const Element& a) {
  return std::all_of(a.begin(), a.end(), [](const NovikovSeries& c) { return c.is_zero(); });
}

FiniteCommAlgebra qh_p1(const Rational& omega) {
  if (omega <= 0) throw ConfigError("omega must be positive");
  std::vector<std::vector<FiniteCommAlgebra::Entry>> products(4);
  products[0] = {{0, NovikovSeries(1)}};
  products[1] = {{1, NovikovSeries(1)}};
  products[2] = {{1, NovikovSeries(1)}};
  products[3] = {{0, NovikovSeries::T(omega)}};
  return FiniteCommAlgebra({"1", "H"}, std::move(products), {NovikovSeries(1), NovikovSeries()},
                           Grading{{Rational(0), Rational(2)}, omega});
}

namespace {

// Mixed-radix digits of a tensor basis index, most significant first.
std::vector<std::size_t> digits_of(std::size_t index, std::size_t base, long k) {
  std::vector<std::size_t> d(k);
  for (long i = k - 1; i >= 0; --i) {
    d[i] = index % base;
    index /= base;
  }
  return d;
}

std::size_t index_of(const std::vector<std::size_t>& digits, std::size_t base) {
  std::size_t idx = 0;
  for (std::size_t d : digits) idx = idx * base + d;
  return idx;
}

}  // namespace

FiniteCommAlgebra tensor_power(const FiniteCommAlgebra& a, long k, std::size_t max_dim) {
  if (k < 1) throw ConfigError("tensor power needs k >= 1");
  const std::size_t n = a.dim();
  std::size_t total = 1;
  for (long i = 0; i < k; ++i) {
    if (total > max_dim / n) throw DimensionOverflow("tensor power exceeds basis cap " + std::to_string(max_dim));
    total *= n;
  }
  if (k == 1) return a;

  std::vector<std::string> labels(total);
  std::vector<std::vector<std::size_t>> digits(total);
  for (std::size_t t = 0; t < total; ++t) {
    digits[t] = digits_of(t, n, k);
    std::string label;
    for (long i = 0; i < k; ++i) label += (i ? "|" : "") + a.labels()[digits[t][i]];
    labels[t] = label;
  }

  using Entry = FiniteCommAlgebra::Entry;
  std::vector<std::vector<Entry>> products(total * total);
  for (std::size_t s = 0; s < total; ++s) {
    for (std::size_t t = 0; t < total; ++t) {
      // Expand the factorwise products b_{s_i} b_{t_i}.
      std::map<std::size_t, NovikovSeries> acc{{0, NovikovSeries(1)}};
      for (long i = 0; i < k; ++i) {
        std::map<std::size_t, NovikovSeries> next;
        for (const auto& [prefix, coeff] : acc)
          for (const auto& e : a.product(digits[s][i], digits[t][i]))
            next[prefix * n + e.index] += coeff * e.coefficient;
        acc = std::move(next);
      }
      for (auto& [idx, coeff] : acc)
        if (!is_exact_zero(coeff)) products[s * total + t].push_back({idx, std::move(coeff)});
    }
  }

  Element unit(total);
  {
    std::map<std::size_t, NovikovSeries> acc{{0, NovikovSeries(1)}};
    for (long i = 0; i < k; ++i) {
      std::map<std::size_t, NovikovSeries> next;
      for (const auto& [prefix, coeff] : acc)
        for (std::size_t j = 0; j < n; ++j)
          if (!is_exact_zero(a.unit()[j])) next[prefix * n + j] += coeff * a.unit()[j];
      acc = std::move(next);
    }
    for (auto& [idx, coeff] : acc) unit[idx] = coeff;
  }

  std::optional<Grading> grading;
  if (a.grading()) {
    Grading g{std::vector<Rational>(total), a.grading()->omega};
    for (std::size_t t = 0; t < total; ++t)
      for (long i = 0; i < k; ++i) g.basis_degree[t] += a.grading()->basis_degree[digits[t][i]];
    grading = std::move(g);
  }
  FiniteCommAlgebra out(std::move(labels), std::move(products), std::move(unit), std::move(grading));
  out.verify_axioms();
  return out;
}

Element InvariantSubalgebra::embed(const Element& x) const {
  Element out(ambient_dim);
  for (std::size_t i = 0; i < orbits.size(); ++i)
    for (std::size_t t : orbits[i]) out[t] += x.at(i);
  return out;
}

InvariantSubalgebra invariant_subalgebra(const FiniteCommAlgebra& a,
                                         const std::vector<std::vector<std::size_t>>& generators) {
  const std::size_t n = a.dim();
  for (const auto& g : generators) {
    if (g.size() != n) throw ConfigError("group generator has wrong length");
    std::vector<std::size_t> sorted = g;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < n; ++i)
      if (sorted[i] != i) throw ConfigError("group generator is not a permutation");
  }

  std::vector<long> orbit_of(n, -1);
  std::vector<std::vector<std::size_t>> orbits;
  for (std::size_t start = 0; start < n; ++start) {
    if (orbit_of[start] >= 0) continue;
    std::vector<std::size_t> orbit{start};
    orbit_of[start] = static_cast<long>(orbits.size());
    for (std::size_t pos = 0; pos < orbit.size(); ++pos) {
      for (const auto& g : generators) {
        std::size_t img = g[orbit[pos]];
        if (orbit_of[img] < 0) {
          orbit_of[img] = static_cast<long>(orbits.size());
          orbit.push_back(img);
        }
      }
    }
    std::sort(orbit.begin(), orbit.end());
    orbits.push_back(std::move(orbit));
  }

  const std::size_t m = orbits.size();
  std::vector<std::string> labels(m);
  for (std::size_t i = 0; i < m; ++i) labels[i] = "[" + a.labels()[orbits[i].front()] + "]";

  using Entry = FiniteCommAlgebra::Entry;
  std::vector<std::vector<Entry>> products(m * m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = i; j < m; ++j) {
      // The product of two orbit sums is invariant, so its coordinate on an
      // orbit sum is its coordinate at the orbit's first element.
      std::map<std::size_t, NovikovSeries> acc;
      for (std::size_t s : orbits[i])
        for (std::size_t t : orbits[j])
          for (const auto& e : a.product(s, t))
            if (orbits[orbit_of[e.index]].front() == e.index) acc[orbit_of[e.index]] += e.coefficient;
      for (auto& [idx, coeff] : acc) {
        if (is_exact_zero(coeff)) continue;
        products[i * m + j].push_back({idx, coeff});
        if (i != j) products[j * m + i].push_back({idx, coeff});
      }
    }
  }

  Element unit(m);
  for (std::size_t i = 0; i < m; ++i) unit[i] = a.unit()[orbits[i].front()];
  for (std::size_t t = 0; t < n; ++t)
    if (!(a.unit()[t] == unit[orbit_of[t]])) throw NonEquivariant("unit is not invariant");

  std::optional<Grading> grading;
  if (a.grading()) {
    Grading g{std::vector<Rational>(m), a.grading()->omega};
    for (std::size_t i = 0; i < m; ++i) g.basis_degree[i] = a.grading()->basis_degree[orbits[i].front()];
    grading = std::move(g);
  }
  FiniteCommAlgebra sub_algebra(std::move(labels), std::move(products), std::move(unit), std::move(grading));
  sub_algebra.verify_axioms();
  return {std::move(sub_algebra), std::move(orbits), n};
}

InvariantSubalgebra symmetric_invariant_subalgebra(const FiniteCommAlgebra& a, long k,
                                                   std::size_t max_dim) {
  FiniteCommAlgebra ambient = tensor_power(a, k, max_dim);
  const std::size_t n = a.dim();
  const std::size_t total = ambient.dim();
  std::vector<std::vector<std::size_t>> generators;
  if (k >= 2) {
    std::vector<std::size_t> swap(total), cycle(total);
    for (std::size_t t = 0; t < total; ++t) {
      auto d = digits_of(t, n, k);
      auto ds = d;
      std::swap(ds[0], ds[1]);
      swap[t] = index_of(ds, n);
      std::rotate(d.begin(), d.begin() + 1, d.end());
      cycle[t] = index_of(d, n);
    }
    generators = {swap, cycle};
  }
  return invariant_subalgebra(ambient, generators);
}

// ---------------------------------------------------------------------------
// Idempotent lifting

LiftReport idempotent_lift(const FiniteCommAlgebra& a, const Element& e0, const Rational& precision) {
  LiftReport report;
  Element e = e0;
  auto defect = [&](const Element& x) { return sub(a.multiply(x, x), x); };
  Element d = defect(e);
  ExtRational vd = valuation(d);
  report.defect_valuations.push_back(vd);
  if (is_zero(d) && std::all_of(d.begin(), d.end(), [](const NovikovSeries& c) { return c.is_exact(); })) {
    report.idempotent = e;
    return report;
  }

  const ExtRational ve = valuation(e0);
  const Rational m = (ve.is_finite() && ve.value() < 0) ? ve.value() : Rational(0);
  // Iterates are cut at T^work; the cut perturbs the defect only at or above
  // T^(work + m) = T^(stop + 1).
  const Rational stop = precision - m;
  const ExtRational work(Rational(precision - 2 * m + 1));
  e = as_exact(truncated(e, work));
  d = defect(e);
  vd = valuation(d);

  for (int step = 0; step < 128; ++step) {
    if (vd >= ExtRational(stop)) {
      report.idempotent = vd.is_infinite() ? e : truncated(e, ExtRational(precision));
      return report;
    }
    Element e2 = a.multiply(e, e);
    Element e3 = a.multiply(e2, e);
    Element next = as_exact(truncated(sub(scale(NovikovSeries(3), e2), scale(NovikovSeries(2), e3)), work));
    Element dn = defect(next);
    ExtRational vn = valuation(dn);
    report.defect_valuations.push_back(vn);
    bool stalled = !(vn > vd);
    bool slow = vd > ExtRational(0) && vn < min(vd + vd, ExtRational(stop));
    if (stalled || slow) {
      throw NoConvergence("defect valuation went from " + vd.str() + " to " + vn.str());
    }
    e = std::move(next);
    vd = vn;
  }
  throw NoConvergence("idempotent lift did not reach precision in 128 steps");
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

using Poly = std::vector<NovikovSeries>;  // lowest degree first

NovikovSeries eval_poly(const Poly& p, const NovikovSeries& x, const ExtRational& cut) {
  NovikovSeries acc;
  for (std::size_t i = p.size(); i-- > 0;) acc = (acc * x + p[i]).truncated(cut);
  return acc;
}

Poly derivative(const Poly& p) {
  Poly out;
  for (std::size_t i = 1; i < p.size(); ++i) out.push_back(p[i].scaled(Rational(static_cast<long>(i))));
  return out;
}

struct LeadingRoot {
  Rational valuation;
  Rational residue;
};

// Leading terms of the roots of a monic polynomial when they are all simple
// with rational residues; nullopt otherwise.
std::optional<std::vector<LeadingRoot>> split_leading_roots(Poly chi, bool& has_zero_root) {
  has_zero_root = false;
  std::size_t low = 0;
  while (low < chi.size() && chi[low].is_zero()) {
    if (!chi[low].is_exact()) throw PrecisionLoss("characteristic polynomial coefficient unknown");
    ++low;
  }
  if (low >= 2) return std::nullopt;
  if (low == 1) {
    has_zero_root = true;
    chi.erase(chi.begin());
  }

  struct Point {
    long i;
    Rational v;
  };
  std::vector<Point> pts;
  for (std::size_t i = 0; i < chi.size(); ++i)
    if (!chi[i].is_zero()) pts.push_back({static_cast<long>(i), chi[i].leading_exponent()});

  std::vector<Point> hull;
  for (const auto& p : pts) {
    while (hull.size() >= 2) {
      const auto& a = hull[hull.size() - 2];
      const auto& b = hull.back();
      // Drop b when it lies on or above segment a-p.
      Rational lhs = (b.v - a.v) * (p.i - a.i);
      Rational rhs = (p.v - a.v) * (b.i - a.i);
      if (lhs >= rhs) hull.pop_back();
      else break;
    }
    hull.push_back(p);
  }

  std::vector<LeadingRoot> out;
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    const auto& a = hull[s];
    const auto& b = hull[s + 1];
    Rational nu = -(b.v - a.v) / Rational(b.i - a.i);
    Rational line0 = a.v + nu * a.i;
    std::vector<Rational> residual(b.i - a.i + 1);
    for (long i = a.i; i <= b.i; ++i) {
      const NovikovSeries& c = chi[i];
      Rational at_line = line0 - nu * i;
      if (c.is_zero()) {
        if (c.truncation() <= ExtRational(at_line)) throw PrecisionLoss("Newton polygon undetermined");
        continue;
      }
      if (c.leading_exponent() == at_line) residual[i - a.i] = c.leading_coefficient();
    }
    RationalRoots rr = rational_roots(residual);
    if (rr.remaining_degree != 0) return std::nullopt;
    for (const auto& [root, mult] : rr.roots) {
      if (mult != 1) return std::nullopt;
      out.push_back({nu, root});
    }
  }
  std::sort(out.begin(), out.end(), [](const LeadingRoot& x, const LeadingRoot& y) {
    if (x.valuation != y.valuation) return x.valuation < y.valuation;
    return x.residue > y.residue;
  });
  return out;
}

NovikovSeries lift_root(const Poly& chi, const LeadingRoot& lead, const Rational& work, const Rational& margin) {
  NovikovSeries r = NovikovSeries::monomial(lead.residue, lead.valuation);
  Poly dchi = derivative(chi);
  const ExtRational cut(Rational(work + margin));
  ExtRational last_gain;
  for (int step = 0; step < 128; ++step) {
    NovikovSeries f = eval_poly(chi, r, cut);
    if (f.is_zero()) return r;
    NovikovSeries df = eval_poly(dchi, r, cut);
    if (df.is_zero()) throw NoConvergence("derivative vanishes at a supposedly simple root");
    Rational rel = work - f.leading_exponent() + df.leading_exponent();
    if (rel <= 0) return r;
    NovikovSeries corr = (f * df.invert(rel)).truncated(ExtRational(work));
    ExtRational gain = corr.val();
    if (last_gain.is_finite() && !(gain > last_gain)) throw NoConvergence("root lift stalled");
    last_gain = gain;
    r = (r - corr).truncated(ExtRational(work)).as_exact();
  }
  throw NoConvergence("root lift did not converge");
}

Rational default_precision(const FiniteCommAlgebra& a) {
  Integer g = 1;
  auto absorb = [&](const NovikovSeries& s) {
    for (const auto& t : s.terms()) g = lcm(g, t.exponent.get_den());
  };
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t j = 0; j < a.dim(); ++j)
      for (const auto& e : a.product(i, j)) absorb(e.coefficient);
  for (const auto& c : a.unit()) absorb(c);
  return make_rational(Integer(64), g);
}

std::optional<std::vector<Element>> try_candidate(const FiniteCommAlgebra& a, const Element& x,
                                                  const Rational& precision) {
  Poly chi = a.multiplication_matrix(x).characteristic_polynomial();
  bool zero_root = false;
  auto leading = split_leading_roots(chi, zero_root);
  if (!leading) return std::nullopt;
  const std::size_t n = a.dim();
  if (leading->size() + (zero_root ? 1 : 0) != n) return std::nullopt;

  Rational spread = 1;
  for (const auto& l : *leading) spread += abs(l.valuation);
  const Rational work = precision + 2 * spread * n;
  const Rational margin = 2 * spread * n;
  std::vector<NovikovSeries> roots;
  for (const auto& l : *leading) roots.push_back(lift_root(chi, l, work, margin));
  if (zero_root) roots.push_back(NovikovSeries());

  std::vector<Element> out;
  for (std::size_t i = 0; i < roots.size(); ++i) {
    Element e = a.unit();
    for (std::size_t j = 0; j < roots.size(); ++j) {
      if (i == j) continue;
      NovikovSeries diff = roots[i] - roots[j];
      Element factor = sub(x, scale(roots[j], a.unit()));
      e = scale(diff.invert(work), a.multiply(e, factor));
      e = as_exact(truncated(e, ExtRational(work)));
    }
    out.push_back(idempotent_lift(a, e, precision).idempotent);
  }
  return out;
}

void verify_decomposition(const FiniteCommAlgebra& a, const std::vector<Element>& es) {
  Element sum = a.zero();
  for (const auto& e : es) sum = add(sum, e);
  if (!is_zero(sub(sum, a.unit()))) throw NoConvergence("idempotents do not sum to 1");
  for (std::size_t i = 0; i < es.size(); ++i) {
    for (std::size_t j = i; j < es.size(); ++j) {
      Element p = a.multiply(es[i], es[j]);
      if (i == j) p = sub(p, es[i]);
      if (!is_zero(p)) throw NoConvergence("idempotents are not orthogonal");
    }
  }
}

}  // namespace

std::vector<Element> idempotent_decomposition(const FiniteCommAlgebra& a,
                                              const DecompositionOptions& options) {
  if (a.dim() == 1) return {a.unit()};
  const Rational precision = options.precision.value_or(default_precision(a));

  // Non-unit basis vectors first, then random small integer combinations.
  std::vector<Element> candidates;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    Element b = a.basis(i);
    if (!is_zero(sub(b, a.unit()))) candidates.push_back(b);
  }
  std::mt19937_64 rng(options.seed);
  std::uniform_int_distribution<long> coeff(-3, 3);
  for (int t = 0; t < options.random_attempts; ++t) {
    Element x = a.zero();
    for (std::size_t i = 0; i < a.dim(); ++i) x[i] = NovikovSeries(coeff(rng));
    candidates.push_back(std::move(x));
  }

  for (const auto& x : candidates) {
    auto result = try_candidate(a, x, precision);
    if (!result) continue;
    verify_decomposition(a, *result);
    return *result;
  }
  throw ResidueNotSplit("no candidate element has a characteristic polynomial with distinct rational residues");
}

std::vector<ExtRational> idempotent_valuations(const std::vector<Element>& idempotents) {
  std::vector<ExtRational> out;
  for (const auto& e : idempotents) out.push_back(valuation(e));
  return out;
}

std::optional<Rational> grade_check(const FiniteCommAlgebra& a, const Element& x) {
  if (!a.grading()) throw ConfigError("algebra is not graded");
  const Grading& g = *a.grading();
  std::optional<Rational> degree;
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (const auto& t : x[i].terms()) {
      Rational d = g.basis_degree[i] + 4 * t.exponent / g.omega;
      if (degree && *degree != d) return std::nullopt;
      degree = d;
    }
  }
  return degree.value_or(Rational(0));
}

bool sublinear_trend(const std::vector<Rational>& ratios, const Rational& tolerance) {
  if (ratios.empty()) return false;
  if (ratios.size() == 1) return ratios.front() == 0;
  for (std::size_t i = 0; i + 1 < ratios.size(); ++i)
    if (abs(ratios[i + 1]) > abs(ratios[i]) + tolerance) return false;
  return ratios.back() == 0 || abs(ratios.back()) < abs(ratios.front());
}

WeylPredicateReport weyl_idempotent_predicate(const std::vector<WeylFamilyMember>& family,
                                              const Rational& tolerance) {
  WeylPredicateReport report;
  std::vector<Rational> ratios;
  for (const auto& member : family) {
    WeylEntry entry{member.k, 0, valuation(member.idempotent), std::nullopt};
    entry.summand_rank = member.algebra->multiplication_matrix(member.idempotent).rank();
    if (entry.summand_rank != 1) report.all_field_summands = false;
    if (entry.valuation.is_finite()) {
      entry.ratio = entry.valuation.value() / Rational(member.k);
      ratios.push_back(*entry.ratio);
    } else {
      report.all_field_summands = false;
    }
    report.entries.push_back(std::move(entry));
  }
  if (!ratios.empty() &&
      std::all_of(ratios.begin(), ratios.end(), [&](const Rational& r) { return r == ratios.front(); }))
    report.constant_ratio = ratios.front();
  report.sublinear = ratios.size() == family.size() && sublinear_trend(ratios, tolerance);
  return report;
}

}  // namespace symfloer::qalg
