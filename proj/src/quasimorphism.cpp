#include "symfloer/quasimorphism.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>

#include "symfloer/errors.hpp"

namespace symfloer::qm {

namespace {

std::string cycle_name(const std::vector<std::size_t>& perm) {
  std::string out;
  std::vector<bool> seen(perm.size());
  for (std::size_t start = 0; start < perm.size(); ++start) {
    if (seen[start] || perm[start] == start) continue;
    out += "(";
    for (std::size_t p = start; !seen[p]; p = perm[p]) {
      if (p != start) out += " ";
      out += std::to_string(p + 1);
      seen[p] = true;
    }
    out += ")";
  }
  return out.empty() ? "e" : out;
}

// BFS from the identity by right multiplication with `steps`; parent[x] is
// (predecessor, step index).
template <class Step>
std::vector<std::optional<std::pair<std::size_t, std::size_t>>> bfs(const FiniteGroupTable& g,
                                                                      const std::vector<Step>& steps,
                                                                      const std::vector<std::size_t>& step_elements) {
  std::vector<std::optional<std::pair<std::size_t, std::size_t>>> parent(g.order());
  std::vector<bool> seen(g.order());
  std::vector<std::size_t> queue{0};
  seen[0] = true;
  for (std::size_t i = 0; i < queue.size(); ++i) {
    std::size_t x = queue[i];
    for (std::size_t s = 0; s < steps.size(); ++s) {
      std::size_t y = g.mul[x][step_elements[s]];
      if (seen[y]) continue;
      seen[y] = true;
      parent[y] = {x, s};
      queue.push_back(y);
    }
  }
  return parent;
}

template <class Step>
std::vector<Step> path_to(const std::vector<std::optional<std::pair<std::size_t, std::size_t>>>& parent,
                          const std::vector<Step>& steps, std::size_t target, const std::string& what) {
  std::vector<Step> out;
  std::size_t x = target;
  while (x != 0) {
    if (!parent[x]) throw NotInClosure("element " + std::to_string(target) + " is not in the " + what);
    out.push_back(steps[parent[x]->second]);
    x = parent[x]->first;
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Commutator> distinct_commutators(const FiniteGroupTable& g, std::vector<std::size_t>& values) {
  std::vector<Commutator> steps;
  std::set<std::size_t> seen;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) {
      std::size_t c = g.commutator(a, b);
      if (c == 0 || !seen.insert(c).second) continue;
      steps.push_back({a, b});
      values.push_back(c);
    }
  return steps;
}

}  // namespace

FiniteGroupTable FiniteGroupTable::from_table(std::vector<std::string> names, std::vector<std::vector<std::size_t>> mul) {
  const std::size_t n = names.size();
  if (n == 0) throw GroupAxiomViolation("empty group");
  if (mul.size() != n) throw GroupAxiomViolation("table has " + std::to_string(mul.size()) + " rows for " + std::to_string(n) + " elements");
  for (std::size_t a = 0; a < n; ++a) {
    if (mul[a].size() != n) throw GroupAxiomViolation("row " + std::to_string(a) + " has the wrong length");
    for (std::size_t b = 0; b < n; ++b)
      if (mul[a][b] >= n) throw GroupAxiomViolation("product out of range at (" + std::to_string(a) + ", " + std::to_string(b) + ")");
  }
  for (std::size_t a = 0; a < n; ++a)
    if (mul[0][a] != a || mul[a][0] != a) throw GroupAxiomViolation("element 0 is not the identity");
  FiniteGroupTable g;
  g.inv.assign(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b)
      if (mul[a][b] == 0 && mul[b][a] == 0) g.inv[a] = b;
    if (g.inv[a] == n) throw GroupAxiomViolation("element " + names[a] + " has no inverse");
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        if (mul[mul[a][b]][c] != mul[a][mul[b][c]])
          throw GroupAxiomViolation("associativity fails at (" + names[a] + ", " + names[b] + ", " + names[c] + ")");
  g.names = std::move(names);
  g.mul = std::move(mul);
  return g;
}

FiniteGroupTable FiniteGroupTable::from_permutations(std::size_t n,
                                                     const std::vector<std::vector<std::size_t>>& generators) {
  std::vector<std::size_t> id(n);
  std::iota(id.begin(), id.end(), 0);
  for (const auto& gen : generators) {
    std::vector<std::size_t> sorted = gen;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != id) throw GroupAxiomViolation("generator is not a permutation");
  }
  auto compose = [n](const std::vector<std::size_t>& x, const std::vector<std::size_t>& y) {
    std::vector<std::size_t> z(n);
    for (std::size_t p = 0; p < n; ++p) z[p] = x[y[p]];
    return z;
  };
  std::vector<std::vector<std::size_t>> elements{id};
  std::map<std::vector<std::size_t>, std::size_t> index{{id, 0}};
  for (std::size_t i = 0; i < elements.size(); ++i)
    for (const auto& gen : generators) {
      auto h = compose(gen, elements[i]);
      if (index.emplace(h, elements.size()).second) elements.push_back(h);
    }
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul(elements.size(), std::vector<std::size_t>(elements.size()));
  for (std::size_t a = 0; a < elements.size(); ++a) {
    names.push_back(cycle_name(elements[a]));
    for (std::size_t b = 0; b < elements.size(); ++b) mul[a][b] = index.at(compose(elements[a], elements[b]));
  }
  return from_table(std::move(names), std::move(mul));
}

FiniteGroupTable FiniteGroupTable::alternating5() {
  return from_permutations(5, {{1, 2, 0, 3, 4}, {0, 1, 3, 4, 2}, {0, 2, 3, 1, 4}});
}

FiniteGroupTable FiniteGroupTable::cyclic(std::size_t n) {
  if (n == 0) throw GroupAxiomViolation("empty group");
  std::vector<std::string> names;
  std::vector<std::vector<std::size_t>> mul(n, std::vector<std::size_t>(n));
  for (std::size_t a = 0; a < n; ++a) {
    names.push_back(a == 0 ? "e" : "g^" + std::to_string(a));
    for (std::size_t b = 0; b < n; ++b) mul[a][b] = (a + b) % n;
  }
  return from_table(std::move(names), std::move(mul));
}

FiniteGroupTable FiniteGroupTable::by_name(const std::string& name) {
  if (name == "a5") return alternating5();
  if (name == "s3") return from_permutations(3, {{1, 0, 2}, {1, 2, 0}});
  if (name == "trivial") return cyclic(1);
  if (name.size() > 1 && name[0] == 'z' && std::all_of(name.begin() + 1, name.end(), ::isdigit)) {
    std::size_t n = std::stoul(name.substr(1));
    if (n >= 1 && n <= 360) return cyclic(n);
  }
  throw PreconditionViolation("unknown group '" + name + "' (expected a5, s3, trivial or zN with 1 <= N <= 360)");
}

std::size_t FiniteGroupTable::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return i;
  throw PreconditionViolation("no element named '" + name + "'");
}

Rational defect(const FiniteGroupTable& g, const GroupFunction& mu) {
  Rational best;
  for (std::size_t a = 0; a < g.order(); ++a)
    for (std::size_t b = 0; b < g.order(); ++b) best = std::max<Rational>(best, abs(mu[g.mul[a][b]] - mu[a] - mu[b]));
  return best;
}

Rational sup_norm(const GroupFunction& mu) {
  Rational best;
  for (const auto& x : mu) best = std::max<Rational>(best, abs(x));
  return best;
}

GroupFunction random_function(const FiniteGroupTable& g, std::mt19937_64& rng, long bound) {
  std::uniform_int_distribution<long> num(-bound, bound), den(1, 6);
  GroupFunction mu;
  for (std::size_t i = 0; i < g.order(); ++i) {
    long n = num(rng);
    mu.push_back(make_rational(n, den(rng)));
  }
  return mu;
}

bool is_perfect(const FiniteGroupTable& g) {
  std::vector<std::size_t> values;
  auto steps = distinct_commutators(g, values);
  auto parent = bfs(g, steps, values);
  for (std::size_t x = 1; x < g.order(); ++x)
    if (!parent[x]) return false;
  return true;
}

std::vector<ConjugateFactor> closure_expression(const FiniteGroupTable& g, const std::vector<std::size_t>& f,
                                                std::size_t target) {
  std::vector<ConjugateFactor> steps;
  std::vector<std::size_t> values;
  std::set<std::size_t> seen;
  // Identity conjugators first so that members of F get l = e.
  for (std::size_t ell = 0; ell < g.order(); ++ell)
    for (std::size_t fj : f)
      for (int sign : {1, -1}) {
        std::size_t base = sign > 0 ? fj : g.inv[fj];
        std::size_t c = g.mul[g.mul[ell][base]][g.inv[ell]];
        if (c == 0 || !seen.insert(c).second) continue;
        steps.push_back({ell, fj, sign});
        values.push_back(c);
      }
  return path_to(bfs(g, steps, values), steps, target, "normal closure");
}

std::size_t evaluate(const FiniteGroupTable& g, const std::vector<ConjugateFactor>& expr) {
  std::size_t x = 0;
  for (const auto& c : expr) {
    std::size_t base = c.sign > 0 ? c.f : g.inv[c.f];
    x = g.mul[x][g.mul[g.mul[c.ell][base]][g.inv[c.ell]]];
  }
  return x;
}

bool conjugate_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const std::vector<ConjugateFactor>& expr) {
  return conjugate_bound_check(g, mu, defect(g, mu), expr);
}

bool conjugate_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const Rational& d,
                      const std::vector<ConjugateFactor>& expr) {
  if (expr.empty()) return abs(mu[0]) <= d;
  Rational sum;
  for (const auto& c : expr) sum += mu[c.sign > 0 ? c.f : g.inv[c.f]];
  return abs(mu[evaluate(g, expr)] - sum) <= Rational(5 * static_cast<long>(expr.size())) * d;
}

std::vector<Commutator> commutator_expression(const FiniteGroupTable& g, std::size_t target) {
  std::vector<std::size_t> values;
  auto steps = distinct_commutators(g, values);
  return path_to(bfs(g, steps, values), steps, target, "commutator subgroup");
}

std::size_t evaluate(const FiniteGroupTable& g, const std::vector<Commutator>& expr) {
  std::size_t x = 0;
  for (const auto& c : expr) x = g.mul[x][g.commutator(c.a, c.b)];
  return x;
}

std::vector<std::size_t> commutator_lengths(const FiniteGroupTable& g) {
  std::vector<std::size_t> values;
  auto steps = distinct_commutators(g, values);
  auto parent = bfs(g, steps, values);
  std::vector<std::size_t> len(g.order());
  for (std::size_t x = 1; x < g.order(); ++x) {
    if (!parent[x]) throw NotPerfect("element " + g.names[x] + " is not a product of commutators");
    len[x] = path_to(parent, steps, x, "commutator subgroup").size();
  }
  return len;
}

Rational commutator_constant(std::size_t n) { return n == 0 ? Rational(1) : Rational(8 * static_cast<long>(n) - 1); }

bool commutator_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const std::vector<Commutator>& expr) {
  return commutator_bound_check(g, mu, defect(g, mu), expr);
}

bool commutator_bound_check(const FiniteGroupTable& g, const GroupFunction& mu, const Rational& d,
                            const std::vector<Commutator>& expr) {
  return abs(mu[evaluate(g, expr)]) <= commutator_constant(expr.size()) * d;
}

SequenceReport sequence_report(const FiniteGroupTable& g, const std::vector<GroupFunction>& sequence) {
  SequenceReport report;
  for (std::size_t n : commutator_lengths(g)) report.constant = std::max(report.constant, commutator_constant(n));
  for (std::size_t k = 0; k < sequence.size(); ++k) {
    SequenceRow row;
    row.k = k + 1;
    row.defect = defect(g, sequence[k]);
    row.sup = sup_norm(sequence[k]);
    row.bound = report.constant * row.defect;
    row.margin = row.bound - row.sup;
    report.bounds_hold = report.bounds_hold && row.margin >= 0;
    if (!report.rows.empty()) {
      const auto& prev = report.rows.back();
      report.decaying = report.decaying && row.defect <= prev.defect && row.sup <= prev.sup;
    }
    report.rows.push_back(row);
  }
  if (report.rows.size() > 1) {
    const auto& first = report.rows.front();
    const auto& last = report.rows.back();
    bool all_zero = first.defect == 0 && first.sup == 0;
    report.decaying = report.decaying && (all_zero || (last.defect < first.defect && last.sup < first.sup));
  }
  return report;
}

}  // namespace symfloer::qm
