#include "symfloer/potential.hpp"

#include <algorithm>
#include <cctype>

#include "symfloer/errors.hpp"
#include "symfloer/rational_poly.hpp"

namespace symfloer::potential {

void LaurentPoly::add_term(const Exponent& e, const NovikovSeries& c) {
  if (e.size() != nvars_) throw std::invalid_argument("exponent length does not match variable count");
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    if (!(c.is_zero() && c.is_exact())) terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second.is_zero() && it->second.is_exact()) terms_.erase(it);
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  if (o.nvars_ != nvars_) throw std::invalid_argument("variable count mismatch");
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

LaurentPoly LaurentPoly::log_derivative(std::size_t j) const {
  LaurentPoly out(nvars_);
  for (const auto& [e, c] : terms_)
    if (e.at(j) != 0) out.add_term(e, c.scaled(Rational(e[j])));
  return out;
}

namespace {

bool is_exact_monomial(const NovikovSeries& s) { return s.is_exact() && s.terms().size() <= 1; }

}  // namespace

NovikovSeries LaurentPoly::evaluate(const std::vector<NovikovSeries>& z, const ExtRational& cut) const {
  if (z.size() != nvars_) throw std::invalid_argument("point has wrong dimension");
  std::vector<std::optional<NovikovSeries>> inverses(nvars_);
  auto inverse = [&](std::size_t j) -> const NovikovSeries& {
    if (!inverses[j]) {
      if (is_exact_monomial(z[j])) {
        inverses[j] = z[j].invert();
        return *inverses[j];
      }
      std::optional<Rational> rel;
      if (cut.is_finite()) rel = cut.value();
      inverses[j] = z[j].invert(rel).truncated(cut);
    }
    return *inverses[j];
  };
  NovikovSeries total;
  for (const auto& [e, c] : terms_) {
    NovikovSeries mono(1);
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      const NovikovSeries& base = e[j] > 0 ? z[j] : inverse(j);
      for (long i = 0; i < std::abs(e[j]); ++i) {
        mono = mono * base;
        if (!is_exact_monomial(mono)) mono = mono.truncated(cut);
      }
    }
    total += c * mono;
  }
  return total;
}

ExtRational LaurentPoly::min_coefficient_valuation() const {
  ExtRational v = ExtRational::infinity();
  for (const auto& [e, c] : terms_) v = min(v, c.val_lower_bound());
  return v;
}

std::string LaurentPoly::str() const {
  std::string out;
  for (const auto& [e, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += "(" + c.str() + ")";
    for (std::size_t j = 0; j < nvars_; ++j) {
      if (e[j] == 0) continue;
      out += "*z" + std::to_string(j + 1);
      if (e[j] != 1) out += "^(" + std::to_string(e[j]) + ")";
    }
  }
  return out.empty() ? "0" : out;
}

void LinkConfig::validate() const {
  if (k < 1) throw ConfigError("k must be >= 1");
  if (B <= 0) throw ConfigError("disc area B must be positive");
  if (gamma == 0) throw ConfigError("bulk scalar gamma must be nonzero");
  if (k >= 2) {
    if (A < 0) throw ConfigError("annulus area A must be non-negative");
    if (A >= B)
      throw ConfigError("annulus area A = " + to_string(A) + " must be smaller than disc area B = " +
                        to_string(B));
    if (total_area && Rational((k - 1) * A + 2 * B) != *total_area)
      throw ConfigError("(k-1)A + 2B does not equal the total area " + to_string(*total_area));
  }
}

LaurentPoly build_s2_potential(const LinkConfig& cfg) {
  cfg.validate();
  const std::size_t k = static_cast<std::size_t>(cfg.k);
  LaurentPoly w(k);
  NovikovSeries tb = NovikovSeries::T(cfg.B);
  // c^2 T^A = gamma^2 T^B with val(c) = (B - A)/2.
  NovikovSeries c2ta = NovikovSeries::monomial(cfg.gamma * cfg.gamma, cfg.B);
  auto unit_vector = [&](std::size_t j, long power) {
    Exponent e(k, 0);
    e[j] = power;
    return e;
  };
  w.add_term(unit_vector(0, 1), tb);
  w.add_term(unit_vector(k - 1, -1), tb);
  for (std::size_t j = 0; j + 1 < k; ++j) {
    w.add_term(unit_vector(j, -1), c2ta);
    w.add_term(unit_vector(j + 1, 1), c2ta);
  }
  return w;
}

std::vector<LaurentPoly> log_gradient(const LaurentPoly& w) {
  std::vector<LaurentPoly> out;
  for (std::size_t j = 0; j < w.nvars(); ++j) out.push_back(w.log_derivative(j));
  return out;
}

std::vector<std::vector<LaurentPoly>> log_hessian(const LaurentPoly& w) {
  std::vector<std::vector<LaurentPoly>> out;
  for (const auto& g : log_gradient(w)) {
    std::vector<LaurentPoly> row;
    for (std::size_t j = 0; j < w.nvars(); ++j) row.push_back(g.log_derivative(j));
    out.push_back(std::move(row));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Leading-order system

namespace {

using LeadingEquation = std::map<Exponent, Rational>;

std::vector<LeadingEquation> leading_system(const LaurentPoly& w) {
  std::vector<LeadingEquation> eqs;
  for (const auto& g : log_gradient(w)) {
    LeadingEquation eq;
    ExtRational v = ExtRational::infinity();
    for (const auto& [e, c] : g.terms()) {
      if (c.is_zero()) throw PrecisionLoss("gradient coefficient known only as zero");
      v = min(v, c.val());
    }
    for (const auto& [e, c] : g.terms())
      if (c.val() == v) eq[e] = c.leading_coefficient();
    eqs.push_back(std::move(eq));
  }
  return eqs;
}

Rational rational_power(const Rational& x, long n) {
  Rational base = n >= 0 ? x : Rational(1 / x);
  Rational out = 1;
  for (long i = 0; i < std::abs(n); ++i) out *= base;
  return out;
}

class LeadingSolver {
 public:
  explicit LeadingSolver(std::vector<LeadingEquation> eqs, std::size_t n) : eqs_(std::move(eqs)), n_(n) {}

  std::vector<std::vector<Rational>> solve() {
    std::vector<std::optional<Rational>> assign(n_);
    recurse(assign);
    std::sort(solutions_.begin(), solutions_.end(), std::greater<>());
    return solutions_;
  }
  bool saw_irrational() const { return irrational_; }

 private:
  // Substitutes the fixed variables; the result is keyed by the exponents
  // of the free variables (fixed positions zeroed).
  LeadingEquation substitute(const LeadingEquation& eq, const std::vector<std::optional<Rational>>& assign) const {
    LeadingEquation out;
    for (const auto& [e, c] : eq) {
      Rational coeff = c;
      Exponent free = e;
      for (std::size_t j = 0; j < n_; ++j) {
        if (assign[j] && e[j] != 0) {
          coeff *= rational_power(*assign[j], e[j]);
          free[j] = 0;
        }
      }
      out[free] += coeff;
    }
    std::erase_if(out, [](const auto& kv) { return kv.second == 0; });
    return out;
  }

  void recurse(std::vector<std::optional<Rational>>& assign) {
    std::optional<std::size_t> pick_var;
    LeadingEquation pick_eq;
    for (const auto& eq : eqs_) {
      LeadingEquation s = substitute(eq, assign);
      if (s.empty()) continue;
      std::vector<std::size_t> vars;
      for (std::size_t j = 0; j < n_; ++j) {
        if (assign[j]) continue;
        for (const auto& [e, c] : s)
          if (e[j] != 0) {
            vars.push_back(j);
            break;
          }
      }
      if (vars.empty()) return;  // nonzero constant: inconsistent branch
      if (vars.size() == 1 && !pick_var) {
        pick_var = vars.front();
        pick_eq = std::move(s);
      }
    }
    if (!pick_var) {
      if (std::all_of(assign.begin(), assign.end(), [](const auto& a) { return a.has_value(); })) {
        std::vector<Rational> point;
        for (const auto& a : assign) point.push_back(*a);
        solutions_.push_back(std::move(point));
        return;
      }
      throw UnsupportedLeadingSystem("leading-order system has no univariate equation in the free variables");
    }
    const std::size_t v = *pick_var;
    long lo = 0, hi = 0;
    bool first = true;
    for (const auto& [e, c] : pick_eq) {
      lo = first ? e[v] : std::min(lo, e[v]);
      hi = first ? e[v] : std::max(hi, e[v]);
      first = false;
    }
    if (lo == hi) return;  // a single monomial never vanishes on the torus
    std::vector<Rational> poly(static_cast<std::size_t>(hi - lo + 1));
    for (const auto& [e, c] : pick_eq) poly[static_cast<std::size_t>(e[v] - lo)] += c;
    RationalRoots rr = rational_roots(poly);
    if (rr.remaining_degree > 0) irrational_ = true;
    for (const auto& [root, mult] : rr.roots) {
      assign[v] = root;
      recurse(assign);
      assign[v].reset();
    }
  }

  std::vector<LeadingEquation> eqs_;
  std::size_t n_;
  std::vector<std::vector<Rational>> solutions_;
  bool irrational_ = false;
};

Rational rational_det(std::vector<std::vector<Rational>> m) {
  const std::size_t n = m.size();
  Rational det = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && m[p][c] == 0) ++p;
    if (p == n) return 0;
    if (p != c) {
      std::swap(m[p], m[c]);
      det = -det;
    }
    det *= m[c][c];
    for (std::size_t r = c + 1; r < n; ++r) {
      Rational f = m[r][c] / m[c][c];
      for (std::size_t j = c; j < n; ++j) m[r][j] -= f * m[c][j];
    }
  }
  return det;
}

NovikovMatrix evaluate_matrix(const std::vector<std::vector<LaurentPoly>>& h,
                              const std::vector<NovikovSeries>& z, const ExtRational& cut) {
  const std::size_t n = h.size();
  NovikovMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m(i, j) = h[i][j].evaluate(z, cut);
  return m;
}

}  // namespace

std::vector<std::vector<Rational>> leading_critical_points(const LaurentPoly& w) {
  if (w.nvars() == 0) throw UnsupportedLeadingSystem("potential has no variables");
  LeadingSolver solver(leading_system(w), w.nvars());
  auto points = solver.solve();
  if (points.empty()) {
    if (solver.saw_irrational())
      throw IrrationalRoots("leading-order critical points exist only over an extension of Q");
    throw NoLeadingCriticalPoint("leading-order gradient system has no solution on the torus");
  }
  return points;
}

Rational default_target_valuation(const LaurentPoly& w) {
  ExtRational v = w.min_coefficient_valuation();
  if (v.is_infinite()) return 0;
  Rational lead = v.value();
  return lead > 0 ? Rational(11 * lead) : Rational(lead + 10);
}

CriticalPoint newton_lift(const LaurentPoly& w, const std::vector<Rational>& leading_point,
                          std::optional<Rational> target_valuation) {
  if (leading_point.size() != w.nvars()) throw std::invalid_argument("leading point has wrong dimension");
  const ExtRational lead_ext = w.min_coefficient_valuation();
  if (lead_ext.is_infinite()) throw NoLeadingCriticalPoint("zero potential");
  const Rational lead = lead_ext.value();
  const Rational target = target_valuation.value_or(default_target_valuation(w));
  const Rational coord_precision = std::max(Rational(target - lead), Rational(0)) + 1;
  const ExtRational cut(coord_precision);

  auto grad = log_gradient(w);
  auto hess = log_hessian(w);
  const std::size_t n = w.nvars();

  std::vector<NovikovSeries> z;
  for (const auto& c : leading_point) {
    if (c == 0) throw std::invalid_argument("leading point must lie on the torus");
    z.push_back(NovikovSeries(c));
  }

  {
    NovikovMatrix h0 = evaluate_matrix(hess, z, cut);
    std::vector<std::vector<Rational>> leading(n, std::vector<Rational>(n));
    for (std::size_t i = 0; i < n; ++i) {
      ExtRational row_val = ExtRational::infinity();
      for (std::size_t j = 0; j < n; ++j) row_val = min(row_val, h0(i, j).val());
      if (row_val.is_infinite()) throw SingularLeadingHessian("Hessian row " + std::to_string(i + 1) + " vanishes");
      for (std::size_t j = 0; j < n; ++j) leading[i][j] = h0(i, j).coefficient(row_val.value());
    }
    if (rational_det(leading) == 0) throw SingularLeadingHessian("leading Hessian is singular over Q");
  }

  CriticalPoint cp;
  cp.target_valuation = target;
  auto gradient_at = [&](const std::vector<NovikovSeries>& point) {
    std::vector<NovikovSeries> g;
    for (const auto& gj : grad) g.push_back(gj.evaluate(point, cut));
    return g;
  };
  auto min_val = [](const std::vector<NovikovSeries>& g) {
    ExtRational v = ExtRational::infinity();
    for (const auto& x : g) v = min(v, x.val_lower_bound());
    return v;
  };

  std::vector<NovikovSeries> g = gradient_at(z);
  ExtRational vg = min_val(g);
  cp.step_valuations.push_back(vg);
  for (int step = 0; vg < ExtRational(target); ++step) {
    if (step >= 64) throw NoConvergence("Newton iteration did not reach the target valuation");
    NovikovMatrix h = evaluate_matrix(hess, z, cut);
    std::vector<NovikovSeries> delta = h.solve(g, coord_precision);
    for (std::size_t j = 0; j < n; ++j) z[j] = (z[j] - z[j] * delta[j]).truncated(cut).as_exact();
    g = gradient_at(z);
    ExtRational next = min_val(g);
    cp.step_valuations.push_back(next);
    if (!(next > vg)) throw NoConvergence("gradient valuation stalled at " + vg.str());
    vg = next;
  }

  bool exact = std::all_of(g.begin(), g.end(), [](const NovikovSeries& x) { return x.is_zero() && x.is_exact(); });
  if (!exact) {
    const ExtRational known(Rational(coord_precision - 1));
    for (auto& c : z) c = c.truncated(known);
  }
  cp.coordinates = z;
  cp.gradient_valuation = min_val(gradient_at(z));
  cp.hessian = evaluate_matrix(hess, z, cut);
  return cp;
}

HessianDeterminant hessian_det_valuation(const CriticalPoint& cp) {
  NovikovSeries det = cp.hessian.determinant();
  if (det.is_zero()) throw ZeroDeterminant("Hessian determinant vanishes to known precision");
  return {det, det.leading_exponent(), NovikovSeries::monomial(det.leading_coefficient(), det.leading_exponent())};
}

WeylCertificate weyl_certificate(const std::function<Rational(long)>& b_rule, long k_min, long k_max,
                                 const Rational& gamma) {
  if (k_min < 1 || k_max < k_min) throw ConfigError("k range must satisfy 1 <= k_min <= k_max");
  WeylCertificate cert;
  bool all_ok = true;
  for (long k = k_min; k <= k_max; ++k) {
    CertificateRow row;
    row.k = k;
    row.B = b_rule(k);
    row.A = k >= 2 ? Rational((1 - 2 * row.B) / (k - 1)) : Rational(0);
    LinkConfig cfg{k, row.B, row.A, gamma, k >= 2 ? std::optional<Rational>(Rational(1)) : std::nullopt};
    try {
      cfg.validate();
    } catch (const ConfigError& e) {
      row.config_error = e.what();
      all_ok = false;
      cert.rows.push_back(std::move(row));
      continue;
    }
    LaurentPoly w = build_s2_potential(cfg);
    auto points = leading_critical_points(w);
    auto positive = std::find_if(points.begin(), points.end(), [](const std::vector<Rational>& p) {
      return std::all_of(p.begin(), p.end(), [](const Rational& x) { return x > 0; });
    });
    CriticalPoint cp = newton_lift(w, positive != points.end() ? *positive : points.front());
    HessianDeterminant hd = hessian_det_valuation(cp);
    row.critical_point = cp.coordinates;
    row.morse = true;
    row.valuation_law = hd.valuation == k * row.B;
    row.defect_bound = hd.valuation;
    row.ratio = hd.valuation / Rational(k);
    row.hessian = std::move(hd);
    all_ok = all_ok && row.valuation_law;
    cert.rows.push_back(std::move(row));
  }
  bool decreasing = true;
  for (std::size_t i = 0; i + 1 < cert.rows.size(); ++i)
    if (cert.rows[i + 1].B > cert.rows[i].B) decreasing = false;
  if (cert.rows.size() > 1 && !(cert.rows.back().B < cert.rows.front().B)) decreasing = false;
  cert.pass = all_ok && decreasing;
  return cert;
}

// ---------------------------------------------------------------------------
// B_k rules

namespace {

struct RuleValue {
  Rational value;
  bool is_sqrt = false;  // the value is sqrt(value), irrational
};

class RuleParser {
 public:
  RuleParser(std::string_view text, long k) : text_(text), k_(k) {}

  Rational parse() {
    RuleValue v = expr();
    skip();
    if (pos_ != text_.size()) throw ParseError("unexpected character in rule", pos_);
    return plain(v);
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  Rational plain(const RuleValue& v) const {
    if (v.is_sqrt) throw ConfigError("rule produces an irrational value; wrap sqrt in ceil or floor");
    return v.value;
  }

  RuleValue expr() {
    RuleValue v = term();
    while (true) {
      if (accept('+')) v = {plain(v) + plain(term())};
      else if (accept('-')) v = {plain(v) - plain(term())};
      else return v;
    }
  }
  RuleValue term() {
    RuleValue v = unary();
    while (true) {
      if (accept('*')) {
        v = {plain(v) * plain(unary())};
      } else if (accept('/')) {
        Rational d = plain(unary());
        if (d == 0) throw ConfigError("division by zero in rule");
        v = {plain(v) / d};
      } else {
        return v;
      }
    }
  }
  RuleValue unary() {
    if (accept('-')) return {-plain(unary())};
    return primary();
  }
  RuleValue primary() {
    skip();
    if (accept('(')) {
      RuleValue v = expr();
      if (!accept(')')) throw ParseError("expected ')'", pos_);
      return v;
    }
    if (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
      return {parse_rational_at(text_.substr(start, pos_ - start), start)};
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && std::isalpha(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "k") return {Rational(k_)};
    if (name != "ceil" && name != "floor" && name != "sqrt") throw ParseError("unknown name in rule", start);
    if (!accept('(')) throw ParseError("expected '('", pos_);
    RuleValue arg = expr();
    if (!accept(')')) throw ParseError("expected ')'", pos_);
    if (name == "sqrt") {
      Rational x = plain(arg);
      if (x < 0) throw ConfigError("sqrt of a negative value in rule");
      Rational root;
      if (rational_sqrt(x, root)) return {root};
      return {x, true};
    }
    if (arg.is_sqrt) {
      // floor(sqrt(x)) = floor(sqrt(floor(x))); sqrt(x) is not an integer here.
      Integer fl = symfloer::floor(arg.value), s;
      mpz_sqrt(s.get_mpz_t(), fl.get_mpz_t());
      return {Rational(name == "floor" ? s : Integer(s + 1))};
    }
    return {Rational(name == "floor" ? symfloer::floor(arg.value) : symfloer::ceil(arg.value))};
  }

  std::string_view text_;
  long k_;
  std::size_t pos_ = 0;
};

}  // namespace

std::function<Rational(long)> parse_bk_rule(const std::string& text) {
  RuleParser(text, 1).parse();
  return [text](long k) { return RuleParser(text, k).parse(); };
}

}  // namespace symfloer::potential
