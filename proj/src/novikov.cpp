#include "symfloer/novikov.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "symfloer/errors.hpp"

namespace symfloer {

NovikovSeries::NovikovSeries(long c) {
  if (c != 0) terms_.push_back({Rational(0), Rational(c)});
}

NovikovSeries::NovikovSeries(const Rational& c) {
  if (c != 0) terms_.push_back({Rational(0), c});
}

NovikovSeries NovikovSeries::monomial(const Rational& coefficient, const Rational& exponent) {
  NovikovSeries s;
  if (coefficient != 0) s.terms_.push_back({exponent, coefficient});
  return s;
}

NovikovSeries NovikovSeries::from_terms(std::vector<Term> terms, ExtRational truncation) {
  NovikovSeries s;
  s.terms_ = std::move(terms);
  s.truncation_ = std::move(truncation);
  s.normalize();
  return s;
}

NovikovSeries NovikovSeries::zero_mod(const ExtRational& truncation) {
  NovikovSeries s;
  s.truncation_ = truncation;
  return s;
}

void NovikovSeries::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Term& a, const Term& b) { return a.exponent < b.exponent; });
  std::vector<Term> merged;
  merged.reserve(terms_.size());
  for (auto& t : terms_) {
    if (!merged.empty() && merged.back().exponent == t.exponent) {
      merged.back().coefficient += t.coefficient;
    } else {
      merged.push_back(std::move(t));
    }
  }
  std::erase_if(merged, [this](const Term& t) {
    return t.coefficient == 0 || ExtRational(t.exponent) >= truncation_;
  });
  terms_ = std::move(merged);
}

ExtRational NovikovSeries::val() const {
  if (terms_.empty()) return ExtRational::infinity();
  return ExtRational(terms_.front().exponent);
}

ExtRational NovikovSeries::val_lower_bound() const {
  return terms_.empty() ? truncation_ : ExtRational(terms_.front().exponent);
}

const Rational& NovikovSeries::leading_coefficient() const {
  if (terms_.empty()) throw std::logic_error("leading_coefficient of zero series");
  return terms_.front().coefficient;
}

const Rational& NovikovSeries::leading_exponent() const {
  if (terms_.empty()) throw std::logic_error("leading_exponent of zero series");
  return terms_.front().exponent;
}

Rational NovikovSeries::coefficient(const Rational& exponent) const {
  for (const auto& t : terms_) {
    if (t.exponent == exponent) return t.coefficient;
    if (t.exponent > exponent) break;
  }
  return 0;
}

NovikovSeries NovikovSeries::truncated(const ExtRational& t) const {
  NovikovSeries s = *this;
  s.truncation_ = min(truncation_, t);
  std::erase_if(s.terms_, [&](const Term& term) { return ExtRational(term.exponent) >= s.truncation_; });
  return s;
}

NovikovSeries NovikovSeries::as_exact() const {
  NovikovSeries s = *this;
  s.truncation_ = ExtRational::infinity();
  return s;
}

NovikovSeries NovikovSeries::shifted(const Rational& exponent) const {
  NovikovSeries s = *this;
  for (auto& t : s.terms_) t.exponent += exponent;
  if (s.truncation_.is_finite()) s.truncation_ = ExtRational(Rational(s.truncation_.value() + exponent));
  return s;
}

NovikovSeries NovikovSeries::operator-() const {
  NovikovSeries s = *this;
  for (auto& t : s.terms_) t.coefficient = -t.coefficient;
  return s;
}

NovikovSeries& NovikovSeries::operator+=(const NovikovSeries& o) {
  std::vector<Term> out;
  out.reserve(terms_.size() + o.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() || (i < terms_.size() && terms_[i].exponent < o.terms_[j].exponent)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].exponent < terms_[i].exponent) {
      out.push_back(o.terms_[j++]);
    } else {
      Rational c = terms_[i].coefficient + o.terms_[j].coefficient;
      if (c != 0) out.push_back({terms_[i].exponent, c});
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  truncation_ = min(truncation_, o.truncation_);
  std::erase_if(terms_, [this](const Term& t) { return ExtRational(t.exponent) >= truncation_; });
  return *this;
}

NovikovSeries& NovikovSeries::operator-=(const NovikovSeries& o) { return *this += -o; }

NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b) {
  // s = s0 + O(T^ts), t = t0 + O(T^tt): the product is known modulo
  // T^min(val(s0)+tt, val(t0)+ts, ts+tt).
  ExtRational trunc = min(min(a.val() + b.truncation_, b.val() + a.truncation_),
                          a.truncation_ + b.truncation_);
  std::map<Rational, Rational> acc;
  for (const auto& x : a.terms_) {
    for (const auto& y : b.terms_) {
      Rational e = x.exponent + y.exponent;
      if (ExtRational(e) >= trunc) break;
      acc[e] += x.coefficient * y.coefficient;
    }
  }
  NovikovSeries out;
  out.truncation_ = trunc;
  for (auto& [e, c] : acc) {
    if (c != 0) out.terms_.push_back({e, c});
  }
  return out;
}

NovikovSeries& NovikovSeries::operator*=(const NovikovSeries& o) {
  *this = *this * o;
  return *this;
}

NovikovSeries NovikovSeries::scaled(const Rational& c) const {
  if (c == 0) return zero_mod(truncation_.is_infinite() ? truncation_ : truncation_);
  NovikovSeries s = *this;
  for (auto& t : s.terms_) t.coefficient *= c;
  return s;
}

NovikovSeries NovikovSeries::pow(unsigned long n) const {
  NovikovSeries result(1);
  NovikovSeries base = *this;
  while (n > 0) {
    if (n & 1UL) result *= base;
    n >>= 1;
    if (n > 0) base *= base;
  }
  return result;
}

Rational NovikovSeries::default_relative_precision() const {
  Integer g = 1;
  for (const auto& t : terms_) g = lcm(g, t.exponent.get_den());
  if (truncation_.is_finite()) g = lcm(g, truncation_.value().get_den());
  return make_rational(Integer(64), g);
}

namespace {

// Splits s = c T^v (1 + r) and returns 1 + r known modulo T^precision.
NovikovSeries unit_part(const NovikovSeries& s, const Rational& precision) {
  const Rational& v = s.leading_exponent();
  Rational inv_c = 1 / s.leading_coefficient();
  return s.shifted(-v).scaled(inv_c).truncated(ExtRational(precision));
}

Rational relative_precision_for(const NovikovSeries& s, const std::optional<Rational>& requested) {
  if (!s.is_exact()) return s.truncation().value() - s.leading_exponent();
  return requested.value_or(s.default_relative_precision());
}

}  // namespace

NovikovSeries NovikovSeries::invert(std::optional<Rational> relative_precision) const {
  if (is_zero()) throw ZeroInverse("cannot invert a series with no known nonzero term");
  const Rational v = leading_exponent();
  const Rational c = leading_coefficient();
  if (is_exact() && terms_.size() == 1) return monomial(1 / c, -v);

  const Rational precision = relative_precision_for(*this, relative_precision);
  const ExtRational p(precision);
  NovikovSeries r = unit_part(*this, precision) - NovikovSeries(1);
  NovikovSeries w = NovikovSeries(1).truncated(p);
  NovikovSeries term = NovikovSeries(1).truncated(p);
  while (true) {
    term = (-(term * r)).truncated(p);
    if (term.is_zero()) break;
    w += term;
  }
  return w.scaled(1 / c).shifted(-v);
}

NovikovSeries NovikovSeries::sqrt(std::optional<Rational> relative_precision,
                                  std::optional<Rational> exponent_lattice) const {
  if (is_zero()) {
    if (is_exact()) return *this;
    throw NonSquareLeading("leading term unknown below truncation");
  }
  const Rational v = leading_exponent();
  const Rational c = leading_coefficient();
  Rational root_c;
  if (!rational_sqrt(c, root_c)) {
    throw NonSquareLeading("leading coefficient " + to_string(c) + " is not a square in Q");
  }
  const Rational half_v = v / 2;
  if (exponent_lattice) {
    Rational steps = half_v / *exponent_lattice;
    if (!is_integer(steps)) {
      throw OddValuation("val/2 = " + to_string(half_v) + " is not on the lattice " +
                         to_string(*exponent_lattice) + "Z");
    }
  }
  if (is_exact() && terms_.size() == 1) return monomial(root_c, half_v);

  const Rational precision = relative_precision_for(*this, relative_precision);
  const ExtRational p(precision);
  NovikovSeries r = unit_part(*this, precision) - NovikovSeries(1);
  // (1 + r)^(1/2) = sum_n binom(1/2, n) r^n
  NovikovSeries w = NovikovSeries(1).truncated(p);
  NovikovSeries power = NovikovSeries(1).truncated(p);
  Rational binom = 1;
  for (unsigned long n = 1;; ++n) {
    power = (power * r).truncated(p);
    if (power.is_zero()) break;
    binom = binom * (Rational(1, 2) - Rational(n - 1)) / Rational(n);
    w += power.scaled(binom);
  }
  return w.scaled(root_c).shifted(half_v);
}

bool NovikovSeries::is_unitary() const { return !is_zero() && leading_exponent() == 0; }

bool NovikovSeries::in_positive_ideal() const { return val_lower_bound() > ExtRational(0); }

bool NovikovSeries::in_nonnegative() const { return val_lower_bound() >= ExtRational(0); }

bool NovikovSeries::in_periodic_positive(const Rational& generator) const {
  if (generator <= 0) return false;
  for (const auto& t : terms_) {
    Rational m = t.exponent / generator;
    if (!is_integer(m) || m <= 0) return false;
  }
  return in_positive_ideal();
}

namespace {

std::string format_term(const Rational& coefficient_abs, const Rational& exponent) {
  if (exponent == 0) return to_string(coefficient_abs);
  std::string tp = "T^(" + to_string(exponent) + ")";
  if (coefficient_abs == 1) return tp;
  return to_string(coefficient_abs) + "*" + tp;
}

}  // namespace

std::string NovikovSeries::str() const {
  std::string out;
  for (const auto& t : terms_) {
    bool negative = t.coefficient < 0;
    if (out.empty()) {
      if (negative) out += "-";
    } else {
      out += negative ? " - " : " + ";
    }
    out += format_term(abs(t.coefficient), t.exponent);
  }
  if (truncation_.is_finite()) {
    std::string o = "O(T^(" + to_string(truncation_.value()) + "))";
    out = out.empty() ? o : out + " + " + o;
  }
  return out.empty() ? "0" : out;
}

namespace {

class SeriesParser {
 public:
  explicit SeriesParser(std::string_view text) : text_(text) {}

  NovikovSeries parse() {
    std::vector<NovikovSeries::Term> terms;
    ExtRational trunc = ExtRational::infinity();
    skip_ws();
    if (at_end()) throw ParseError("empty series", pos_);
    bool first = true;
    while (!at_end()) {
      bool negative = false;
      if (peek() == '+' || peek() == '-') {
        negative = peek() == '-';
        ++pos_;
        skip_ws();
      } else if (!first) {
        throw ParseError("expected '+' or '-'", pos_);
      }
      first = false;
      if (trunc.is_finite()) throw ParseError("terms after O(...) term", pos_);
      if (peek() == 'O') {
        if (negative) throw ParseError("negated O-term", pos_);
        ++pos_;
        expect('(');
        trunc = ExtRational(parse_t_power());
        expect(')');
      } else {
        terms.push_back(parse_term(negative));
      }
      skip_ws();
    }
    return NovikovSeries::from_terms(std::move(terms), trunc);
  }

 private:
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  void expect(char c) {
    skip_ws();
    if (peek() != c) throw ParseError(std::string("expected '") + c + "'", pos_);
    ++pos_;
    skip_ws();
  }

  Rational parse_unsigned_rational() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError("expected number", pos_);
    std::size_t end = pos_;
    if (peek() == '/') {
      ++pos_;
      std::size_t dstart = pos_;
      while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
      if (pos_ == dstart) throw ParseError("expected denominator", pos_);
      end = pos_;
    }
    return parse_rational_at(text_.substr(start, end - start), start);
  }

  // 'T' [ '^' ( '(' rational ')' | integer ) ]
  Rational parse_t_power() {
    skip_ws();
    if (peek() != 'T') throw ParseError("expected 'T'", pos_);
    ++pos_;
    skip_ws();
    if (peek() != '^') return 1;
    ++pos_;
    skip_ws();
    if (peek() == '(') {
      ++pos_;
      skip_ws();
      std::size_t start = pos_;
      int depth = 0;
      while (!at_end() && !(peek() == ')' && depth == 0)) ++pos_;
      if (at_end()) throw ParseError("unterminated exponent", start);
      Rational e = parse_rational_at(text_.substr(start, pos_ - start), start);
      ++pos_;
      return e;
    }
    bool neg = false;
    if (peek() == '-') {
      neg = true;
      ++pos_;
    }
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
    if (pos_ == start) throw ParseError("expected exponent", pos_);
    Rational e = parse_rational_at(text_.substr(start, pos_ - start), start);
    return neg ? Rational(-e) : e;
  }

  NovikovSeries::Term parse_term(bool negative) {
    Rational coeff = 1;
    Rational exponent = 0;
    if (peek() == 'T') {
      exponent = parse_t_power();
    } else {
      coeff = parse_unsigned_rational();
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        exponent = parse_t_power();
      }
    }
    if (negative) coeff = -coeff;
    return {exponent, coeff};
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

NovikovSeries NovikovSeries::parse(std::string_view text) { return SeriesParser(text).parse(); }

// ---------------------------------------------------------------------------

NovikovMatrix NovikovMatrix::identity(std::size_t n) {
  NovikovMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = NovikovSeries(1);
  return m;
}

NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b) {
  if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
  NovikovMatrix out(a.rows_, b.cols_);
  for (std::size_t i = 0; i < a.rows_; ++i) {
    for (std::size_t k = 0; k < a.cols_; ++k) {
      const auto& aik = a(i, k);
      if (aik.is_zero() && aik.is_exact()) continue;
      for (std::size_t j = 0; j < b.cols_; ++j) out(i, j) += aik * b(k, j);
    }
  }
  return out;
}

std::vector<NovikovSeries> NovikovMatrix::apply(const std::vector<NovikovSeries>& v) const {
  if (v.size() != cols_) throw std::invalid_argument("vector length mismatch");
  std::vector<NovikovSeries> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = 0; j < cols_; ++j) out[i] += (*this)(i, j) * v[j];
  }
  return out;
}

bool NovikovMatrix::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = i + 1; j < cols_; ++j)
      if (!((*this)(i, j) == (*this)(j, i))) return false;
  return true;
}

namespace {

// In-place elimination; returns pivot columns in order and the row
// permutation sign. Rows below each pivot are cleared.
struct Elimination {
  std::vector<std::pair<std::size_t, std::size_t>> pivots;  // (row, col)
  int sign = 1;
  ExtRational residual_bound = ExtRational::infinity();
};

Elimination eliminate(NovikovMatrix& m, std::vector<NovikovSeries>* rhs,
                      const std::optional<Rational>& precision) {
  Elimination e;
  std::size_t row = 0;
  for (std::size_t col = 0; col < m.cols() && row < m.rows(); ++col) {
    std::optional<std::size_t> best;
    for (std::size_t r = row; r < m.rows(); ++r) {
      if (m(r, col).is_zero()) continue;
      if (!best || m(r, col).val() < m(*best, col).val()) best = r;
    }
    if (!best) {
      for (std::size_t r = row; r < m.rows(); ++r)
        e.residual_bound = min(e.residual_bound, m(r, col).val_lower_bound());
      continue;
    }
    if (*best != row) {
      for (std::size_t c = 0; c < m.cols(); ++c) std::swap(m(row, c), m(*best, c));
      if (rhs) std::swap((*rhs)[row], (*rhs)[*best]);
      e.sign = -e.sign;
    }
    NovikovSeries inv = m(row, col).invert(precision);
    for (std::size_t r = row + 1; r < m.rows(); ++r) {
      if (m(r, col).is_zero() && m(r, col).is_exact()) continue;
      NovikovSeries factor = m(r, col) * inv;
      for (std::size_t c = col; c < m.cols(); ++c) m(r, c) -= factor * m(row, c);
      m(r, col) = NovikovSeries();
      if (rhs) (*rhs)[r] -= factor * (*rhs)[row];
    }
    e.pivots.emplace_back(row, col);
    ++row;
  }
  return e;
}

}  // namespace

NovikovSeries NovikovMatrix::determinant(std::optional<Rational> relative_precision) const {
  if (rows_ != cols_) throw std::invalid_argument("determinant of non-square matrix");
  if (rows_ == 0) return NovikovSeries(1);
  NovikovMatrix m = *this;
  Elimination e = eliminate(m, nullptr, relative_precision);
  NovikovSeries det(e.sign);
  for (auto [r, c] : e.pivots) det *= m(r, c);
  if (e.pivots.size() < rows_) {
    return NovikovSeries::zero_mod(det.val_lower_bound() + e.residual_bound);
  }
  return det;
}

std::size_t NovikovMatrix::rank(std::optional<Rational> relative_precision) const {
  NovikovMatrix m = *this;
  return eliminate(m, nullptr, relative_precision).pivots.size();
}

std::vector<NovikovSeries> NovikovMatrix::solve(std::vector<NovikovSeries> b,
                                                std::optional<Rational> relative_precision) const {
  if (rows_ != cols_ || b.size() != rows_) throw std::invalid_argument("solve shape mismatch");
  NovikovMatrix m = *this;
  Elimination e = eliminate(m, &b, relative_precision);
  if (e.pivots.size() < rows_) throw ZeroDeterminant("matrix is singular to known precision");
  std::vector<NovikovSeries> x(rows_);
  for (std::size_t i = rows_; i-- > 0;) {
    NovikovSeries acc = b[i];
    for (std::size_t j = i + 1; j < cols_; ++j) acc -= m(i, j) * x[j];
    x[i] = acc * m(i, i).invert(relative_precision);
  }
  return x;
}

std::vector<NovikovSeries> NovikovMatrix::characteristic_polynomial() const {
  if (rows_ != cols_) throw std::invalid_argument("characteristic polynomial of non-square matrix");
  const std::size_t n = rows_;
  std::vector<NovikovSeries> coeffs(n + 1);
  coeffs[n] = NovikovSeries(1);
  NovikovMatrix mk(n, n);  // M_0 = 0
  for (std::size_t k = 1; k <= n; ++k) {
    NovikovMatrix next = (*this) * mk;
    for (std::size_t i = 0; i < n; ++i) next(i, i) += coeffs[n - k + 1];
    mk = std::move(next);
    NovikovMatrix am = (*this) * mk;
    NovikovSeries trace;
    for (std::size_t i = 0; i < n; ++i) trace += am(i, i);
    coeffs[n - k] = trace.scaled(Rational(-1, static_cast<long>(k)));
  }
  return coeffs;
}

}  // namespace symfloer
