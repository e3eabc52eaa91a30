#include "symfloer/rational.hpp"

#include <cctype>
#include <stdexcept>

#include "symfloer/errors.hpp"

namespace symfloer {

Rational make_rational(long num, long den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

Rational make_rational(const Integer& num, const Integer& den) {
  if (den == 0) throw std::domain_error("zero denominator");
  Rational r(num, den);
  r.canonicalize();
  return r;
}

namespace {

bool parse_integer(std::string_view text, std::size_t& pos, Integer& out) {
  std::size_t start = pos;
  while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) ++pos;
  if (pos == start) return false;
  out = Integer(std::string(text.substr(start, pos - start)));
  return true;
}

void skip_ws(std::string_view text, std::size_t& pos) {
  while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
}

}  // namespace

Rational parse_rational_at(std::string_view text, std::size_t offset) {
  std::size_t pos = 0;
  skip_ws(text, pos);
  bool negative = false;
  if (pos < text.size() && (text[pos] == '-' || text[pos] == '+')) {
    negative = text[pos] == '-';
    ++pos;
    skip_ws(text, pos);
  }
  Integer num;
  if (!parse_integer(text, pos, num)) throw ParseError("expected integer", offset + pos);
  Integer den = 1;
  skip_ws(text, pos);
  if (pos < text.size() && text[pos] == '/') {
    ++pos;
    skip_ws(text, pos);
    if (!parse_integer(text, pos, den)) throw ParseError("expected denominator", offset + pos);
    if (den == 0) throw ParseError("zero denominator", offset + pos - 1);
  }
  skip_ws(text, pos);
  if (pos != text.size()) throw ParseError("unexpected character", offset + pos);
  Rational r(negative ? Integer(-num) : num, den);
  r.canonicalize();
  return r;
}

Rational parse_rational(std::string_view text) { return parse_rational_at(text, 0); }

std::string to_string(const Rational& r) {
  if (r.get_den() == 1) return r.get_num().get_str();
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

bool is_integer(const Rational& r) { return r.get_den() == 1; }

Integer floor(const Rational& r) {
  Integer q;
  mpz_fdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Integer ceil(const Rational& r) {
  Integer q;
  mpz_cdiv_q(q.get_mpz_t(), r.get_num_mpz_t(), r.get_den_mpz_t());
  return q;
}

Rational abs(const Rational& r) { return r < 0 ? Rational(-r) : r; }

Integer lcm(const Integer& a, const Integer& b) {
  Integer out;
  mpz_lcm(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer gcd(const Integer& a, const Integer& b) {
  Integer out;
  mpz_gcd(out.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return out;
}

Integer factorial(unsigned long n) {
  Integer out;
  mpz_fac_ui(out.get_mpz_t(), n);
  return out;
}

Integer binomial(unsigned long n, unsigned long k) {
  Integer out;
  mpz_bin_uiui(out.get_mpz_t(), n, k);
  return out;
}

bool rational_sqrt(const Rational& r, Rational& root) {
  if (r < 0) return false;
  if (mpz_perfect_square_p(r.get_num_mpz_t()) == 0 ||
      mpz_perfect_square_p(r.get_den_mpz_t()) == 0)
    return false;
  Integer n, d;
  mpz_sqrt(n.get_mpz_t(), r.get_num_mpz_t());
  mpz_sqrt(d.get_mpz_t(), r.get_den_mpz_t());
  root = make_rational(n, d);
  return true;
}

const Rational& ExtRational::value() const {
  if (infinite_) throw std::logic_error("value() of infinite ExtRational");
  return value_;
}

bool operator==(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return a.infinite_ == b.infinite_;
  return a.value_ == b.value_;
}

std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ && b.infinite_) return std::strong_ordering::equal;
  if (a.infinite_) return std::strong_ordering::greater;
  if (b.infinite_) return std::strong_ordering::less;
  int c = cmp(a.value_, b.value_);
  if (c < 0) return std::strong_ordering::less;
  if (c > 0) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExtRational operator+(const ExtRational& a, const ExtRational& b) {
  if (a.infinite_ || b.infinite_) return ExtRational::infinity();
  return ExtRational(Rational(a.value_ + b.value_));
}

ExtRational operator-(const ExtRational& a, const Rational& b) {
  if (a.infinite_) return a;
  return ExtRational(Rational(a.value_ - b));
}

std::string ExtRational::str() const { return infinite_ ? "inf" : to_string(value_); }

ExtRational min(const ExtRational& a, const ExtRational& b) { return a <= b ? a : b; }
ExtRational max(const ExtRational& a, const ExtRational& b) { return a >= b ? a : b; }

}  // namespace symfloer
