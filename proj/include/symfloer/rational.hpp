#pragma once

#include <gmpxx.h>

#include <compare>
#include <string>
#include <string_view>

namespace symfloer {

using Integer = mpz_class;
using Rational = mpq_class;

// Builds a canonical rational num/den. Throws std::domain_error on den == 0.
Rational make_rational(long num, long den = 1);
Rational make_rational(const Integer& num, const Integer& den);

// Accepts "p", "-p", "p/q" with optional surrounding whitespace.
Rational parse_rational(std::string_view text);
// Like parse_rational, but reports the failing offset through ParseError.
Rational parse_rational_at(std::string_view text, std::size_t offset);

// "p" for integers, otherwise "p/q" in lowest terms.
std::string to_string(const Rational& r);

bool is_integer(const Rational& r);
Integer floor(const Rational& r);
Integer ceil(const Rational& r);
Rational abs(const Rational& r);
Integer lcm(const Integer& a, const Integer& b);
Integer gcd(const Integer& a, const Integer& b);
Integer factorial(unsigned long n);
Integer binomial(unsigned long n, unsigned long k);

// Exact square root of a non-negative rational, if one exists in Q.
bool rational_sqrt(const Rational& r, Rational& root);

// A rational or +infinity. Used for valuations (val(0) = +inf) and for the
// truncation order of Novikov series (exact series have truncation +inf).
class ExtRational {
 public:
  ExtRational() : infinite_(true) {}
  ExtRational(Rational v) : infinite_(false), value_(std::move(v)) {}  // NOLINT
  ExtRational(long v) : infinite_(false), value_(v) {}                 // NOLINT
  static ExtRational infinity() { return ExtRational(); }

  bool is_infinite() const { return infinite_; }
  bool is_finite() const { return !infinite_; }
  // Precondition: finite.
  const Rational& value() const;

  friend bool operator==(const ExtRational& a, const ExtRational& b);
  friend std::strong_ordering operator<=>(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator+(const ExtRational& a, const ExtRational& b);
  friend ExtRational operator-(const ExtRational& a, const Rational& b);

  std::string str() const;

 private:
  bool infinite_;
  Rational value_;
};

ExtRational min(const ExtRational& a, const ExtRational& b);
ExtRational max(const ExtRational& a, const ExtRational& b);

}  // namespace symfloer
