#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "symfloer/rational.hpp"

namespace symfloer {

/// An element of the one-variable universal Novikov field over Q with
/// rational exponents, known modulo T^truncation.
///
/// Terms are (exponent, coefficient) pairs with strictly increasing exponents,
/// nonzero coefficients and every exponent below the truncation. A series with
/// truncation +inf is exact. Canonical form is maintained eagerly, so
/// operator== is structural equality (terms and truncation).
class NovikovSeries {
 public:
  struct Term {
    Rational exponent;
    Rational coefficient;
    friend bool operator==(const Term&, const Term&) = default;
  };

  NovikovSeries() = default;
  NovikovSeries(long c);  // NOLINT: integers embed as constants
  NovikovSeries(const Rational& c);  // NOLINT

  static NovikovSeries monomial(const Rational& coefficient, const Rational& exponent);
  static NovikovSeries T(const Rational& exponent) { return monomial(1, exponent); }
  // Terms in any order; equal exponents are merged and zeros dropped.
  static NovikovSeries from_terms(std::vector<Term> terms,
                                  ExtRational truncation = ExtRational::infinity());
  // The zero series known only modulo T^truncation.
  static NovikovSeries zero_mod(const ExtRational& truncation);

  const std::vector<Term>& terms() const { return terms_; }
  const ExtRational& truncation() const { return truncation_; }
  bool is_exact() const { return truncation_.is_infinite(); }
  // No nonzero term is known. A truncated zero is "zero to known precision".
  bool is_zero() const { return terms_.empty(); }

  // Least exponent of a nonzero term, +inf when no term is known.
  ExtRational val() const;
  // Lower bound for the valuation of the true element: val() or truncation.
  ExtRational val_lower_bound() const;
  // Precondition: !is_zero().
  const Rational& leading_coefficient() const;
  const Rational& leading_exponent() const;
  // Coefficient of T^exponent (0 when absent; must be below truncation).
  Rational coefficient(const Rational& exponent) const;

  // Drops every term at or above t and lowers the truncation to min(trunc, t).
  NovikovSeries truncated(const ExtRational& t) const;
  // Forgets the truncation: the known terms are taken as an exact element.
  NovikovSeries as_exact() const;
  NovikovSeries shifted(const Rational& exponent) const;  // multiply by T^exponent

  NovikovSeries operator-() const;
  NovikovSeries& operator+=(const NovikovSeries& o);
  NovikovSeries& operator-=(const NovikovSeries& o);
  NovikovSeries& operator*=(const NovikovSeries& o);
  friend NovikovSeries operator+(NovikovSeries a, const NovikovSeries& b) { return a += b; }
  friend NovikovSeries operator-(NovikovSeries a, const NovikovSeries& b) { return a -= b; }
  friend NovikovSeries operator*(const NovikovSeries& a, const NovikovSeries& b);
  NovikovSeries scaled(const Rational& c) const;
  NovikovSeries pow(unsigned long n) const;

  // Multiplicative inverse. For a truncated input the result is known modulo
  // T^(trunc - 2 val). An exact input with several terms has an infinite
  // inverse; it is cut at relative precision `relative_precision` (default:
  // default_relative_precision()). Throws ZeroInverse.
  NovikovSeries invert(std::optional<Rational> relative_precision = std::nullopt) const;
  // Square root with positive leading coefficient. Throws NonSquareLeading,
  // and OddValuation when an exponent lattice is given and val/2 is off it.
  NovikovSeries sqrt(std::optional<Rational> relative_precision = std::nullopt,
                     std::optional<Rational> exponent_lattice = std::nullopt) const;

  // 64 steps of the exponent grid 1/g, g = lcm of the exponent denominators.
  Rational default_relative_precision() const;

  bool is_unitary() const;          // val == 0 (U_Lambda)
  bool in_positive_ideal() const;   // val > 0 or zero (Lambda_{>0})
  bool in_nonnegative() const;      // val >= 0 or zero (Lambda_{>=0})
  // Lambda^{per}_{>0}: val > 0 and every exponent is a positive integer
  // multiple of `generator`.
  bool in_periodic_positive(const Rational& generator) const;

  // Canonical text, e.g. "3*T^(1/2) - 2*T^(2)"; truncated series end with
  // " + O(T^(t))".
  std::string str() const;
  static NovikovSeries parse(std::string_view text);

  friend bool operator==(const NovikovSeries&, const NovikovSeries&) = default;

 private:
  void normalize();

  std::vector<Term> terms_;
  ExtRational truncation_ = ExtRational::infinity();
};

/// Dense matrices over the Novikov field. Pivots are chosen by minimal
/// valuation, so elimination never divides by an element known only to be
/// "zero modulo truncation".
class NovikovMatrix {
 public:
  NovikovMatrix() = default;
  NovikovMatrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols) {}
  static NovikovMatrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  NovikovSeries& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const NovikovSeries& operator()(std::size_t r, std::size_t c) const {
    return data_[r * cols_ + c];
  }

  friend NovikovMatrix operator*(const NovikovMatrix& a, const NovikovMatrix& b);
  std::vector<NovikovSeries> apply(const std::vector<NovikovSeries>& v) const;
  bool is_symmetric() const;
  friend bool operator==(const NovikovMatrix&, const NovikovMatrix&) = default;

  NovikovSeries determinant(std::optional<Rational> relative_precision = std::nullopt) const;
  std::size_t rank(std::optional<Rational> relative_precision = std::nullopt) const;
  // Solves A x = b for square invertible A. Throws ZeroDeterminant when no
  // usable pivot remains.
  std::vector<NovikovSeries> solve(std::vector<NovikovSeries> b,
                                   std::optional<Rational> relative_precision = std::nullopt) const;
  // Coefficients of det(x I - A), lowest degree first (Faddeev-LeVerrier).
  std::vector<NovikovSeries> characteristic_polynomial() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<NovikovSeries> data_;
};

}  // namespace symfloer
