#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "symfloer/novikov.hpp"

namespace symfloer::potential {

using Exponent = std::vector<long>;

/// Laurent polynomial in z_1..z_n with Novikov coefficients.
class LaurentPoly {
 public:
  explicit LaurentPoly(std::size_t nvars = 0) : nvars_(nvars) {}

  std::size_t nvars() const { return nvars_; }
  const std::map<Exponent, NovikovSeries>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }

  void add_term(const Exponent& e, const NovikovSeries& c);
  LaurentPoly& operator+=(const LaurentPoly& o);
  friend LaurentPoly operator+(LaurentPoly a, const LaurentPoly& b) { return a += b; }

  // z_j d/dz_j: each monomial is scaled by its j-th exponent.
  LaurentPoly log_derivative(std::size_t j) const;

  // Value at a point with unitary coordinates. Inverses of multi-term
  // coordinates and all intermediate products are cut at T^cut.
  NovikovSeries evaluate(const std::vector<NovikovSeries>& z, const ExtRational& cut) const;

  // Minimum coefficient valuation (+inf for zero).
  ExtRational min_coefficient_valuation() const;

  std::string str() const;

 private:
  std::size_t nvars_;
  std::map<Exponent, NovikovSeries> terms_;
};

/// k circles on S^2 cutting out two discs of area B and k-1 annuli of area A.
struct LinkConfig {
  long k = 1;
  Rational B;
  Rational A;             // unused for k = 1
  Rational gamma{1};      // unit part of the bulk parameter c
  std::optional<Rational> total_area;

  // Throws ConfigError: k >= 1, B > 0, gamma != 0; for k >= 2 also
  // 0 <= A < B and (k-1)A + 2B = total_area when given.
  void validate() const;
};

LaurentPoly build_s2_potential(const LinkConfig& cfg);

std::vector<LaurentPoly> log_gradient(const LaurentPoly& w);
std::vector<std::vector<LaurentPoly>> log_hessian(const LaurentPoly& w);

// Rational points of the torus solving the leading-order logarithmic
// gradient system. Throws NoLeadingCriticalPoint, IrrationalRoots, or
// UnsupportedLeadingSystem (no univariate equation left to solve).
std::vector<std::vector<Rational>> leading_critical_points(const LaurentPoly& w);

struct CriticalPoint {
  std::vector<NovikovSeries> coordinates;
  ExtRational gradient_valuation;  // min valuation of the gradient entries
  Rational target_valuation;
  // Gradient valuation before the first step and after each Newton step.
  std::vector<ExtRational> step_valuations;
  NovikovMatrix hessian;
};

Rational default_target_valuation(const LaurentPoly& w);

// T-adic Newton iteration in logarithmic coordinates from a leading point.
// Throws SingularLeadingHessian and NoConvergence.
CriticalPoint newton_lift(const LaurentPoly& w, const std::vector<Rational>& leading_point,
                          std::optional<Rational> target_valuation = std::nullopt);

struct HessianDeterminant {
  NovikovSeries det;
  Rational valuation;
  NovikovSeries z_leading;  // leading monomial of det
};

// Throws ZeroDeterminant.
HessianDeterminant hessian_det_valuation(const CriticalPoint& cp);

struct CertificateRow {
  long k;
  Rational B;
  Rational A;
  std::optional<std::string> config_error;
  std::vector<NovikovSeries> critical_point;
  std::optional<HessianDeterminant> hessian;
  bool morse = false;
  bool valuation_law = false;  // val(det) == k * B
  std::optional<Rational> defect_bound;
  Rational ratio;  // val(det) / k = B when the law holds
};

struct WeylCertificate {
  std::vector<CertificateRow> rows;
  bool pass = false;
};

// One row per k with A_k = (1 - 2 B_k)/(k - 1) from total area 1. Invalid
// configurations are recorded in the row and fail the verdict. PASS iff every
// row is Morse with val(det Hess) = k B_k and B_k is non-increasing with
// B_last < B_first (a single k passes).
WeylCertificate weyl_certificate(const std::function<Rational(long)>& b_rule, long k_min, long k_max,
                                 const Rational& gamma = 1);

// Evaluates a B_k rule such as "1/ceil(sqrt(k))": rationals, k, + - * /,
// parentheses, ceil, floor, and sqrt (exact, or under ceil/floor).
std::function<Rational(long)> parse_bk_rule(const std::string& text);

}  // namespace symfloer::potential
