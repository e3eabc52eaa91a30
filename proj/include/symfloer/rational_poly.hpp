#pragma once

#include <vector>

#include "symfloer/rational.hpp"

namespace symfloer {

struct RationalRoots {
  // Distinct nonzero rational roots with multiplicities, in discovery order.
  std::vector<std::pair<Rational, int>> roots;
  // Degree of the cofactor with no rational root (0 when the polynomial
  // splits over Q).
  std::size_t remaining_degree = 0;
  bool has_zero_root = false;
};

// Rational roots of sum c_i x^i (lowest degree first) by the rational root
// theorem. A zero root is reported through has_zero_root only. Throws
// std::invalid_argument for the zero polynomial.
RationalRoots rational_roots(std::vector<Rational> coefficients);

}  // namespace symfloer
