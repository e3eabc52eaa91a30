#include "symfloer/rational_poly.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace symfloer {

namespace {

std::vector<Integer> divisors(Integer n) {
  if (n < 0) n = -n;
  if (n > Integer("100000000000000"))
    throw std::invalid_argument("rational_roots: coefficient too large for divisor search");
  std::vector<Integer> small, large;
  for (Integer d = 1; d * d <= n; ++d) {
    if (n % d == 0) {
      small.push_back(d);
      if (d * d != n) large.push_back(n / d);
    }
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

Rational eval(const std::vector<Rational>& poly, const Rational& x) {
  Rational acc = 0;
  for (std::size_t i = poly.size(); i-- > 0;) acc = acc * x + poly[i];
  return acc;
}

// Quotient by (x - r) when r is a root.
void deflate(std::vector<Rational>& poly, const Rational& r) {
  std::vector<Rational> q(poly.size() - 1);
  Rational carry = 0;
  for (std::size_t i = poly.size(); i-- > 1;) {
    carry = poly[i] + carry * r;
    q[i - 1] = carry;
  }
  poly = std::move(q);
}

}  // namespace

RationalRoots rational_roots(std::vector<Rational> c) {
  while (!c.empty() && c.back() == 0) c.pop_back();
  if (c.empty()) throw std::invalid_argument("rational_roots: zero polynomial");
  RationalRoots out;
  std::size_t low = 0;
  while (c[low] == 0) ++low;
  if (low > 0) {
    out.has_zero_root = true;
    c.erase(c.begin(), c.begin() + static_cast<std::ptrdiff_t>(low));
  }
  while (c.size() > 1) {
    Integer den = 1;
    for (const auto& x : c) den = lcm(den, x.get_den());
    Integer a0 = Integer(c.front() * den), an = Integer(c.back() * den);
    std::optional<Rational> found;
    for (const auto& p : divisors(a0)) {
      for (const auto& q : divisors(an)) {
        for (int sign : {1, -1}) {
          Rational r = make_rational(Integer(sign * p), q);
          if (eval(c, r) == 0) {
            found = r;
            break;
          }
        }
        if (found) break;
      }
      if (found) break;
    }
    if (!found) break;
    deflate(c, *found);
    auto it = std::find_if(out.roots.begin(), out.roots.end(),
                           [&](const auto& e) { return e.first == *found; });
    if (it == out.roots.end()) out.roots.emplace_back(*found, 1);
    else ++it->second;
  }
  out.remaining_degree = c.size() - 1;
  return out;
}

}  // namespace symfloer
