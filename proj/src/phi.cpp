#include "erkn/phi.hpp"

#include <array>
#include <cmath>
#include <string>

namespace erkn {

namespace {

const std::array<double, detail::kMaxFactorial + 1>& inverse_factorials() {
  static const auto table = [] {
    std::array<double, detail::kMaxFactorial + 1> t{};
    double f = 1.0;
    t[0] = 1.0;
    for (int n = 1; n <= detail::kMaxFactorial; ++n) {
      f *= n;
      t[n] = 1.0 / f;
    }
    return t;
  }();
  return table;
}

}  // namespace

double inverse_factorial(int n) {
  if (n < 0 || n > detail::kMaxFactorial)
    throw std::out_of_range("inverse_factorial: n = " + std::to_string(n));
  return inverse_factorials()[n];
}

namespace detail {

double phi_series(int j, double v, int terms) {
  // Horner on sum_{k<terms} (-v)^k / (2k+j)!
  double acc = 0.0;
  for (int k = terms - 1; k >= 0; --k) acc = acc * (-v) + inverse_factorial(2 * k + j);
  return acc;
}

double phi_closed_form(int j, double v) {
  const double theta = std::sqrt(v);
  double even = std::cos(theta);
  double odd = std::sin(theta) / theta;
  if (j == 0) return even;
  if (j == 1) return odd;
  // Walk up each parity chain to j.
  double cur = (j % 2 == 0) ? even : odd;
  for (int i = j % 2; i + 2 <= j; i += 2) cur = (inverse_factorial(i) - cur) / v;
  return cur;
}

double phi_taylor_coefficient(int j, int m, double x0) {
  if (x0 == 0.0) return (m % 2 == 0 ? 1.0 : -1.0) * inverse_factorial(2 * m + j);
  // sum_{k>=m} (-1)^k C(k,m) x0^{k-m} / (2k+j)!
  double sum = 0.0;
  double binom = 1.0;  // C(k, m) at k = m
  double power = 1.0;  // x0^{k-m}
  for (int k = m; 2 * k + j <= kMaxFactorial; ++k) {
    const double term = binom * power * inverse_factorial(2 * k + j);
    sum += (k % 2 == 0) ? term : -term;
    if (k > m + 4 && std::abs(term) < 1e-18 * std::abs(sum)) break;
    binom = binom * (k + 1) / (k + 1 - m);
    power *= x0;
  }
  return sum;
}

}  // namespace detail

double phi(int j, double v) {
  if (j < 0 || j > kPhiMaxIndex)
    throw std::invalid_argument("phi: index " + std::to_string(j) + " outside 0.." +
                                std::to_string(kPhiMaxIndex));
  if (!(v >= 0.0)) throw std::domain_error("phi: argument must be nonnegative");
  if (v < kPhiCrossover) return detail::phi_series(j, v, kPhiSeriesTerms);
  return detail::phi_closed_form(j, v);
}

}  // namespace erkn
