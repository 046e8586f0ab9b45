#pragma once

#include <cstddef>
#include <stdexcept>

#include "erkn/series.hpp"

namespace erkn {

/// The entire functions phi_j(v) = sum_k (-1)^k v^k / (2k+j)!, so that
/// phi_0(v) = cos(sqrt v) and phi_1(v) = sin(sqrt v)/sqrt v.
///
/// Below kPhiCrossover the truncated series is summed directly; above it the
/// closed forms for phi_0, phi_1 are combined with the recurrence
/// phi_{j+2}(v) = (1/j! - phi_j(v)) / v.
inline constexpr int kPhiMaxIndex = 6;
inline constexpr double kPhiCrossover = 4.0;
inline constexpr int kPhiSeriesTerms = 12;

/// Throws std::invalid_argument for j outside 0..6 and std::domain_error for
/// v < 0 or NaN.
double phi(int j, double v);

/// phi_j evaluated on a truncated power series argument. The expansion point
/// (constant term) must lie in [0, 16]; higher indices are allowed here since
/// derivatives of phi_j involve phi_{j+2m}.
template <std::size_t N>
PowerSeries<N> phi(int j, const PowerSeries<N>& x);

/// 1/n! for n up to detail::kMaxFactorial.
double inverse_factorial(int n);

namespace detail {

inline constexpr int kMaxFactorial = 170;

double phi_series(int j, double v, int terms);
double phi_closed_form(int j, double v);

/// m-th Taylor coefficient phi_j^{(m)}(x0)/m!, by direct summation.
double phi_taylor_coefficient(int j, int m, double x0);

}  // namespace detail

template <std::size_t N>
PowerSeries<N> phi(int j, const PowerSeries<N>& x) {
  if (j < 0) throw std::invalid_argument("phi: negative index");
  const double x0 = x.constant();
  if (!(x0 >= 0.0) || x0 > 16.0)
    throw std::domain_error("phi: series expansion point outside [0, 16]");
  PowerSeries<N> delta = x - x0;
  PowerSeries<N> result(detail::phi_taylor_coefficient(j, 0, x0));
  PowerSeries<N> power(1.0);
  for (std::size_t m = 1; m < N; ++m) {
    power *= delta;
    result += power * detail::phi_taylor_coefficient(j, static_cast<int>(m), x0);
  }
  return result;
}

}  // namespace erkn
