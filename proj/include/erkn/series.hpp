#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace erkn {

/// Truncated power series in one variable, c[0] + c[1] d + ... + c[N-1] d^{N-1}.
///
/// Coefficient functions are written as generic callables so the same
/// expression evaluates either a plain double or a series. Feeding the
/// identity series (0, 1, 0, ...) yields the Taylor coefficients at 0 up to
/// rounding, which is what the golden-coefficient tests consume.
template <std::size_t N>
class PowerSeries {
 public:
  static constexpr std::size_t kTerms = N;

  constexpr PowerSeries() : c_{} {}
  constexpr PowerSeries(double constant) : c_{} { c_[0] = constant; }  // NOLINT

  static constexpr PowerSeries variable(double at) {
    PowerSeries s(at);
    if constexpr (N > 1) s.c_[1] = 1.0;
    return s;
  }

  constexpr double& operator[](std::size_t i) { return c_[i]; }
  constexpr double operator[](std::size_t i) const { return c_[i]; }
  constexpr double constant() const { return c_[0]; }
  const std::array<double, N>& coefficients() const { return c_; }

  PowerSeries& operator+=(const PowerSeries& o) {
    for (std::size_t i = 0; i < N; ++i) c_[i] += o.c_[i];
    return *this;
  }
  PowerSeries& operator-=(const PowerSeries& o) {
    for (std::size_t i = 0; i < N; ++i) c_[i] -= o.c_[i];
    return *this;
  }
  PowerSeries& operator*=(double s) {
    for (auto& x : c_) x *= s;
    return *this;
  }
  PowerSeries& operator*=(const PowerSeries& o) {
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; i + j < N; ++j) r[i + j] += c_[i] * o.c_[j];
    c_ = r;
    return *this;
  }
  PowerSeries& operator/=(const PowerSeries& o) {
    // Solve o * r = *this term by term.
    std::array<double, N> r{};
    for (std::size_t i = 0; i < N; ++i) {
      double acc = c_[i];
      for (std::size_t j = 1; j <= i; ++j) acc -= o.c_[j] * r[i - j];
      r[i] = acc / o.c_[0];
    }
    c_ = r;
    return *this;
  }

  friend PowerSeries operator+(PowerSeries a, const PowerSeries& b) { return a += b; }
  friend PowerSeries operator-(PowerSeries a, const PowerSeries& b) { return a -= b; }
  friend PowerSeries operator*(PowerSeries a, const PowerSeries& b) { return a *= b; }
  friend PowerSeries operator/(PowerSeries a, const PowerSeries& b) { return a /= b; }
  friend PowerSeries operator+(PowerSeries a, double b) { a.c_[0] += b; return a; }
  friend PowerSeries operator+(double a, PowerSeries b) { b.c_[0] += a; return b; }
  friend PowerSeries operator-(PowerSeries a, double b) { a.c_[0] -= b; return a; }
  friend PowerSeries operator-(double a, const PowerSeries& b) { return PowerSeries(a) - b; }
  friend PowerSeries operator*(PowerSeries a, double b) { return a *= b; }
  friend PowerSeries operator*(double a, PowerSeries b) { return b *= a; }
  friend PowerSeries operator/(PowerSeries a, double b) { return a *= (1.0 / b); }
  friend PowerSeries operator/(double a, const PowerSeries& b) { return PowerSeries(a) / b; }
  friend PowerSeries operator-(PowerSeries a) { return a *= -1.0; }

 private:
  std::array<double, N> c_;
};

/// Series type used for Taylor extraction of method coefficients.
using Jet = PowerSeries<4>;

/// Value used by guards and finiteness checks.
inline double leading_value(double x) { return x; }
template <std::size_t N>
double leading_value(const PowerSeries<N>& s) { return s.constant(); }

inline bool all_finite(double x) { return std::isfinite(x); }
template <std::size_t N>
bool all_finite(const PowerSeries<N>& s) {
  for (double x : s.coefficients())
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace erkn
