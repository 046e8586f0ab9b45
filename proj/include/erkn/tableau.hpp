#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

#include "erkn/matrix.hpp"
#include "erkn/series.hpp"

namespace erkn {

/// Raised when a rational coefficient formula is evaluated where its
/// denominator is numerically zero (|den| < kGuardThreshold).
class GuardError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kGuardThreshold = 1e-10;

/// A scalar analytic function of v = h^2 * lambda, evaluable on doubles and on
/// truncated power series.
class CoefficientFn {
 public:
  CoefficientFn() = default;

  template <class F>
    requires(!std::is_same_v<std::decay_t<F>, CoefficientFn>)
  explicit CoefficientFn(F f) : scalar_(f), series_(f) {}

  static CoefficientFn constant(double value);

  double operator()(double v) const { return scalar_(v); }
  Jet operator()(const Jet& v) const { return series_(v); }

  explicit operator bool() const { return static_cast<bool>(scalar_); }

 private:
  std::function<double(double)> scalar_;
  std::function<Jet(const Jet&)> series_;
};

/// s-stage diagonal implicit ERKN method. Indices are 0-based; a_bar[i][j] is
/// populated for j <= i.
///
/// A `classical` tableau is the frozen V -> 0 limit of an ERKN method. It is
/// applied as a classical RKN method to q'' = -(Mq + grad U(q)), i.e. the
/// linear term is treated as part of the force rather than propagated exactly.
struct MethodTableau {
  std::string name;
  int stages = 0;
  int order = 0;
  Vector c;
  Vector d;
  std::vector<CoefficientFn> b;
  std::vector<CoefficientFn> b_bar;
  std::vector<std::vector<CoefficientFn>> a_bar;
  bool classical = false;
};

enum class OneStageVariant { kPhi0, kBbar };

MethodTableau build_one_stage(OneStageVariant variant);
MethodTableau build_two_stage_order3();
MethodTableau build_two_stage_order4();

/// Three-stage fourth-order family parametrised by (c1, c2); c3 and the
/// weights follow from the fourth-order conditions.
MethodTableau build_three_stage(double c1, double c2, std::string variant_name);

/// Frozen tableau with every coefficient replaced by its value at v = 0.
MethodTableau rkn_limit(const MethodTableau& m);

enum class CoefficientKind { kB, kBbar, kAbar };

/// Uniform scalar access; j is ignored for kB and kBbar.
double coefficient(const MethodTableau& m, CoefficientKind kind, int i, int j, double v);
const CoefficientFn& coefficient_fn(const MethodTableau& m, CoefficientKind kind, int i, int j);

/// Taylor coefficients of f at 0, v^0 .. v^{n_terms-1}, n_terms <= 4.
std::vector<double> taylor_coefficients(const CoefficientFn& f, int n_terms);

/// Registry of named methods:
/// SERKN1s2(1), SERKN1s2(2), SERKN2s3, SERKN2s4, SERKN3s4(1), SERKN3s4(2),
/// RKN1s2, RKN2s3, RKN3s4.
MethodTableau make_method(std::string_view name);
std::vector<std::string> method_names();
std::vector<std::string> serkn_method_names();
bool is_known_method(std::string_view name);

/// Ratio num/den with the denominator guard applied to den's leading value.
template <class T>
T guarded_divide(const T& num, const T& den, const char* what) {
  const double lead = leading_value(den);
  if (!(std::abs(lead) >= kGuardThreshold))
    throw GuardError(std::string("denominator guard tripped in ") + what);
  return num / den;
}

}  // namespace erkn
