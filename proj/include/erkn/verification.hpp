#pragma once

#include <functional>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "erkn/integrator.hpp"
#include "erkn/problems.hpp"
#include "erkn/tableau.hpp"

namespace erkn {

/// |LHS - RHS| of the symplecticity identities at v:
///   phi0 b_i + v phi1 b_bar_i = d_i phi0(c_i^2 v),            i = 1..s
///   phi0 b_bar_i + c_i d_i phi1(c_i^2 v) = b_i phi1,          i = 1..s
///   b_bar_j b_i = b_bar_i b_j + d_i a_bar_ij,                 j < i
/// in that order (2s + s(s-1)/2 values). Classical tableaux are evaluated at
/// v = 0.
std::vector<double> symplectic_residuals(const MethodTableau& m, double v);

/// One line of an enumerated order-condition set. residual(m, V) returns
/// |LHS(V) - RHS(V)| with any a_bar factor frozen at 0.
struct OrderCondition {
  std::string set_id;
  int line = 0;          // 1-based line within the set
  std::string variant;   // "" for the line as stated, otherwise a tag
  std::string label;
  int remainder_order = 0;  // residual must be O(h^remainder_order)
  bool informational = false;
  std::function<double(const MethodTableau&, double)> residual;

  std::string id() const;
};

/// Condition sets: "order2-1s", "order3-2s", "order4-2s", "order4-3s".
std::vector<OrderCondition> order_conditions(const std::string& set_id);
std::vector<std::string> order_condition_set_ids();
/// Set that applies to a method ("order4-2s" for SERKN2s4 and so on).
std::string order_condition_set_for(const MethodTableau& m);

inline constexpr double kExactZeroResidual = 1e-14;

/// Least-squares slope of log r(h) against log h, r(h) = residual(h^2 omega^2).
/// Returns +infinity when every residual is below kExactZeroResidual. Points
/// at or below that floor are dropped from the fit.
double order_residual_decay(const MethodTableau& m, const OrderCondition& cond, double omega,
                            std::span<const double> h_list);

/// ||J^T Omega J - Omega||_inf for the central-difference Jacobian J of the
/// one-step map at s (step 1e-6 (1 + ||s||_inf)).
double jacobian_symplecticity(const MethodTableau& m, const Problem& prob, const State& s,
                              double h);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace erkn
