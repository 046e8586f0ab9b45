#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <limits>
#include <random>

#include "doctest.h"
#include "erkn/phi.hpp"
#include "erkn/verification.hpp"

using erkn::make_method;

namespace {

// Residuals recomputed in long double from the same coefficient values.
std::vector<long double> extended_residuals(const erkn::MethodTableau& m, double v) {
  auto phi_ld = [](int j, long double x) {
    long double sum = 0, term = 1;
    for (int k = 1; k <= j; ++k) term /= k;
    for (int k = 0; k < 40; ++k) {
      sum += term;
      term *= -x / ((2.0L * k + j + 1) * (2.0L * k + j + 2));
    }
    return sum;
  };
  std::vector<long double> out;
  const int s = m.stages;
  for (int i = 0; i < s; ++i) {
    const long double c = m.c[i];
    out.push_back(std::fabs(phi_ld(0, v) * m.b[i](v) + v * phi_ld(1, v) * m.b_bar[i](v) -
                            m.d[i] * phi_ld(0, c * c * v)));
  }
  for (int i = 0; i < s; ++i) {
    const long double c = m.c[i];
    out.push_back(std::fabs(phi_ld(0, v) * m.b_bar[i](v) + c * m.d[i] * phi_ld(1, c * c * v) -
                            m.b[i](v) * phi_ld(1, v)));
  }
  for (int i = 1; i < s; ++i)
    for (int j = 0; j < i; ++j)
      out.push_back(std::fabs((long double)m.b_bar[j](v) * m.b[i](v) -
                              (long double)m.b_bar[i](v) * m.b[j](v) -
                              (long double)m.d[i] * m.a_bar[i][j](v)));
  return out;
}

}  // namespace

TEST_CASE("verification: symplectic residuals of every method") {
  for (const auto& name : erkn::method_names()) {
    const auto m = make_method(name);
    for (double v : {0.0, 0.1, 1.0, 10.0, 100.0, 400.0}) {
      const auto r = erkn::symplectic_residuals(m, v);
      CHECK(r.size() == static_cast<std::size_t>(2 * m.stages + m.stages * (m.stages - 1) / 2));
      for (double x : r) CHECK_MESSAGE(x < 1e-12, name << " v=" << v << " residual " << x);
    }
  }
  for (double x : erkn::symplectic_residuals(make_method("SERKN1s2(1)"), 0.0)) CHECK(x <= 1e-15);
  const auto m = make_method("SERKN2s4");
  const auto ext = extended_residuals(m, 10.0);
  CHECK(ext.size() == 5);
  for (auto x : ext) CHECK(x < 1e-12L);
  CHECK_THROWS_AS(erkn::symplectic_residuals(m, -1.0), std::domain_error);
}

TEST_CASE("verification: perturbed coefficients are detected") {
  const double v = 1.0;
  auto m = make_method("SERKN2s4");
  const auto b1 = m.b[0];
  m.b[0] = erkn::CoefficientFn([b1](const auto& x) { return b1(x) * (1.0 + 1e-3); });
  const auto r = erkn::symplectic_residuals(m, v);
  CHECK(r[0] == doctest::Approx(1e-3 * std::abs(erkn::phi(0, v) * b1(v))).epsilon(1e-6));

  for (const auto& name : erkn::serkn_method_names()) {
    const auto base = make_method(name);
    auto perturb = [](erkn::CoefficientFn f) {
      return erkn::CoefficientFn([f](const auto& x) { return f(x) * (1.0 + 1e-6); });
    };
    for (int i = 0; i < base.stages; ++i) {
      auto mb = base;
      mb.b[i] = perturb(base.b[i]);
      auto mbb = base;
      mbb.b_bar[i] = perturb(base.b_bar[i]);
      for (const auto* pm : {&mb, &mbb}) {
        double worst = 0.0;
        for (double x : erkn::symplectic_residuals(*pm, v)) worst = std::max(worst, x);
        CHECK(worst > 1e-8);
      }
      for (int j = 0; j < i; ++j) {
        auto ma = base;
        ma.a_bar[i][j] = perturb(base.a_bar[i][j]);
        double worst = 0.0;
        for (double x : erkn::symplectic_residuals(ma, v)) worst = std::max(worst, x);
        CHECK(worst > 1e-8);
      }
    }
  }
}

TEST_CASE("verification: condition sets") {
  CHECK(erkn::order_conditions("order2-1s").size() == 3);
  CHECK(erkn::order_conditions("order3-2s").size() == 6);
  CHECK(erkn::order_conditions("order4-2s").size() == 12);
  CHECK(erkn::order_conditions("order4-3s").size() == 11);
  CHECK_THROWS_AS(erkn::order_conditions("order5-3s"), std::invalid_argument);
  CHECK(erkn::order_condition_set_for(make_method("SERKN2s3")) == "order3-2s");
  CHECK(erkn::order_condition_set_for(make_method("SERKN3s4(2)")) == "order4-3s");
  int informational = 0;
  for (const auto& c : erkn::order_conditions("order4-2s")) informational += c.informational;
  CHECK(informational == 1);
}

TEST_CASE("verification: order residual decay") {
  const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
  for (const auto& name : erkn::serkn_method_names()) {
    const auto m = make_method(name);
    for (const auto& c : erkn::order_conditions(erkn::order_condition_set_for(m))) {
      if (c.informational) continue;
      const double slope = erkn::order_residual_decay(m, c, 2.0, hs);
      CHECK_MESSAGE(slope >= c.remainder_order - 0.1, name << " " << c.id() << " slope " << slope);
      // At V = 0 every enforced condition holds exactly.
      CHECK(c.residual(m, 0.0) < 1e-15);
    }
  }
  // The eighth line of the two-stage fourth-order set as stated does not hold at V = 0.
  const auto m = make_method("SERKN2s4");
  const auto set = erkn::order_conditions("order4-2s");
  CHECK(set[7].residual(m, 0.0) == doctest::Approx(1.0 / 6 - 1.0 / 24));
  CHECK(erkn::order_residual_decay(m, set[7], 2.0, hs) < 0.5);
}

TEST_CASE("verification: decay edge cases") {
  erkn::OrderCondition zero{"x", 1, "", "zero", 3, false,
                            [](const erkn::MethodTableau&, double) { return 0.0; }};
  const auto m = make_method("SERKN1s2(1)");
  const std::vector<double> hs{0.4, 0.2, 0.1, 0.05};
  CHECK(erkn::order_residual_decay(m, zero, 2.0, hs) == std::numeric_limits<double>::infinity());
  erkn::OrderCondition quad{"x", 1, "", "h^2", 2, false,
                            [](const erkn::MethodTableau&, double v) { return 3.0 * v; }};
  CHECK(erkn::order_residual_decay(m, quad, 2.0, hs) == doctest::Approx(2.0).epsilon(1e-12));
  const std::vector<double> inc{0.05, 0.1, 0.2, 0.4};
  CHECK_THROWS_AS(erkn::order_residual_decay(m, quad, 2.0, inc), std::invalid_argument);
  const std::vector<double> three{0.4, 0.2, 0.1};
  CHECK_THROWS_AS(erkn::order_residual_decay(m, quad, 2.0, three), std::invalid_argument);
  erkn::OrderCondition bad{"x", 1, "", "nan", 2, false, [](const erkn::MethodTableau&, double) {
                             return std::numeric_limits<double>::quiet_NaN();
                           }};
  CHECK_THROWS_AS(erkn::order_residual_decay(m, bad, 2.0, hs), std::domain_error);
}

TEST_CASE("verification: Jacobian symplecticity") {
  {
    erkn::Problem p;
    p.dim = 1;
    p.m = erkn::Matrix{{9.0}};
    p.grad_u = [](std::span<const double>, std::span<double> out) { out[0] = 0.0; };
    p.potential = [](std::span<const double>) { return 0.0; };
    for (const auto& name : erkn::serkn_method_names())
      CHECK(erkn::jacobian_symplecticity(make_method(name), p, {0, {0.5}, {1.0}}, 0.1) <= 1e-10);
  }
  const auto stellar = erkn::make_stellar();
  CHECK(erkn::jacobian_symplecticity(make_method("SERKN3s4(1)"), stellar, stellar.initial, 0.1) <=
        1e-6);
  const auto duffing = erkn::make_duffing(0.03);
  CHECK(erkn::jacobian_symplecticity(make_method("RKN2s3"), duffing, duffing.initial, 1.0 / 20) <=
        1e-6);

  // Linear problems: invariant under rescaling the state.
  erkn::Problem lin;
  lin.dim = 2;
  lin.m = erkn::Matrix::diagonal(erkn::Vector{1.0, 4.0});
  lin.grad_u = [](std::span<const double> q, std::span<double> out) {
    out[0] = 0.3 * q[1];
    out[1] = 0.3 * q[0];
  };
  lin.potential = [](std::span<const double> q) { return 0.3 * q[0] * q[1]; };
  const erkn::State s{0, {0.4, -0.2}, {0.1, 0.3}};
  const erkn::State s2{0, {0.8, -0.4}, {0.2, 0.6}};
  const auto m = make_method("SERKN2s4");
  const double a = erkn::jacobian_symplecticity(m, lin, s, 0.1);
  const double b = erkn::jacobian_symplecticity(m, lin, s2, 0.1);
  CHECK(a <= 1e-6);
  CHECK(b <= 1e-6);
  CHECK(std::max(a, b) <= 2.0 * std::max(std::min(a, b), 1e-9));
}

TEST_CASE("verification: non-symplectic map is detected") {
  auto m = make_method("SERKN2s4");
  const auto b1 = m.b[0];
  m.b[0] = erkn::CoefficientFn([b1](const auto& x) { return b1(x) * 1.1; });
  const auto stellar = erkn::make_stellar(2, 1, 0.5);
  CHECK(erkn::jacobian_symplecticity(m, stellar, stellar.initial, 0.1) > 1e-5);
}

TEST_CASE("verification: loglog_slope") {
  const std::vector<double> x{1, 2, 4}, y{3, 12, 48};
  CHECK(erkn::loglog_slope(x, y) == doctest::Approx(2.0));
  const std::vector<double> one{1};
  CHECK_THROWS_AS(erkn::loglog_slope(one, one), std::invalid_argument);
}
