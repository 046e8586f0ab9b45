#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <numbers>
#include <random>

#include "doctest.h"
#include "erkn/problems.hpp"
#include "erkn/spectral.hpp"

using erkn::Problem;
using erkn::Vector;

namespace {

// Central-difference gradient of U.
Vector fd_gradient(const Problem& prob, const Vector& q, double step) {
  Vector g(prob.dim);
  for (std::size_t i = 0; i < prob.dim; ++i) {
    Vector plus = q, minus = q;
    plus[i] += step;
    minus[i] -= step;
    g[i] = (prob.potential(plus) - prob.potential(minus)) / (2.0 * step);
  }
  return g;
}

void check_gradient_consistency(const Problem& prob, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-2.0, 2.0);
  for (int trial = 0; trial < 20; ++trial) {
    Vector q(prob.dim);
    for (double& x : q) x = dist(rng);
    const Vector g = prob.gradient(q);
    const Vector fd = fd_gradient(prob, q, 1e-5);
    double scale = 0.0, err = 0.0;
    for (std::size_t i = 0; i < prob.dim; ++i) {
      scale = std::max(scale, std::abs(g[i]));
      err = std::max(err, std::abs(g[i] - fd[i]));
    }
    CHECK(err <= 1e-6 * std::max(scale, 1e-3));
  }
}

}  // namespace

TEST_CASE("problems: sine-Gordon construction") {
  const auto p2 = erkn::make_sine_gordon(2);
  CHECK(p2.m(0, 0) == doctest::Approx(8.0));
  CHECK(p2.m(0, 1) == doctest::Approx(-8.0));
  CHECK(p2.m(1, 0) == doctest::Approx(-8.0));

  const auto p = erkn::make_sine_gordon(32);
  CHECK(p.dim == 32);
  double half_p2 = 0.0;
  for (double x : p.initial.p) half_p2 += 0.5 * x * x;
  CHECK(p.hamiltonian(p.initial) == doctest::Approx(half_p2 + 32.0).epsilon(1e-13));
  CHECK(p.initial.p[31] == doctest::Approx(std::sqrt(32.0) * 0.01).epsilon(1e-12));

  const Vector zero(32, 0.0);
  CHECK(p.potential(zero) == -32.0);
  for (double g : p.gradient(zero)) CHECK(g == 0.0);

  const auto cache = erkn::spectral_decompose(p.m);
  CHECK(cache.eigenvalues[0] == 0.0);
  for (std::size_t k = 0; k < 32; ++k)
    CHECK(cache.basis(k, 0) == doctest::Approx(1.0 / std::sqrt(32.0)).epsilon(1e-10));
  std::vector<double> expected;
  for (int m = 0; m < 32; ++m) {
    const double s = std::sin(std::numbers::pi * m / 32);
    expected.push_back(4.0 * 1024.0 * s * s);
  }
  std::sort(expected.begin(), expected.end());
  for (std::size_t k = 1; k < 32; ++k)
    CHECK(cache.eigenvalues[k] == doctest::Approx(expected[k]).epsilon(1e-9));

  const auto wide = erkn::make_sine_gordon(32, erkn::LatticeSpacing::kTwoOverN);
  CHECK(wide.m(0, 0) == doctest::Approx(2.0 * 256.0));
  CHECK_THROWS_AS(erkn::make_sine_gordon(1), std::invalid_argument);
}

TEST_CASE("problems: Duffing") {
  const auto p0 = erkn::make_duffing(0.0);
  CHECK(p0.hamiltonian(Vector{0.3}, Vector{2.0}) == doctest::Approx(0.5 * 4.0 + 50.0 * 0.09));
  const auto p = erkn::make_duffing(0.03);
  CHECK(p.hamiltonian(p.initial) == 50.0);
  const Vector q{0.7};
  CHECK(fd_gradient(p, q, 1e-5)[0] == doctest::Approx(p.gradient(q)[0]).epsilon(1e-8));
  // q'' = -100 q - grad U = -100 q + k^2 (2 q^3 - q)
  CHECK(-100.0 * 0.7 - p.gradient(q)[0] ==
        doctest::Approx(-70.0 + 0.0009 * (2 * 0.343 - 0.7)).epsilon(1e-14));
  CHECK_THROWS_AS(erkn::make_duffing(10.0), std::invalid_argument);
  CHECK_THROWS_AS(erkn::make_duffing(-0.1), std::invalid_argument);
}

TEST_CASE("problems: stellar") {
  const auto p0 = erkn::make_stellar(2, 1, 0);
  CHECK(p0.hamiltonian(p0.initial) == 2.5);
  const auto p = erkn::make_stellar();
  CHECK(p.hamiltonian(p.initial) == doctest::Approx(2.5 - 1e-3).epsilon(1e-15));
  const Vector g = p.gradient(Vector{1.0, 1.0});
  // q1'' + 4 q1 = eps q2^2
  CHECK(-g[0] == doctest::Approx(1e-3));
  CHECK(-g[1] == doctest::Approx(2e-3));
  const auto cache = erkn::spectral_decompose(p.m);
  CHECK(cache.eigenvalues[0] == 1.0);
  CHECK(cache.eigenvalues[1] == 4.0);
}

TEST_CASE("problems: gradients agree with finite differences of U") {
  std::mt19937_64 rng(12345);
  check_gradient_consistency(erkn::make_sine_gordon(8), rng);
  check_gradient_consistency(erkn::make_duffing(0.03), rng);
  check_gradient_consistency(erkn::make_duffing(3.0), rng);
  check_gradient_consistency(erkn::make_stellar(), rng);
  check_gradient_consistency(erkn::make_stellar(2, 1, 0.5), rng);
}

TEST_CASE("problems: registry") {
  CHECK(erkn::make_problem("duffing", {{"k", 0.5}}).parameters.at("k") == 0.5);
  CHECK(erkn::make_problem("sine-gordon", {{"N", 8}}).dim == 8);
  CHECK(erkn::make_problem("sine-gordon", {{"N", 8}, {"dx_two_over_n", 1}}).parameters.at("dx") ==
        0.25);
  CHECK(erkn::make_problem("stellar").dim == 2);
  CHECK_THROWS_AS(erkn::make_problem("fpu"), std::invalid_argument);
  CHECK_THROWS_AS(erkn::make_problem("duffing", {{"N", 3}}), std::invalid_argument);
  CHECK_THROWS_AS(erkn::make_problem("sine-gordon", {{"N", 3.5}}), std::invalid_argument);
}

TEST_CASE("problems: elliptic K by the AGM") {
  CHECK(erkn::elliptic_k(0.0) == doctest::Approx(std::numbers::pi / 2).epsilon(1e-16));
  // K(k) = pi/2 (1 + k^2/4 + 9 k^4/64 + 25 k^6/256 + 1225 k^8/16384 + ...)
  for (double k : {1e-3, 3e-3, 0.01, 0.05}) {
    const double k2 = k * k;
    const double series =
        std::numbers::pi / 2 *
        (1 + k2 / 4 + 9 * k2 * k2 / 64 + 25 * k2 * k2 * k2 / 256 + 1225 * k2 * k2 * k2 * k2 / 16384);
    CHECK(erkn::elliptic_k(k) == doctest::Approx(series).epsilon(1e-13));
  }
  CHECK(erkn::elliptic_k(std::sqrt(0.5)) == doctest::Approx(1.8540746773013719).epsilon(1e-14));
  CHECK_THROWS_AS(erkn::elliptic_k(1.0), std::domain_error);
}

TEST_CASE("problems: Jacobi elliptic functions") {
  for (double u : {0.0, 0.4, 1.7, 5.0, 31.0}) {
    const auto e0 = erkn::jacobi_elliptic(u, 0.0);
    CHECK(e0.sn == doctest::Approx(std::sin(u)).epsilon(1e-15));
    for (double k : {0.003, 0.1, 0.5}) {
      const auto e = erkn::jacobi_elliptic(u, k);
      CHECK(e.sn * e.sn + e.cn * e.cn == doctest::Approx(1.0).epsilon(1e-14));
      CHECK(e.dn * e.dn + k * k * e.sn * e.sn == doctest::Approx(1.0).epsilon(1e-14));
    }
  }
  // sn(0.5, k = 0.5), 30-digit reference
  CHECK(erkn::jacobi_elliptic(0.5, 0.5).sn == doctest::Approx(0.47508293602853651).epsilon(1e-12));
  // sn(K) = 1, zero at 2K with descending sign.
  const double kk = erkn::elliptic_k(0.003);
  CHECK(erkn::jacobi_elliptic(kk, 0.003).sn == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(std::abs(erkn::jacobi_elliptic(2 * kk, 0.003).sn) < 1e-14);
  CHECK(std::abs(erkn::jacobi_elliptic(4 * kk, 0.003).sn) < 1e-14);
  CHECK(erkn::jacobi_elliptic(4 * kk - 1e-3, 0.003).sn < 0.0);
  CHECK(erkn::jacobi_elliptic(4 * kk + 1e-3, 0.003).sn > 0.0);
}

TEST_CASE("problems: Duffing reference solves the ODE") {
  CHECK(erkn::duffing_reference(0.0, 0.03).q[0] == 0.0);
  CHECK(erkn::duffing_reference(0.0, 0.03).p[0] == 10.0);
  CHECK(erkn::duffing_reference(0.37, 0.0).q[0] == doctest::Approx(std::sin(3.7)).epsilon(1e-15));
  const double dt = 1e-4;
  for (double k : {0.03, 3.0}) {
    const double k2 = k * k;
    for (double t : {0.1, 0.77, 3.2, 9.5}) {
      const double qm = erkn::duffing_reference(t - dt, k).q[0];
      const double q0 = erkn::duffing_reference(t, k).q[0];
      const double qp = erkn::duffing_reference(t + dt, k).q[0];
      const double residual = (qp - 2 * q0 + qm) / (dt * dt) + 100 * q0 - k2 * (2 * q0 * q0 * q0 - q0);
      CHECK(std::abs(residual) < 1e-3);
      // p is the time derivative of q
      const double dq = (qp - qm) / (2 * dt);
      CHECK(erkn::duffing_reference(t, k).p[0] == doctest::Approx(dq).epsilon(1e-6));
      // Energy is conserved along the exact solution
      const auto prob = erkn::make_duffing(k);
      CHECK(prob.hamiltonian(erkn::duffing_reference(t, k)) == doctest::Approx(50.0).epsilon(1e-12));
    }
  }
}
