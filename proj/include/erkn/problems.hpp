#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "erkn/matrix.hpp"

namespace erkn {

struct State {
  double t = 0.0;
  Vector q;
  Vector p;
};

/// q'' + M q = -grad U(q) with H = p^T p / 2 + q^T M q / 2 + U(q).
struct Problem {
  using GradFn = std::function<void(std::span<const double> q, std::span<double> out)>;
  using PotentialFn = std::function<double(std::span<const double> q)>;
  using ReferenceFn = std::function<State(double t)>;

  std::string name;
  std::size_t dim = 0;
  Matrix m;
  GradFn grad_u;
  PotentialFn potential;
  ReferenceFn reference;  // empty when no closed-form solution exists
  State initial;
  std::map<std::string, double> parameters;

  Vector gradient(std::span<const double> q) const;
  double hamiltonian(std::span<const double> q, std::span<const double> p) const;
  double hamiltonian(const State& s) const { return hamiltonian(s.q, s.p); }
};

enum class LatticeSpacing { kOneOverN, kTwoOverN };

/// Periodic sine-Gordon lattice, N points.
Problem make_sine_gordon(int n, LatticeSpacing spacing = LatticeSpacing::kOneOverN);

/// q'' + 100 q = k^2 (2 q^3 - q), (q, p)(0) = (0, 10), 0 <= k < 10.
Problem make_duffing(double k);

/// Stellar orbit model, M = diag(a^2, b^2), U = -eps q1 q2^2.
Problem make_stellar(double a = 2.0, double b = 1.0, double eps = 1e-3);

/// Problem by name ("sine-gordon", "duffing", "stellar") with parameter
/// overrides (N, dx_two_over_n, k, a, b, eps). Unknown names or keys throw
/// std::invalid_argument.
Problem make_problem(std::string_view name, const std::map<std::string, double>& params = {});
std::vector<std::string> problem_names();

/// Complete elliptic integral of the first kind K(k) by the AGM, modulus k.
double elliptic_k(double k);

struct JacobiElliptic {
  double sn;
  double cn;
  double dn;
};

/// sn, cn, dn(u, k) for modulus 0 <= k < 1 via the descending Landen / AGM
/// scheme.
JacobiElliptic jacobi_elliptic(double u, double k);

/// Exact Duffing solution q = sn(10 t, k/10), p = 10 cn dn.
State duffing_reference(double t, double k);

}  // namespace erkn
