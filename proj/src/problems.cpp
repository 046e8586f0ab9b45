#include "erkn/problems.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace erkn {

Vector Problem::gradient(std::span<const double> q) const {
  Vector out(dim);
  grad_u(q, out);
  return out;
}

double Problem::hamiltonian(std::span<const double> q, std::span<const double> p) const {
  if (q.size() != dim || p.size() != dim)
    throw std::invalid_argument("hamiltonian: dimension mismatch");
  const Vector mq = m.multiply(q);
  double kinetic = 0.0, quadratic = 0.0;
  for (std::size_t i = 0; i < dim; ++i) {
    kinetic += p[i] * p[i];
    quadratic += q[i] * mq[i];
  }
  return 0.5 * kinetic + 0.5 * quadratic + potential(q);
}

Problem make_sine_gordon(int n, LatticeSpacing spacing) {
  if (n < 2) throw std::invalid_argument("make_sine_gordon: N must be >= 2");
  const auto dim = static_cast<std::size_t>(n);
  const double dx = (spacing == LatticeSpacing::kOneOverN ? 1.0 : 2.0) / n;
  const double inv = 1.0 / (dx * dx);

  Problem prob;
  prob.name = "sine-gordon";
  prob.dim = dim;
  prob.m = Matrix(dim, dim);
  for (std::size_t i = 0; i < dim; ++i) {
    prob.m(i, i) += 2.0 * inv;
    prob.m(i, (i + 1) % dim) -= inv;
    prob.m(i, (i + dim - 1) % dim) -= inv;
  }
  prob.grad_u = [](std::span<const double> q, std::span<double> out) {
    for (std::size_t i = 0; i < q.size(); ++i) out[i] = std::sin(q[i]);
  };
  prob.potential = [](std::span<const double> q) {
    double u = 0.0;
    for (double x : q) u -= std::cos(x);
    return u;
  };
  prob.initial.q.assign(dim, std::numbers::pi);
  prob.initial.p.resize(dim);
  const double root_n = std::sqrt(static_cast<double>(n));
  for (int i = 1; i <= n; ++i)
    prob.initial.p[i - 1] = root_n * (0.01 + std::sin(2.0 * std::numbers::pi * i / n));
  prob.parameters = {{"N", n}, {"dx", dx}};
  return prob;
}

Problem make_duffing(double k) {
  if (!(k >= 0.0 && k < 10.0)) throw std::invalid_argument("make_duffing: need 0 <= k < 10");
  const double k2 = k * k;
  Problem prob;
  prob.name = "duffing";
  prob.dim = 1;
  prob.m = Matrix{{100.0}};
  prob.grad_u = [k2](std::span<const double> q, std::span<double> out) {
    out[0] = k2 * (q[0] - 2.0 * q[0] * q[0] * q[0]);
  };
  prob.potential = [k2](std::span<const double> q) {
    const double x2 = q[0] * q[0];
    return -k2 * (0.5 * x2 * x2 - 0.5 * x2);
  };
  prob.reference = [k](double t) { return duffing_reference(t, k); };
  prob.initial.q = {0.0};
  prob.initial.p = {10.0};
  prob.parameters = {{"k", k}};
  return prob;
}

Problem make_stellar(double a, double b, double eps) {
  if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("make_stellar: need a, b > 0");
  Problem prob;
  prob.name = "stellar";
  prob.dim = 2;
  prob.m = Matrix::diagonal(Vector{a * a, b * b});
  prob.grad_u = [eps](std::span<const double> q, std::span<double> out) {
    out[0] = -eps * q[1] * q[1];
    out[1] = -2.0 * eps * q[0] * q[1];
  };
  prob.potential = [eps](std::span<const double> q) { return -eps * q[0] * q[1] * q[1]; };
  prob.initial.q = {1.0, 1.0};
  prob.initial.p = {0.0, 0.0};
  prob.parameters = {{"a", a}, {"b", b}, {"eps", eps}};
  return prob;
}

namespace {

double param(const std::map<std::string, double>& params, const char* key, double fallback) {
  const auto it = params.find(key);
  return it == params.end() ? fallback : it->second;
}

void check_keys(const std::map<std::string, double>& params,
                std::initializer_list<std::string_view> allowed, std::string_view problem) {
  for (const auto& [key, value] : params) {
    bool ok = false;
    for (auto a : allowed) ok = ok || key == a;
    if (!ok)
      throw std::invalid_argument("unknown parameter '" + key + "' for problem " +
                                  std::string(problem));
  }
}

}  // namespace

Problem make_problem(std::string_view name, const std::map<std::string, double>& params) {
  if (name == "sine-gordon") {
    check_keys(params, {"N", "dx_two_over_n"}, name);
    const double n = param(params, "N", 32);
    if (n != std::floor(n)) throw std::invalid_argument("sine-gordon: N must be an integer");
    const bool two = param(params, "dx_two_over_n", 0.0) != 0.0;
    return make_sine_gordon(static_cast<int>(n),
                            two ? LatticeSpacing::kTwoOverN : LatticeSpacing::kOneOverN);
  }
  if (name == "duffing") {
    check_keys(params, {"k"}, name);
    return make_duffing(param(params, "k", 0.03));
  }
  if (name == "stellar") {
    check_keys(params, {"a", "b", "eps"}, name);
    return make_stellar(param(params, "a", 2.0), param(params, "b", 1.0),
                        param(params, "eps", 1e-3));
  }
  throw std::invalid_argument("unknown problem: " + std::string(name));
}

std::vector<std::string> problem_names() { return {"sine-gordon", "duffing", "stellar"}; }

double elliptic_k(double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("elliptic_k: need 0 <= k < 1");
  double a = 1.0, b = std::sqrt((1.0 - k) * (1.0 + k));
  for (int it = 0; it < 64 && std::abs(a - b) > 1e-16 * a; ++it) {
    const double an = 0.5 * (a + b);
    b = std::sqrt(a * b);
    a = an;
  }
  return std::numbers::pi / (a + b);
}

JacobiElliptic jacobi_elliptic(double u, double k) {
  if (!(k >= 0.0 && k < 1.0)) throw std::domain_error("jacobi_elliptic: need 0 <= k < 1");
  if (k == 0.0) return {std::sin(u), std::cos(u), 1.0};
  constexpr int kMaxLevels = 32;
  double a[kMaxLevels + 1], c[kMaxLevels + 1];
  a[0] = 1.0;
  double b = std::sqrt((1.0 - k) * (1.0 + k));
  c[0] = k;
  int n = 0;
  while (std::abs(c[n]) > 1e-17 && n < kMaxLevels) {
    a[n + 1] = 0.5 * (a[n] + b);
    c[n + 1] = 0.5 * (a[n] - b);
    b = std::sqrt(a[n] * b);
    ++n;
  }
  double phi = std::ldexp(a[n] * u, n);
  for (int level = n; level > 0; --level)
    phi = 0.5 * (phi + std::asin(c[level] / a[level] * std::sin(phi)));
  const double sn = std::sin(phi);
  const double cn = std::cos(phi);
  // dn >= sqrt(1 - k^2) > 0, so the square root is well conditioned.
  const double dn = std::sqrt((1.0 - k * sn) * (1.0 + k * sn));
  return {sn, cn, dn};
}

State duffing_reference(double t, double k) {
  if (!(k >= 0.0 && k < 10.0)) throw std::domain_error("duffing_reference: need 0 <= k < 10");
  const auto e = jacobi_elliptic(10.0 * t, k / 10.0);
  return {t, {e.sn}, {10.0 * e.cn * e.dn}};
}

}  // namespace erkn
