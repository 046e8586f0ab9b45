#include "erkn/verification.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "erkn/phi.hpp"

namespace erkn {

std::vector<double> symplectic_residuals(const MethodTableau& m, double v) {
  if (!(v >= 0.0)) throw std::domain_error("symplectic_residuals: v must be >= 0");
  if (m.classical) v = 0.0;
  const int s = m.stages;
  std::vector<double> b(s), bb(s);
  for (int i = 0; i < s; ++i) {
    b[i] = m.b[i](v);
    bb[i] = m.b_bar[i](v);
  }
  const double p0 = phi(0, v), p1 = phi(1, v);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(2 * s + s * (s - 1) / 2));
  for (int i = 0; i < s; ++i) {
    const double cv = m.c[i] * m.c[i] * v;
    out.push_back(std::abs(p0 * b[i] + v * p1 * bb[i] - m.d[i] * phi(0, cv)));
  }
  for (int i = 0; i < s; ++i) {
    const double cv = m.c[i] * m.c[i] * v;
    out.push_back(std::abs(p0 * bb[i] + m.c[i] * m.d[i] * phi(1, cv) - b[i] * p1));
  }
  for (int i = 1; i < s; ++i)
    for (int j = 0; j < i; ++j)
      out.push_back(std::abs(bb[j] * b[i] - bb[i] * b[j] - m.d[i] * m.a_bar[i][j](v)));
  return out;
}

std::string OrderCondition::id() const {
  std::string s = set_id + ":" + std::to_string(line);
  if (!variant.empty()) s += "-" + variant;
  return s;
}

namespace {

using Residual = std::function<double(const MethodTableau&, double)>;

enum class Weight { kB, kBbar };

double weight(const MethodTableau& m, Weight w, int i, double v) {
  return w == Weight::kB ? m.b[i](v) : m.b_bar[i](v);
}

// sum_i w_i(V) c_i^k
Residual moment(Weight w, int k, double rhs_scale, int rhs_phi) {
  return [=](const MethodTableau& m, double v) {
    double acc = 0.0;
    for (int i = 0; i < m.stages; ++i) acc += weight(m, w, i, v) * std::pow(m.c[i], k);
    return std::abs(acc - rhs_scale * phi(rhs_phi, v));
  };
}

// sum_i w_i(V) c_i^k sum_j a_bar_ij(0)
Residual row_sum(Weight w, int k, double rhs_scale, int rhs_phi) {
  return [=](const MethodTableau& m, double v) {
    double acc = 0.0;
    for (int i = 0; i < m.stages; ++i) {
      double row = 0.0;
      for (int j = 0; j <= i; ++j) row += m.a_bar[i][j](0.0);
      acc += weight(m, w, i, v) * std::pow(m.c[i], k) * row;
    }
    return std::abs(acc - rhs_scale * phi(rhs_phi, v));
  };
}

// sum_i b_i(V) sum_j a_bar_ij(0) c_j
Residual row_c_sum(double rhs_scale, int rhs_phi) {
  return [=](const MethodTableau& m, double v) {
    double acc = 0.0;
    for (int i = 0; i < m.stages; ++i) {
      double row = 0.0;
      for (int j = 0; j <= i; ++j) row += m.a_bar[i][j](0.0) * m.c[j];
      acc += m.b[i](v) * row;
    }
    return std::abs(acc - rhs_scale * phi(rhs_phi, v));
  };
}

OrderCondition line(const std::string& set, int n, std::string label, int order, Residual r,
                    std::string variant = "", bool informational = false) {
  return {set, n, std::move(variant), std::move(label), order, informational, std::move(r)};
}

std::vector<OrderCondition> fourth_order(const std::string& set, bool stated_b_line8) {
  std::vector<OrderCondition> v;
  v.push_back(line(set, 1, "sum b = phi1", 4, moment(Weight::kB, 0, 1, 1)));
  v.push_back(line(set, 2, "sum b c = phi2", 3, moment(Weight::kB, 1, 1, 2)));
  v.push_back(line(set, 3, "sum b c^2 = 2 phi3", 2, moment(Weight::kB, 2, 2, 3)));
  v.push_back(line(set, 4, "sum b c^3 = 6 phi4", 1, moment(Weight::kB, 3, 6, 4)));
  v.push_back(line(set, 5, "sum b_bar = phi2", 3, moment(Weight::kBbar, 0, 1, 2)));
  v.push_back(line(set, 6, "sum b_bar c = phi3", 2, moment(Weight::kBbar, 1, 1, 3)));
  v.push_back(line(set, 7, "sum b_bar c^2 = 2 phi4", 1, moment(Weight::kBbar, 2, 2, 4)));
  if (stated_b_line8) {
    // Stated with b; at V = 0 this reads 1/6 = 1/24 and cannot hold.
    v.push_back(line(set, 8, "sum b A(0) = phi4", 1, row_sum(Weight::kB, 0, 1, 4), "", true));
    v.push_back(line(set, 8, "sum b_bar A(0) = phi4", 1, row_sum(Weight::kBbar, 0, 1, 4),
                     "b_bar"));
  } else {
    v.push_back(line(set, 8, "sum b_bar A(0) = phi4", 1, row_sum(Weight::kBbar, 0, 1, 4)));
  }
  v.push_back(line(set, 9, "sum b A(0) = phi3", 2, row_sum(Weight::kB, 0, 1, 3)));
  v.push_back(line(set, 10, "sum b c A(0) = 3 phi4", 1, row_sum(Weight::kB, 1, 3, 4)));
  v.push_back(line(set, 11, "sum b A(0) c = phi4", 1, row_c_sum(1, 4)));
  return v;
}

}  // namespace

std::vector<std::string> order_condition_set_ids() {
  return {"order2-1s", "order3-2s", "order4-2s", "order4-3s"};
}

std::vector<OrderCondition> order_conditions(const std::string& set_id) {
  std::vector<OrderCondition> v;
  if (set_id == "order2-1s") {
    v.push_back(line(set_id, 1, "b_bar = phi2", 1, moment(Weight::kBbar, 0, 1, 2)));
    v.push_back(line(set_id, 2, "b = phi1", 2, moment(Weight::kB, 0, 1, 1)));
    v.push_back(line(set_id, 3, "c b = phi2", 1, moment(Weight::kB, 1, 1, 2)));
  } else if (set_id == "order3-2s") {
    v.push_back(line(set_id, 1, "sum b = phi1", 3, moment(Weight::kB, 0, 1, 1)));
    v.push_back(line(set_id, 2, "sum b c = phi2", 2, moment(Weight::kB, 1, 1, 2)));
    v.push_back(line(set_id, 3, "sum b c^2 = 2 phi3", 1, moment(Weight::kB, 2, 2, 3)));
    v.push_back(line(set_id, 4, "sum b_bar = phi2", 2, moment(Weight::kBbar, 0, 1, 2)));
    v.push_back(line(set_id, 5, "sum b_bar c = phi3", 1, moment(Weight::kBbar, 1, 1, 3)));
    v.push_back(line(set_id, 6, "sum b A(0) = phi3", 1, row_sum(Weight::kB, 0, 1, 3)));
  } else if (set_id == "order4-2s") {
    v = fourth_order(set_id, true);
  } else if (set_id == "order4-3s") {
    v = fourth_order(set_id, false);
  } else {
    throw std::invalid_argument("unknown condition set: " + set_id);
  }
  return v;
}

std::string order_condition_set_for(const MethodTableau& m) {
  if (m.stages == 1) return "order2-1s";
  if (m.stages == 2) return m.order == 3 ? "order3-2s" : "order4-2s";
  if (m.stages == 3) return "order4-3s";
  throw std::invalid_argument("order_condition_set_for: unsupported stage count");
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2)
    throw std::invalid_argument("loglog_slope: need at least two paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0 && y[i] > 0.0)) throw std::domain_error("loglog_slope: nonpositive value");
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double den = n * sxx - sx * sx;
  if (den == 0.0) throw std::domain_error("loglog_slope: degenerate abscissae");
  return (n * sxy - sx * sy) / den;
}

double order_residual_decay(const MethodTableau& m, const OrderCondition& cond, double omega,
                            std::span<const double> h_list) {
  if (h_list.size() < 4) throw std::invalid_argument("order_residual_decay: need >= 4 h values");
  for (std::size_t i = 1; i < h_list.size(); ++i)
    if (!(h_list[i] < h_list[i - 1]))
      throw std::invalid_argument("order_residual_decay: h_list must be strictly decreasing");
  std::vector<double> hs, rs;
  for (double h : h_list) {
    const double v = h * h * omega * omega;
    if (v > 400.0) throw std::domain_error("order_residual_decay: V outside [0, 400]");
    const double r = cond.residual(m, v);
    if (!std::isfinite(r)) throw std::domain_error("order_residual_decay: non-finite residual");
    if (r > kExactZeroResidual) {
      hs.push_back(h);
      rs.push_back(r);
    }
  }
  if (hs.size() < 2) return std::numeric_limits<double>::infinity();
  return loglog_slope(hs, rs);
}

double jacobian_symplecticity(const MethodTableau& m, const Problem& prob, const State& s,
                              double h) {
  const std::size_t d = prob.dim;
  const std::size_t n = 2 * d;
  const Stepper stepper(m, prob, h);
  double scale = 0.0;
  for (double x : s.q) scale = std::max(scale, std::abs(x));
  for (double x : s.p) scale = std::max(scale, std::abs(x));
  const double delta = 1e-6 * (1.0 + scale);

  auto flow = [&](std::size_t j, double sign) {
    State x = s;
    if (j < d)
      x.q[j] += sign * delta;
    else
      x.p[j - d] += sign * delta;
    stepper.step(x);
    Vector out(n);
    std::copy(x.q.begin(), x.q.end(), out.begin());
    std::copy(x.p.begin(), x.p.end(), out.begin() + static_cast<std::ptrdiff_t>(d));
    return out;
  };

  Matrix jac(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    const Vector plus = flow(j, 1.0), minus = flow(j, -1.0);
    for (std::size_t i = 0; i < n; ++i) jac(i, j) = (plus[i] - minus[i]) / (2.0 * delta);
  }
  // (J^T Omega J)_{ab} = sum_k J_{k,a} J_{k+d,b} - J_{k+d,a} J_{k,b}
  double worst = 0.0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      double acc = 0.0;
      for (std::size_t k = 0; k < d; ++k)
        acc += jac(k, a) * jac(k + d, b) - jac(k + d, a) * jac(k, b);
      double omega = 0.0;
      if (a < d && b == a + d) omega = 1.0;
      if (a >= d && b == a - d) omega = -1.0;
      worst = std::max(worst, std::abs(acc - omega));
    }
  return worst;
}

}  // namespace erkn
