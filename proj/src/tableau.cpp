#include "erkn/tableau.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "erkn/phi.hpp"

namespace erkn {

namespace {

template <class T>
using Plain = std::decay_t<T>;

// b_i(v) = d_i phi_0((1-c_i)^2 v), the reduced form of the symplectic solution.
CoefficientFn weight_b(double d, double c) {
  const double w = (1.0 - c) * (1.0 - c);
  return CoefficientFn([d, w](const auto& v) { return d * phi(0, w * v); });
}

// b_bar_i(v) = d_i (1-c_i) phi_1((1-c_i)^2 v)
CoefficientFn weight_b_bar(double d, double c) {
  const double w = (1.0 - c) * (1.0 - c);
  const double scale = d * (1.0 - c);
  return CoefficientFn([scale, w](const auto& v) { return scale * phi(1, w * v); });
}

// a_bar_ij = (b_i b_bar_j - b_j b_bar_i) / d_i, j < i
CoefficientFn off_diagonal(const MethodTableau& m, int i, int j) {
  const CoefficientFn bi = m.b[i], bj = m.b[j], bbi = m.b_bar[i], bbj = m.b_bar[j];
  const double di = m.d[i];
  return CoefficientFn([=](const auto& v) { return (bi(v) * bbj(v) - bj(v) * bbi(v)) / di; });
}

MethodTableau skeleton(std::string name, int order, Vector c, Vector d) {
  MethodTableau m;
  m.name = std::move(name);
  m.stages = static_cast<int>(c.size());
  m.order = order;
  m.c = std::move(c);
  m.d = std::move(d);
  for (int i = 0; i < m.stages; ++i) {
    m.b.push_back(weight_b(m.d[i], m.c[i]));
    m.b_bar.push_back(weight_b_bar(m.d[i], m.c[i]));
  }
  m.a_bar.resize(m.stages);
  for (int i = 0; i < m.stages; ++i) m.a_bar[i].resize(i + 1);
  for (int i = 1; i < m.stages; ++i)
    for (int j = 0; j < i; ++j) m.a_bar[i][j] = off_diagonal(m, i, j);
  return m;
}

}  // namespace

CoefficientFn CoefficientFn::constant(double value) {
  return CoefficientFn([value](const auto& v) { return Plain<decltype(v)>(value); });
}

MethodTableau build_one_stage(OneStageVariant variant) {
  const bool phi0 = variant == OneStageVariant::kPhi0;
  MethodTableau m = skeleton(phi0 ? "SERKN1s2(1)" : "SERKN1s2(2)", 2, {0.5}, {1.0});
  if (phi0)
    m.a_bar[0][0] = CoefficientFn([](const auto& v) { return phi(0, v); });
  else
    m.a_bar[0][0] = m.b_bar[0];
  return m;
}

MethodTableau build_two_stage_order3() {
  // c1 = 1/5 gives c2 = (2 - 3 c1)/(3 - 6 c1) = 7/9.
  const double c1 = 1.0 / 5.0;
  const double c2 = (2.0 - 3.0 * c1) / (3.0 - 6.0 * c1);
  const double d1 = (1.0 - 2.0 * c2) / (2.0 * (c1 - c2));
  const double d2 = (-1.0 + 2.0 * c1) / (2.0 * (c1 - c2));
  MethodTableau m = skeleton("SERKN2s3", 3, {c1, c2}, {d1, d2});
  const CoefficientFn b1 = m.b[0], b2 = m.b[1], a21 = m.a_bar[1][0];
  // a_bar_11 = a_bar_22 = (phi_3 - a_bar_21 b_2) / (b_1 + b_2)
  const CoefficientFn diag([=](const auto& v) {
    return guarded_divide(phi(3, v) - a21(v) * b2(v), b1(v) + b2(v), "SERKN2s3 a_bar_ii");
  });
  m.a_bar[0][0] = diag;
  m.a_bar[1][1] = diag;
  return m;
}

MethodTableau build_two_stage_order4() {
  const double s3 = std::sqrt(3.0);
  const double c1 = (3.0 - s3) / 6.0;
  const double c2 = (3.0 + s3) / 6.0;
  const double d1 = (1.0 - 2.0 * c2) / (2.0 * (c1 - c2));
  const double d2 = (-1.0 + 2.0 * c1) / (2.0 * (c1 - c2));
  MethodTableau m = skeleton("SERKN2s4", 4, {c1, c2}, {d1, d2});
  const CoefficientFn b1 = m.b[0], b2 = m.b[1], bb1 = m.b_bar[0], bb2 = m.b_bar[1];
  const CoefficientFn a21 = m.a_bar[1][0];
  m.a_bar[0][0] = CoefficientFn([=](const auto& v) {
    return guarded_divide(bb2(v) * phi(3, v) - b2(v) * phi(4, v),
                          b1(v) * bb2(v) - b2(v) * bb1(v), "SERKN2s4 a_bar_11");
  });
  m.a_bar[1][1] = CoefficientFn([=](const auto& v) {
    const auto den = b1(v) * bb2(v) - b2(v) * bb1(v);
    const auto num = a21(v) * b2(v) * bb1(v) - a21(v) * b1(v) * bb2(v) - bb1(v) * phi(3, v) +
                     b1(v) * phi(4, v);
    return guarded_divide(num, den, "SERKN2s4 a_bar_22");
  });
  return m;
}

MethodTableau build_three_stage(double c1, double c2, std::string variant_name) {
  if (c1 == c2) throw std::invalid_argument("build_three_stage: c1 == c2");
  const double c3_den = 4.0 - 6.0 * c1 - 6.0 * c2 + 12.0 * c1 * c2;
  if (std::abs(c3_den) < kGuardThreshold)
    throw std::invalid_argument("build_three_stage: 4 - 6c1 - 6c2 + 12c1c2 vanishes");
  const double c3 = (3.0 - 4.0 * c1 - 4.0 * c2 + 6.0 * c1 * c2) / c3_den;
  if (std::abs(c3 - c1) < kGuardThreshold || std::abs(c3 - c2) < kGuardThreshold)
    throw std::invalid_argument("build_three_stage: c3 coincides with c1 or c2");
  const double d1 = (2.0 - 3.0 * c3 + c2 * (-3.0 + 6.0 * c3)) / (6.0 * (c1 - c2) * (c1 - c3));
  const double d2 = (-2.0 + c1 * (3.0 - 6.0 * c3) + 3.0 * c3) / (6.0 * (c1 - c2) * (c2 - c3));
  const double d3 = (-2.0 + c1 * (3.0 - 6.0 * c2) + 3.0 * c2) / (6.0 * (c1 - c3) * (-c2 + c3));

  MethodTableau m = skeleton(std::move(variant_name), 4, {c1, c2, c3}, {d1, d2, d3});
  const CoefficientFn b1 = m.b[0], b2 = m.b[1], b3 = m.b[2];
  const CoefficientFn a21 = m.a_bar[1][0], a31 = m.a_bar[2][0], a32 = m.a_bar[2][1];

  // The diagonal entries solve b_bar^T S = phi_4, b^T S = phi_3,
  // (b c)^T S = 3 phi_4 for the row sums S_i = sum_{j<=i} a_bar_ij. At v = 0
  // the first row equals the second minus the third, so the first row is
  // replaced by (row1 - row2 + row3) / v, whose entries have closed forms:
  //   (b_bar_i - (1 - c_i) b_i) / v = d_i (1 - c_i)^3 (phi_2 - phi_3)((1 - c_i)^2 v)
  //   (4 phi_4 - phi_3) / v = phi_5 - 4 phi_6.
  const std::array<double, 3> c{c1, c2, c3};
  const Vector d = m.d;
  auto row_sums = [=](const auto& v) {
    using T = Plain<decltype(v)>;
    std::array<T, 3> reduced, bw, bcw;
    const std::array<T, 3> bv{b1(v), b2(v), b3(v)};
    for (int i = 0; i < 3; ++i) {
      const double w = (1.0 - c[i]) * (1.0 - c[i]);
      reduced[i] = d[i] * (1.0 - c[i]) * w * (phi(2, w * v) - phi(3, w * v));
      bw[i] = bv[i];
      bcw[i] = bv[i] * c[i];
    }
    const std::array<T, 3> rhs{phi(5, v) - 4.0 * phi(6, v), phi(3, v), 3.0 * phi(4, v)};
    auto det3 = [](const std::array<T, 3>& x, const std::array<T, 3>& y,
                   const std::array<T, 3>& z) {
      return x[0] * (y[1] * z[2] - y[2] * z[1]) - x[1] * (y[0] * z[2] - y[2] * z[0]) +
             x[2] * (y[0] * z[1] - y[1] * z[0]);
    };
    const T det = det3(reduced, bw, bcw);
    std::array<T, 3> sums;
    for (int k = 0; k < 3; ++k) {
      auto r = reduced, bb = bw, bc = bcw;
      r[k] = rhs[0];
      bb[k] = rhs[1];
      bc[k] = rhs[2];
      sums[k] = guarded_divide(det3(r, bb, bc), det, "three-stage a_bar_ii");
    }
    return sums;
  };

  m.a_bar[0][0] = CoefficientFn([=](const auto& v) { return row_sums(v)[0]; });
  m.a_bar[1][1] = CoefficientFn([=](const auto& v) { return row_sums(v)[1] - a21(v); });
  m.a_bar[2][2] =
      CoefficientFn([=](const auto& v) { return row_sums(v)[2] - (a31(v) + a32(v)); });
  return m;
}

MethodTableau rkn_limit(const MethodTableau& m) {
  MethodTableau r;
  r.name = m.name.rfind("SERKN", 0) == 0 ? "RKN" + m.name.substr(5) : "RKN(" + m.name + ")";
  r.stages = m.stages;
  r.order = m.order;
  r.c = m.c;
  r.d = m.d;
  r.classical = true;
  for (int i = 0; i < m.stages; ++i) {
    r.b.push_back(CoefficientFn::constant(m.b[i](0.0)));
    r.b_bar.push_back(CoefficientFn::constant(m.b_bar[i](0.0)));
  }
  r.a_bar.resize(m.stages);
  for (int i = 0; i < m.stages; ++i)
    for (int j = 0; j <= i; ++j) r.a_bar[i].push_back(CoefficientFn::constant(m.a_bar[i][j](0.0)));
  return r;
}

const CoefficientFn& coefficient_fn(const MethodTableau& m, CoefficientKind kind, int i, int j) {
  if (i < 0 || i >= m.stages) throw std::out_of_range("coefficient: stage index out of range");
  switch (kind) {
    case CoefficientKind::kB:
      return m.b[i];
    case CoefficientKind::kBbar:
      return m.b_bar[i];
    case CoefficientKind::kAbar:
      if (j < 0 || j > i) throw std::out_of_range("coefficient: a_bar needs 0 <= j <= i");
      return m.a_bar[i][j];
  }
  throw std::invalid_argument("coefficient: unknown kind");
}

double coefficient(const MethodTableau& m, CoefficientKind kind, int i, int j, double v) {
  if (!(v >= 0.0)) throw std::domain_error("coefficient: v must be nonnegative");
  return coefficient_fn(m, kind, i, j)(v);
}

std::vector<double> taylor_coefficients(const CoefficientFn& f, int n_terms) {
  if (n_terms < 1 || n_terms > static_cast<int>(Jet::kTerms))
    throw std::invalid_argument("taylor_coefficients: n_terms must be in 1..4");
  const Jet value = f(Jet::variable(0.0));
  if (!all_finite(value)) throw std::domain_error("taylor_coefficients: non-finite expansion");
  return {value.coefficients().begin(), value.coefficients().begin() + n_terms};
}

namespace {

constexpr std::array<std::string_view, 9> kNames = {
    "SERKN1s2(1)", "SERKN1s2(2)", "SERKN2s3", "SERKN2s4", "SERKN3s4(1)",
    "SERKN3s4(2)", "RKN1s2",      "RKN2s3",   "RKN3s4"};

MethodTableau renamed(MethodTableau m, std::string name) {
  m.name = std::move(name);
  return m;
}

}  // namespace

MethodTableau make_method(std::string_view name) {
  const double s15 = std::sqrt(15.0);
  if (name == "SERKN1s2(1)") return build_one_stage(OneStageVariant::kPhi0);
  if (name == "SERKN1s2(2)") return build_one_stage(OneStageVariant::kBbar);
  if (name == "SERKN2s3") return build_two_stage_order3();
  if (name == "SERKN2s4") return build_two_stage_order4();
  if (name == "SERKN3s4(1)") return build_three_stage((5.0 - s15) / 10.0, 0.5, "SERKN3s4(1)");
  if (name == "SERKN3s4(2)")
    return build_three_stage((5.0 + s15) / 10.0, (5.0 - s15) / 10.0, "SERKN3s4(2)");
  if (name == "RKN1s2") return renamed(rkn_limit(make_method("SERKN1s2(1)")), "RKN1s2");
  if (name == "RKN2s3") return renamed(rkn_limit(make_method("SERKN2s3")), "RKN2s3");
  if (name == "RKN3s4") return renamed(rkn_limit(make_method("SERKN3s4(1)")), "RKN3s4");
  throw std::invalid_argument("unknown method: " + std::string(name));
}

std::vector<std::string> method_names() { return {kNames.begin(), kNames.end()}; }

std::vector<std::string> serkn_method_names() { return {kNames.begin(), kNames.begin() + 6}; }

bool is_known_method(std::string_view name) {
  return std::find(kNames.begin(), kNames.end(), name) != kNames.end();
}

}  // namespace erkn
