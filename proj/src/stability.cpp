#include "erkn/stability.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "erkn/format.hpp"
#include "erkn/phi.hpp"

namespace erkn {

Matrix2 stability_matrix(const MethodTableau& m, double v, double z) {
  if (!(v >= 0.0) || !std::isfinite(z))
    throw std::domain_error("stability_matrix: need V >= 0 and finite z");
  if (m.classical) {
    z += v;
    v = 0.0;
  }
  const int s = m.stages;
  std::vector<double> b(s), bb(s), x0(s), x1(s);
  for (int i = 0; i < s; ++i) {
    b[i] = m.b[i](v);
    bb[i] = m.b_bar[i](v);
    const double cv = m.c[i] * m.c[i] * v;
    x0[i] = phi(0, cv);
    x1[i] = m.c[i] * phi(1, cv);
  }
  // N = I + z A_bar is lower triangular; solve N y = x by forward substitution.
  std::vector<std::vector<double>> n(s, std::vector<double>(s, 0.0));
  double det = 1.0;
  for (int i = 0; i < s; ++i) {
    for (int j = 0; j <= i; ++j) n[i][j] = z * m.a_bar[i][j](v);
    n[i][i] += 1.0;
    det *= n[i][i];
  }
  if (!(std::abs(det) >= kResonanceThreshold))
    throw GuardError("stability_matrix: I + z A_bar is singular");
  auto solve = [&](const std::vector<double>& rhs) {
    std::vector<double> y(s);
    for (int i = 0; i < s; ++i) {
      double acc = rhs[i];
      for (int j = 0; j < i; ++j) acc -= n[i][j] * y[j];
      y[i] = acc / n[i][i];
    }
    return y;
  };
  const auto y0 = solve(x0), y1 = solve(x1);
  double bb_y0 = 0, bb_y1 = 0, b_y0 = 0, b_y1 = 0;
  for (int i = 0; i < s; ++i) {
    bb_y0 += bb[i] * y0[i];
    bb_y1 += bb[i] * y1[i];
    b_y0 += b[i] * y0[i];
    b_y1 += b[i] * y1[i];
  }
  const double p0 = phi(0, v), p1 = phi(1, v);
  return {p0 - z * bb_y0, p1 - z * bb_y1, -v * p1 - z * b_y0, p0 - z * b_y1};
}

double spectral_radius(const Matrix2& s) {
  const double tr = s[0] + s[3];
  const double det = s[0] * s[3] - s[1] * s[2];
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr - 4.0 * det, 0.0));
  const std::complex<double> l1 = 0.5 * (tr + disc), l2 = 0.5 * (tr - disc);
  return std::max(std::abs(l1), std::abs(l2));
}

int classify_point(const MethodTableau& m, double v, double z, double* rho_out) {
  if (!(v > 0.0)) throw std::invalid_argument("classify_point: V must be > 0");
  if (rho_out) *rho_out = std::numeric_limits<double>::quiet_NaN();
  if (!(v + z > 0.0)) return kOutOfDomain;
  const Matrix2 s = stability_matrix(m, v, z);
  const double rho = spectral_radius(s);
  if (rho_out) *rho_out = rho;
  const double tr = s[0] + s[3];
  const double det = s[0] * s[3] - s[1] * s[2];
  if (rho < 1.0 - kRhoTolerance) return kStable;
  if (std::abs(rho - 1.0) <= kRhoTolerance && tr * tr < 4.0 * det) return kPeriodic;
  return kUnstable;
}

StabilityGrid scan_region(const MethodTableau& m, double v_lo, double v_hi, double z_lo,
                          double z_hi, int nv, int nz) {
  if (nv < 2 || nz < 2) throw std::invalid_argument("scan_region: need nV, nz >= 2");
  if (!(v_lo > 0.0 && v_hi > v_lo)) throw std::invalid_argument("scan_region: need 0 < V_lo < V_hi");
  if (!(z_hi > z_lo)) throw std::invalid_argument("scan_region: need z_lo < z_hi");
  StabilityGrid g;
  g.v_axis.resize(nv);
  g.z_axis.resize(nz);
  for (int i = 0; i < nv; ++i) g.v_axis[i] = v_lo + (v_hi - v_lo) * i / (nv - 1);
  for (int j = 0; j < nz; ++j) g.z_axis[j] = z_lo + (z_hi - z_lo) * j / (nz - 1);
  const std::size_t total = static_cast<std::size_t>(nv) * static_cast<std::size_t>(nz);
  g.code.assign(total, kUnstable);
  g.rho.assign(total, std::numeric_limits<double>::quiet_NaN());
  g.failed.assign(total, false);
  for (int i = 0; i < nv; ++i)
    for (int j = 0; j < nz; ++j) {
      const std::size_t idx = static_cast<std::size_t>(i) * nz + j;
      try {
        double rho = 0.0;
        g.code[idx] = classify_point(m, g.v_axis[i], g.z_axis[j], &rho);
        g.rho[idx] = rho;
      } catch (const std::exception&) {
        g.code[idx] = kUnstable;
        g.failed[idx] = true;
      }
    }
  return g;
}

void write_stability_csv(std::ostream& os, const StabilityGrid& grid) {
  os << "V,z,code,rho\n";
  for (std::size_t i = 0; i < grid.v_axis.size(); ++i)
    for (std::size_t j = 0; j < grid.z_axis.size(); ++j) {
      const std::size_t idx = i * grid.z_axis.size() + j;
      os << fmt17(grid.v_axis[i]) << ',' << fmt17(grid.z_axis[j]) << ',' << grid.code[idx] << ','
         << fmt17(grid.rho[idx]) << '\n';
    }
}

}  // namespace erkn
