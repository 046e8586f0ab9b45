#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "erkn/tableau.hpp"

namespace erkn {

/// Row-major 2x2 matrix acting on (q_n, h q'_n).
using Matrix2 = std::array<double, 4>;

inline constexpr double kRhoTolerance = 1e-10;
inline constexpr double kResonanceThreshold = 1e-12;

enum StabilityCode : int {
  kOutOfDomain = -1,  // V + z <= 0
  kUnstable = 0,
  kStable = 1,
  kPeriodic = 2,
};

/// S(V, z) for y'' + omega^2 y = -eps y with V = h^2 omega^2, z = h^2 eps.
/// A classical tableau is applied to the whole right-hand side, so it is
/// evaluated as S(0, V + z). Throws GuardError when |det(I + z A_bar)| is
/// below kResonanceThreshold.
Matrix2 stability_matrix(const MethodTableau& m, double v, double z);

double spectral_radius(const Matrix2& s);

/// 1 if rho < 1 - tol, 2 if |rho - 1| <= tol and tr^2 < 4 det, otherwise 0;
/// kOutOfDomain when V + z <= 0. Throws std::invalid_argument for V <= 0.
int classify_point(const MethodTableau& m, double v, double z, double* rho_out = nullptr);

struct StabilityGrid {
  std::vector<double> v_axis;
  std::vector<double> z_axis;
  std::vector<int> code;     // row-major in V then z
  std::vector<double> rho;   // NaN where not evaluated
  std::vector<bool> failed;  // point raised an error; code is 0
  int at(std::size_t iv, std::size_t iz) const { return code[iv * z_axis.size() + iz]; }
};

/// Uniform nV x nz grid over [v_lo, v_hi] x [z_lo, z_hi] with v_lo > 0.
StabilityGrid scan_region(const MethodTableau& m, double v_lo, double v_hi, double z_lo,
                          double z_hi, int nv, int nz);

/// CSV with header `V,z,code,rho`, 17 significant digits.
void write_stability_csv(std::ostream& os, const StabilityGrid& grid);

}  // namespace erkn
