#pragma once

#include <cstddef>
#include <functional>
#include <span>

#include "erkn/matrix.hpp"

namespace erkn {

/// Eigendecomposition M = basis * diag(eigenvalues) * basis^T of a symmetric
/// positive semi-definite matrix. Eigenvalues ascending, all >= 0.
struct SpectralCache {
  std::size_t dim = 0;
  Vector eigenvalues;
  Matrix basis;  // columns are eigenvectors

  /// x -> basis^T x
  void to_modal(std::span<const double> x, std::span<double> out) const;
  /// x -> basis x
  void from_modal(std::span<const double> x, std::span<double> out) const;
};

/// Cyclic Jacobi rotations until the off-diagonal Frobenius norm falls
/// below 1e-14 * ||M||_F. Eigenvalues within 1e-10 * ||M||_F of zero are
/// clamped to zero.
///
/// Throws std::invalid_argument for non-square or non-symmetric input and
/// std::domain_error when M has an eigenvalue below the clamping band.
SpectralCache spectral_decompose(const Matrix& m);

/// f(scale * M) x evaluated in the eigenbasis.
Vector apply_analytic(const std::function<double(double)>& f, const SpectralCache& cache,
                      double scale, std::span<const double> x);

/// basis * diag(d) * basis^T x for precomputed modal weights d.
Vector apply_modal_weights(std::span<const double> d, const SpectralCache& cache,
                           std::span<const double> x);

}  // namespace erkn
