#include "erkn/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace erkn {

namespace {

constexpr double kOffDiagonalTol = 1e-14;
constexpr double kClampBand = 1e-10;
constexpr double kSymmetryTol = 1e-12;
constexpr int kMaxSweeps = 100;

double off_diagonal_norm(const Matrix& a) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j)
      if (i != j) s += a(i, j) * a(i, j);
  return std::sqrt(s);
}

double frobenius(const Matrix& a) {
  double s = 0.0;
  for (double x : a.data()) s += x * x;
  return std::sqrt(s);
}

// One rotation annihilating a(p,q), applied to a and accumulated into v.
void rotate(Matrix& a, Matrix& v, std::size_t p, std::size_t q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  const double t = std::copysign(1.0, theta) / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k < n; ++k) {
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = c * akp - s * akq;
    a(k, q) = s * akp + c * akq;
  }
  for (std::size_t k = 0; k < n; ++k) {
    const double apk = a(p, k);
    const double aqk = a(q, k);
    a(p, k) = c * apk - s * aqk;
    a(q, k) = s * apk + c * aqk;
  }
  a(p, q) = 0.0;
  a(q, p) = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

SpectralCache spectral_decompose(const Matrix& m) {
  if (!m.square() || m.rows() == 0)
    throw std::invalid_argument("spectral_decompose: matrix must be square and nonempty");
  const std::size_t n = m.rows();
  const double scale = m.max_abs();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > kSymmetryTol * scale)
        throw std::invalid_argument("spectral_decompose: matrix is not symmetric");

  Matrix a = m;
  Matrix v = Matrix::identity(n);
  const double norm = frobenius(m);
  for (int sweep = 0; sweep < kMaxSweeps; ++sweep) {
    if (off_diagonal_norm(a) <= kOffDiagonalTol * norm) break;
    for (std::size_t p = 0; p + 1 < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) rotate(a, v, p, q);
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t x, std::size_t y) { return a(x, x) < a(y, y); });

  SpectralCache cache;
  cache.dim = n;
  cache.eigenvalues.resize(n);
  cache.basis = Matrix(n, n);
  for (std::size_t col = 0; col < n; ++col) {
    double lambda = a(order[col], order[col]);
    if (lambda < -kClampBand * norm)
      throw std::domain_error("spectral_decompose: matrix is not positive semi-definite");
    // Roundoff-level eigenvalues (either sign) are the kernel of M.
    if (std::abs(lambda) <= kClampBand * norm) lambda = 0.0;
    cache.eigenvalues[col] = lambda;
    // Sign convention: largest-magnitude component positive.
    std::size_t arg = 0;
    for (std::size_t k = 1; k < n; ++k)
      if (std::abs(v(k, order[col])) > std::abs(v(arg, order[col])) + 1e-12) arg = k;
    const double sign = v(arg, order[col]) < 0.0 ? -1.0 : 1.0;
    for (std::size_t k = 0; k < n; ++k) cache.basis(k, col) = sign * v(k, order[col]);
  }
  return cache;
}

void SpectralCache::to_modal(std::span<const double> x, std::span<double> out) const {
  basis.multiply_transposed(x, out);
}

void SpectralCache::from_modal(std::span<const double> x, std::span<double> out) const {
  basis.multiply(x, out);
}

Vector apply_modal_weights(std::span<const double> d, const SpectralCache& cache,
                           std::span<const double> x) {
  if (x.size() != cache.dim || d.size() != cache.dim)
    throw std::invalid_argument("apply_modal_weights: dimension mismatch");
  Vector modal(cache.dim);
  cache.to_modal(x, modal);
  for (std::size_t k = 0; k < cache.dim; ++k) modal[k] *= d[k];
  Vector out(cache.dim);
  cache.from_modal(modal, out);
  return out;
}

Vector apply_analytic(const std::function<double(double)>& f, const SpectralCache& cache,
                      double scale, std::span<const double> x) {
  if (!(scale >= 0.0)) throw std::domain_error("apply_analytic: scale must be nonnegative");
  Vector d(cache.dim);
  for (std::size_t k = 0; k < cache.dim; ++k) d[k] = f(scale * cache.eigenvalues[k]);
  return apply_modal_weights(d, cache, x);
}

}  // namespace erkn
