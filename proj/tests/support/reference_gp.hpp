// Independent dense GP oracle for cross-checking the production path.
// Deliberately avoids Eigen and Cholesky: plain Gauss-Jordan elimination on
// the full kernel matrix, log-determinant from LU pivots.
#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "leeway/forcefield.hpp"

namespace refgp {

using Matrix = std::vector<std::vector<double>>;

inline double kernel(const leeway::LocalPoint& a, const leeway::LocalPoint& b,
                     const leeway::GpHyperparams& h) {
  const double r = leeway::distance(a, b);
  const double s = std::sqrt(3.0) * r / h.length_scale;
  return h.signal_std * h.signal_std * (1.0 + s) * std::exp(-s);
}

/// Solve A x = b by Gaussian elimination with partial pivoting.
/// Also accumulates log|det A| (A is SPD here, so det > 0).
inline std::vector<double> solve(Matrix a, std::vector<double> b,
                                 double* logdet = nullptr) {
  const std::size_t n = a.size();
  double ld = 0.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular matrix");
    ld += std::log(std::abs(a[col][col]));
    for (std::size_t r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n);
  for (std::size_t i = n; i-- > 0;) {
    double s = b[i];
    for (std::size_t c = i + 1; c < n; ++c) s -= a[i][c] * x[c];
    x[i] = s / a[i][i];
  }
  if (logdet) *logdet = ld;
  return x;
}

struct Posterior {
  double mean_x, mean_y, variance;
};

inline Matrix gram(const std::vector<leeway::ForceSample>& samples,
                   const leeway::GpHyperparams& h) {
  const std::size_t n = samples.size();
  Matrix k(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      k[i][j] = kernel(samples[i].position, samples[j].position, h);
  for (std::size_t i = 0; i < n; ++i) k[i][i] += h.noise_std * h.noise_std;
  return k;
}

inline Posterior predict(const std::vector<leeway::ForceSample>& samples,
                         const leeway::GpHyperparams& h,
                         const leeway::LocalPoint& q) {
  const std::size_t n = samples.size();
  const Matrix k = gram(samples, h);
  std::vector<double> yx(n), yy(n), ks(n);
  for (std::size_t i = 0; i < n; ++i) {
    yx[i] = samples[i].vector.x;
    yy[i] = samples[i].vector.y;
    ks[i] = kernel(q, samples[i].position, h);
  }
  const auto ax = solve(k, yx);
  const auto ay = solve(k, yy);
  const auto kinv_ks = solve(k, ks);
  Posterior p{0.0, 0.0, 0.0};
  double quad = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    p.mean_x += ks[i] * ax[i];
    p.mean_y += ks[i] * ay[i];
    quad += ks[i] * kinv_ks[i];
  }
  p.variance = std::max(0.0, h.signal_std * h.signal_std - quad);
  return p;
}

/// Summed (vx, vy) log marginal likelihood via the same direct route.
inline double log_marginal_likelihood(
    const std::vector<leeway::ForceSample>& samples,
    const leeway::GpHyperparams& h) {
  const std::size_t n = samples.size();
  const Matrix k = gram(samples, h);
  std::vector<double> yx(n), yy(n);
  for (std::size_t i = 0; i < n; ++i) {
    yx[i] = samples[i].vector.x;
    yy[i] = samples[i].vector.y;
  }
  double logdet = 0.0;
  const auto ax = solve(k, yx, &logdet);
  const auto ay = solve(k, yy);
  double fit_x = 0.0, fit_y = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    fit_x += yx[i] * ax[i];
    fit_y += yy[i] * ay[i];
  }
  const double log2pi = std::log(2.0 * 3.14159265358979323846);
  const double nn = static_cast<double>(n);
  return -0.5 * fit_x - 0.5 * fit_y - logdet - nn * log2pi;
}

}  // namespace refgp
