// Independent least-squares oracle: explicit normal equations X^T X w = X^T y
// solved by Gaussian elimination, no Eigen.
#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "leeway/displacement.hpp"

namespace refls {

/// Returns the 2x4 weight matrix fitted by normal equations.
inline std::array<std::array<double, 4>, 2> fit(
    const std::vector<leeway::DisplacementSample>& samples) {
  double xtx[4][4] = {};
  double xty[4][2] = {};
  for (const auto& s : samples) {
    const double f[4] = {s.features.f_along, s.features.f_cross,
                         s.features.v_cmd, s.features.bias};
    const double e[2] = {s.e_along, s.e_cross};
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) xtx[i][j] += f[i] * f[j];
      for (int c = 0; c < 2; ++c) xty[i][c] += f[i] * e[c];
    }
  }

  // Gaussian elimination with partial pivoting on the 4x4 system, two RHS
  double a[4][6];
  std::array<std::array<double, 4>, 2> w{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) a[i][j] = xtx[i][j];
    a[i][4] = xty[i][0];
    a[i][5] = xty[i][1];
  }
  for (int col = 0; col < 4; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    for (int c = 0; c < 6; ++c) std::swap(a[col][c], a[pivot][c]);
    if (a[col][col] == 0.0) throw std::runtime_error("singular normal equations");
    for (int r = 0; r < 4; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (int c = col; c < 6; ++c) a[r][c] -= f * a[col][c];
    }
  }
  for (int i = 0; i < 4; ++i) {
    w[0][static_cast<std::size_t>(i)] = a[i][4] / a[i][i];
    w[1][static_cast<std::size_t>(i)] = a[i][5] / a[i][i];
  }
  return w;
}

}  // namespace refls
