#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "torushol/errors.hpp"
#include "torushol/matrix2.hpp"

namespace torushol {

/// One-sided Jacobi SVD of a tall complex matrix with four columns, enough
/// for the 8-unknown-as-4-complex intertwiner systems used here. Returns the
/// singular values (unsorted, per column) and the right singular vectors as
/// columns of V; the null direction of a rank-3 system is the V column of the
/// smallest singular value.
struct SmallSvd {
  std::array<double, 4> sigma{};
  std::array<std::array<cplx, 4>, 4> v{};  // v[col][row]

  int min_index() const {
    int best = 0;
    for (int i = 1; i < 4; ++i) {
      if (sigma[static_cast<std::size_t>(i)] < sigma[static_cast<std::size_t>(best)]) best = i;
    }
    return best;
  }

  double second_smallest() const {
    const int mi = min_index();
    double best = 1e300;
    for (int i = 0; i < 4; ++i) {
      if (i != mi) best = std::min(best, sigma[static_cast<std::size_t>(i)]);
    }
    return best;
  }
};

inline SmallSvd svd_four_columns(std::vector<std::array<cplx, 4>> rows) {
  const std::size_t n = rows.size();
  if (n < 4) throw Error("svd_four_columns: need at least 4 rows");
  // column-major working copy
  std::array<std::vector<cplx>, 4> col;
  for (int j = 0; j < 4; ++j) {
    col[static_cast<std::size_t>(j)].resize(n);
    for (std::size_t i = 0; i < n; ++i) col[static_cast<std::size_t>(j)][i] = rows[i][static_cast<std::size_t>(j)];
  }
  SmallSvd out;
  for (int j = 0; j < 4; ++j) {
    for (int i = 0; i < 4; ++i) out.v[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = (i == j) ? 1.0 : 0.0;
  }
  const double eps = 1e-15;
  for (int sweep = 0; sweep < 64; ++sweep) {
    bool rotated = false;
    for (int p = 0; p < 4; ++p) {
      for (int q = p + 1; q < 4; ++q) {
        auto& cp = col[static_cast<std::size_t>(p)];
        auto& cq = col[static_cast<std::size_t>(q)];
        double alpha = 0.0, beta = 0.0;
        cplx gamma = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          alpha += std::norm(cp[i]);
          beta += std::norm(cq[i]);
          gamma += std::conj(cp[i]) * cq[i];
        }
        const double g = std::abs(gamma);
        if (g <= eps * std::sqrt(alpha * beta) || g == 0.0) continue;
        rotated = true;
        const cplx phase = gamma / g;
        const double tau = (beta - alpha) / (2.0 * g);
        const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
        const double c = 1.0 / std::sqrt(1.0 + t * t);
        const double s = c * t;
        for (std::size_t i = 0; i < n; ++i) {
          const cplx vp = cp[i];
          const cplx vq = cq[i];
          cp[i] = c * vp - s * std::conj(phase) * vq;
          cq[i] = s * phase * vp + c * vq;
        }
        auto& wp = out.v[static_cast<std::size_t>(p)];
        auto& wq = out.v[static_cast<std::size_t>(q)];
        for (int i = 0; i < 4; ++i) {
          const cplx vp = wp[static_cast<std::size_t>(i)];
          const cplx vq = wq[static_cast<std::size_t>(i)];
          wp[static_cast<std::size_t>(i)] = c * vp - s * std::conj(phase) * vq;
          wq[static_cast<std::size_t>(i)] = s * phase * vp + c * vq;
        }
      }
    }
    if (!rotated) break;
  }
  for (int j = 0; j < 4; ++j) {
    double nn = 0.0;
    for (std::size_t i = 0; i < n; ++i) nn += std::norm(col[static_cast<std::size_t>(j)][i]);
    out.sigma[static_cast<std::size_t>(j)] = std::sqrt(nn);
  }
  return out;
}

}  // namespace torushol
