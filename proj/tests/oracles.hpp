#pragma once
// Independent reference computations used by the unit and acceptance tests.
// Nothing here calls into the library under test.

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include <Eigen/Dense>

namespace coword::oracle {

using Mat = std::vector<std::vector<double>>;

struct ChiSquare {
  Mat cells;
  double total = 0.0;
};

/// Pearson chi-square of a contingency table; with `yates`, cells whose
/// observed count is below 5 use max(0, |O-E| - 0.5).
template <typename Counts>
ChiSquare chi_square(const Counts& o, bool yates) {
  const auto r = static_cast<std::size_t>(o.rows());
  const auto c = static_cast<std::size_t>(o.cols());
  std::vector<double> rs(r, 0.0), cs(c, 0.0);
  double t = 0.0;
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) {
      const double v = static_cast<double>(o(i, k));
      rs[i] += v;
      cs[k] += v;
      t += v;
    }
  ChiSquare out;
  out.cells.assign(r, std::vector<double>(c, 0.0));
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t k = 0; k < c; ++k) {
      const double e = rs[i] * cs[k] / t;
      double d = std::abs(static_cast<double>(o(i, k)) - e);
      if (yates && o(i, k) < 5) d = std::max(0.0, d - 0.5);
      out.cells[i][k] = d * d / e;
      out.total += out.cells[i][k];
    }
  return out;
}

/// Cyclic Jacobi eigenvalue iteration for a symmetric matrix. Returns the
/// eigenvalues in descending order.
inline std::vector<double> jacobi_eigenvalues(Mat a) {
  const std::size_t n = a.size();
  for (int sweep = 0; sweep < 100; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a[p][q] * a[p][q];
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::abs(a[p][q]) < 1e-300) continue;
        const double theta = (a[q][q] - a[p][p]) / (2.0 * a[p][q]);
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a[k][p], akq = a[k][q];
          a[k][p] = c * akp - s * akq;
          a[k][q] = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a[p][k], aqk = a[q][k];
          a[p][k] = c * apk - s * aqk;
          a[q][k] = s * apk + c * aqk;
        }
      }
  }
  std::vector<double> ev(n);
  for (std::size_t i = 0; i < n; ++i) ev[i] = a[i][i];
  std::sort(ev.rbegin(), ev.rend());
  return ev;
}

/// Pearson correlation between the columns of `m`, from explicit sums.
inline Mat column_correlations(const Eigen::MatrixXd& m) {
  const auto n = m.rows();
  const auto p = m.cols();
  std::vector<double> mean(p, 0.0);
  for (Eigen::Index k = 0; k < p; ++k) {
    for (Eigen::Index i = 0; i < n; ++i) mean[k] += m(i, k);
    mean[k] /= static_cast<double>(n);
  }
  Mat r(p, std::vector<double>(p, 0.0));
  for (Eigen::Index a = 0; a < p; ++a)
    for (Eigen::Index b = 0; b < p; ++b) {
      double sab = 0, saa = 0, sbb = 0;
      for (Eigen::Index i = 0; i < n; ++i) {
        const double x = m(i, a) - mean[a], y = m(i, b) - mean[b];
        sab += x * y;
        saa += x * x;
        sbb += y * y;
      }
      r[a][b] = sab / std::sqrt(saa * sbb);
    }
  return r;
}

/// Raw varimax objective of a p x 2 loading block rotated by `angle`.
inline double varimax_objective(const Eigen::MatrixXd& l, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  const double p = static_cast<double>(l.rows());
  double total = 0.0;
  for (int f = 0; f < 2; ++f) {
    double s2 = 0, s4 = 0;
    for (Eigen::Index j = 0; j < l.rows(); ++j) {
      const double v = f == 0 ? l(j, 0) * c + l(j, 1) * s : -l(j, 0) * s + l(j, 1) * c;
      s2 += v * v;
      s4 += v * v * v * v;
    }
    total += p * s4 - s2 * s2;
  }
  return total;
}

/// Best rotation angle (radians, in [0, pi/2)) on a 0.1 degree grid.
inline double varimax_grid_angle(const Eigen::MatrixXd& l) {
  double best = -1.0, best_angle = 0.0;
  for (int step = 0; step < 900; ++step) {
    const double angle = step * 0.1 * std::numbers::pi / 180.0;
    const double v = varimax_objective(l, angle);
    if (v > best) {
      best = v;
      best_angle = angle;
    }
  }
  return best_angle;
}

/// Distance between two angles modulo a quarter turn, in degrees.
inline double quarter_turn_distance_deg(double a, double b) {
  const double q = std::numbers::pi / 2.0;
  double d = std::fmod(std::abs(a - b), q);
  d = std::min(d, q - d);
  return d * 180.0 / std::numbers::pi;
}

/// Rows of `l` scaled to unit length (zero rows left alone).
inline Eigen::MatrixXd row_normalized(Eigen::MatrixXd l) {
  for (Eigen::Index j = 0; j < l.rows(); ++j) {
    const double n = l.row(j).norm();
    if (n > 0) l.row(j) /= n;
  }
  return l;
}

}  // namespace coword::oracle
