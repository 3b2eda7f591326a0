#pragma once

// Lawson-Hanson active-set method for
//
//   min ||A z - b||   subject to z_j >= 0 for every j not marked free.
//
// Free variables start in the passive set and never leave it. Sub-problems
// are solved with a rank-revealing complete orthogonal decomposition, so
// rank-deficient columns are handled.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace mtvar::detail {

struct NnlsResult {
  Eigen::VectorXd z;
  int iterations = 0;
  bool converged = false;
};

inline Eigen::VectorXd solve_passive(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                     const std::vector<bool>& passive) {
  std::vector<Eigen::Index> cols;
  for (Eigen::Index j = 0; j < A.cols(); ++j)
    if (passive[j]) cols.push_back(j);
  Eigen::VectorXd s = Eigen::VectorXd::Zero(A.cols());
  if (cols.empty()) return s;
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t c = 0; c < cols.size(); ++c) sub.col(static_cast<Eigen::Index>(c)) = A.col(cols[c]);
  const Eigen::VectorXd sol = sub.completeOrthogonalDecomposition().solve(b);
  for (std::size_t c = 0; c < cols.size(); ++c) s[cols[c]] = sol[static_cast<Eigen::Index>(c)];
  return s;
}

inline NnlsResult bounded_least_squares(const Eigen::MatrixXd& A, const Eigen::VectorXd& b,
                                        const std::vector<bool>& is_free, int max_iterations = 0) {
  const Eigen::Index n = A.cols();
  if (max_iterations <= 0) max_iterations = static_cast<int>(3 * n + 30);
  std::vector<bool> passive(is_free);
  NnlsResult out;
  out.z = solve_passive(A, b, passive);
  const double tol = 10.0 * std::numeric_limits<double>::epsilon() * A.cwiseAbs().colwise().sum().maxCoeff() *
                     std::max<double>(1.0, static_cast<double>(std::max(A.rows(), n)));

  for (out.iterations = 0; out.iterations < max_iterations; ++out.iterations) {
    const Eigen::VectorXd w = A.transpose() * (b - A * out.z);
    Eigen::Index best = -1;
    double best_w = tol;
    for (Eigen::Index j = 0; j < n; ++j)
      if (!passive[j] && w[j] > best_w) {
        best_w = w[j];
        best = j;
      }
    if (best < 0) {
      out.converged = true;
      return out;
    }
    passive[best] = true;

    for (int inner = 0; inner <= n; ++inner) {
      Eigen::VectorXd s = solve_passive(A, b, passive);
      double alpha = 1.0;
      bool clipped = false;
      for (Eigen::Index j = 0; j < n; ++j) {
        if (!passive[j] || is_free[j] || s[j] > 0.0) continue;
        const double denom = out.z[j] - s[j];
        const double a = denom > 0.0 ? out.z[j] / denom : 0.0;
        if (a < alpha) alpha = a;
        clipped = true;
      }
      if (!clipped) {
        out.z = s;
        break;
      }
      out.z += alpha * (s - out.z);
      const double zero = 1e-14 * std::max(1.0, out.z.cwiseAbs().maxCoeff());
      for (Eigen::Index j = 0; j < n; ++j)
        if (passive[j] && !is_free[j] && out.z[j] <= zero) {
          passive[j] = false;
          out.z[j] = 0.0;
        }
    }
  }
  return out;
}

}  // namespace mtvar::detail
