#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <limits>

namespace wproc {

using Complex = std::complex<double>;
using DenseMatrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using Index = Eigen::Index;

/// Tolerance knobs shared by every rank, hermiticity and residual decision.
///
/// A single profile travels with each problem so that all subspace dimensions
/// are decided by one rank policy and all approximate identities are checked
/// against one residual scale.
struct ToleranceProfile {
  /// Relative singular-value cutoff; a singular value counts as zero when
  /// sigma <= rank_rtol * sigma_max * max(rows, cols).
  double rank_rtol = 64.0 * std::numeric_limits<double>::epsilon();
  /// Absolute bound on max|M - M*| accepted (and symmetrized away) when
  /// constructing a PsdMatrix.
  double herm_tol = 1e-10;
  /// Slack for positive-semidefiniteness tests, scaled by (1 + max eigenvalue).
  double psd_tol = 1e-10;
  /// Slack for residual identities (Q^2 = Q, reconstruction, containment...).
  double residual_tol = 1e-8;

  [[nodiscard]] double rank_cutoff(double sigma_max, Index rows, Index cols) const {
    return rank_rtol * sigma_max * static_cast<double>(std::max(rows, cols));
  }

  [[nodiscard]] bool valid() const {
    return rank_rtol >= 0 && herm_tol >= 0 && psd_tol >= 0 && residual_tol >= 0;
  }
};

inline bool is_finite(const DenseMatrix& m) { return m.allFinite(); }

/// Max absolute entry; zero for empty matrices.
inline double max_abs(const DenseMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace wproc
