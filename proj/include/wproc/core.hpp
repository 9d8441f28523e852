#pragma once

#include <Eigen/Dense>

#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wproc/errors.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Rank-truncated singular value decomposition m = u * diag(singular) * vt.
///
/// u is rows x r with orthonormal columns, vt is r x cols with orthonormal
/// rows, and r = numeric_rank is the number of singular values above the
/// rank cutoff of the profile used to compute it.
struct SvdFactors {
  DenseMatrix u;
  std::vector<double> singular;
  DenseMatrix vt;
  Index numeric_rank = 0;
};

namespace detail {

inline std::string shape_string(const DenseMatrix& m) {
  std::ostringstream os;
  os << m.rows() << "x" << m.cols();
  return os.str();
}

inline void ensure_finite(const DenseMatrix& m, const char* where) {
  if (!is_finite(m)) {
    throw NumericsError(std::string(where) + ": non-finite entries in " +
                        shape_string(m) + " matrix");
  }
}

/// Full-size Jacobi SVD with a guard for zero-dimensional operands, which
/// Eigen does not accept.
inline Eigen::JacobiSVD<DenseMatrix> full_svd(const DenseMatrix& m, const char* where) {
  ensure_finite(m, where);
  Eigen::JacobiSVD<DenseMatrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  if (svd.info() != Eigen::Success) {
    throw NumericsError(std::string(where) + ": SVD iteration failed on " +
                        shape_string(m) + " matrix");
  }
  return svd;
}

inline Index count_rank(const Eigen::VectorXd& sigma, const ToleranceProfile& tol,
                        Index rows, Index cols) {
  if (sigma.size() == 0) return 0;
  const double cutoff = tol.rank_cutoff(sigma(0), rows, cols);
  Index r = 0;
  while (r < sigma.size() && sigma(r) > cutoff) ++r;
  return r;
}

}  // namespace detail

/// Singular value decomposition truncated at the numeric rank.
inline SvdFactors svd(const DenseMatrix& m, const ToleranceProfile& tol = {}) {
  SvdFactors out;
  if (m.rows() == 0 || m.cols() == 0) {
    out.u = DenseMatrix::Zero(m.rows(), 0);
    out.vt = DenseMatrix::Zero(0, m.cols());
    return out;
  }
  const auto dec = detail::full_svd(m, "svd");
  const Eigen::VectorXd sigma = dec.singularValues();
  const Index r = detail::count_rank(sigma, tol, m.rows(), m.cols());
  out.u = dec.matrixU().leftCols(r);
  out.vt = dec.matrixV().leftCols(r).adjoint();
  out.singular.assign(sigma.data(), sigma.data() + r);
  out.numeric_rank = r;
  return out;
}

/// Moore-Penrose pseudoinverse via the rank-truncated SVD.
inline DenseMatrix pinv(const DenseMatrix& m, const ToleranceProfile& tol = {}) {
  const SvdFactors f = svd(m, tol);
  DenseMatrix out = DenseMatrix::Zero(m.cols(), m.rows());
  for (Index i = 0; i < f.numeric_rank; ++i) {
    out.noalias() += (1.0 / f.singular[static_cast<std::size_t>(i)]) *
                     f.vt.row(i).adjoint() * f.u.col(i).adjoint();
  }
  return out;
}

/// Largest singular value (zero for empty matrices).
inline double operator_norm(const DenseMatrix& m) {
  if (m.rows() == 0 || m.cols() == 0) return 0.0;
  detail::ensure_finite(m, "operator_norm");
  return m.jacobiSvd().singularValues()(0);
}

/// Copy of m with singular values at or below the rank cutoff for an
/// externally supplied scale flushed to exactly zero.  Rank decisions made
/// relative to a matrix's own largest singular value can never recognize an
/// all-roundoff matrix as zero; expressions with a known natural scale (for
/// example residues bounded by ||W||) use this to pin their vanishing parts.
inline DenseMatrix flush_below(const DenseMatrix& m, double scale,
                               const ToleranceProfile& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) return m;
  const SvdFactors f = svd(m, tol);
  const double cutoff = tol.rank_cutoff(scale, m.rows(), m.cols());
  DenseMatrix out = DenseMatrix::Zero(m.rows(), m.cols());
  for (Index i = 0; i < f.numeric_rank; ++i) {
    const double s = f.singular[static_cast<std::size_t>(i)];
    if (s > cutoff) out.noalias() += s * f.u.col(i) * f.vt.row(i);
  }
  return out;
}

/// Hermitian positive semidefinite matrix.
///
/// Construction symmetrizes via (M + M*)/2 when the asymmetry is within
/// herm_tol and rejects otherwise, so roundoff is absorbed without masking
/// genuine asymmetry.  Positivity is checked as
/// min eigenvalue >= -psd_tol * (1 + max eigenvalue).
class PsdMatrix {
 public:
  explicit PsdMatrix(const DenseMatrix& m, const ToleranceProfile& tol = {}) {
    if (m.rows() != m.cols()) {
      throw ShapeError("PsdMatrix: matrix must be square, got " + detail::shape_string(m));
    }
    detail::ensure_finite(m, "PsdMatrix");
    const double asym = max_abs(m - m.adjoint());
    if (asym > tol.herm_tol) {
      std::ostringstream os;
      os << "PsdMatrix: asymmetry " << asym << " exceeds herm_tol " << tol.herm_tol;
      throw NotHermitianError(os.str());
    }
    matrix_ = 0.5 * (m + m.adjoint());
    if (matrix_.rows() > 0) {
      Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(matrix_, Eigen::EigenvaluesOnly);
      if (eig.info() != Eigen::Success) {
        throw NumericsError("PsdMatrix: eigenvalue iteration failed");
      }
      const double lo = eig.eigenvalues().minCoeff();
      const double hi = eig.eigenvalues().maxCoeff();
      if (lo < -tol.psd_tol * (1.0 + hi)) {
        std::ostringstream os;
        os << "PsdMatrix: min eigenvalue " << lo << " below -psd_tol*(1+" << hi << ")";
        throw NotPsdError(os.str());
      }
    }
  }

  static PsdMatrix identity(Index n) { return PsdMatrix(DenseMatrix::Identity(n, n)); }
  static PsdMatrix zero(Index n) { return PsdMatrix(DenseMatrix::Zero(n, n)); }

  [[nodiscard]] const DenseMatrix& matrix() const { return matrix_; }
  [[nodiscard]] Index dim() const { return matrix_.rows(); }

 private:
  DenseMatrix matrix_;
};

/// Positive square root of w.  Eigenvalues at or below the rank cutoff
/// (negative roundoff included) are flushed to exactly zero: without this a
/// numerically singular w acquires sqrt(eps)-sized ghost directions that
/// dominate seminorms whose true value is zero.
inline PsdMatrix psd_sqrt(const PsdMatrix& w, const ToleranceProfile& tol = {}) {
  if (w.dim() == 0) return w;
  Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(w.matrix());
  if (eig.info() != Eigen::Success) {
    throw NumericsError("psd_sqrt: eigenvalue iteration failed");
  }
  Eigen::VectorXd lam = eig.eigenvalues();
  const double cutoff = tol.rank_cutoff(lam.cwiseAbs().maxCoeff(), w.dim(), w.dim());
  for (Index i = 0; i < lam.size(); ++i) {
    lam(i) = lam(i) > cutoff ? std::sqrt(lam(i)) : 0.0;
  }
  DenseMatrix root = eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
  return PsdMatrix(root, tol);
}

}  // namespace wproc
