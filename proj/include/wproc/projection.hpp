#pragma once

#include <sstream>
#include <utility>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/subspace.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Idempotent Q with prescribed range and nullspace (Q x = x on range,
/// Q x = 0 on null).
struct ObliqueProjection {
  DenseMatrix matrix;
  Subspace range;
  Subspace null;
};

/// Projection onto m along n.  Requires m and n to split the space:
/// dim m + dim n = ambient and trivial intersection.
///
/// Computed by solving Q [B_m B_n] = [B_m 0] through the pseudoinverse of the
/// concatenated basis.
inline ObliqueProjection oblique_projection(const Subspace& m, const Subspace& n) {
  detail::ensure_same_ambient(m, n, "oblique_projection");
  const Index dim = m.ambient_dim();
  if (m.dim() + n.dim() != dim) {
    std::ostringstream os;
    os << "oblique_projection: dim " << m.dim() << " + " << n.dim()
       << " does not equal ambient " << dim;
    throw NotDirectSumError(os.str());
  }
  DenseMatrix cat(dim, dim);
  cat << m.basis(), n.basis();
  const SvdFactors f = svd(cat, m.tol());
  if (f.numeric_rank != dim) {
    throw NotDirectSumError("oblique_projection: subspaces intersect nontrivially");
  }
  DenseMatrix rhs = DenseMatrix::Zero(dim, dim);
  rhs.leftCols(m.dim()) = m.basis();
  DenseMatrix q = rhs * pinv(cat, m.tol());
  return ObliqueProjection{std::move(q), m, n};
}

/// W-hermitian test: max|WQ - Q*W| <= residual_tol * (1 + ||W||).
inline bool is_w_hermitian(const ObliqueProjection& q, const PsdMatrix& w,
                           const ToleranceProfile& tol = {}) {
  if (w.dim() != q.matrix.rows()) {
    throw ShapeError("is_w_hermitian: dimensions disagree");
  }
  const DenseMatrix diff = w.matrix() * q.matrix - q.matrix.adjoint() * w.matrix();
  return max_abs(diff) <= tol.residual_tol * (1.0 + operator_norm(w.matrix()));
}

/// Canonical W-hermitian projection onto s:
/// P_{S || S^{perp_W} (-) (S cap S^{perp_W})}.
///
/// Always exists at finite dimension; DecompositionFailed signals a tolerance
/// breakdown in the computed complement, not a mathematical failure.
inline ObliqueProjection compatible_projection(const PsdMatrix& w, const Subspace& s) {
  const Subspace wperp = w_orth_complement(w, s);
  const Subspace overlap = subspace_intersection(s, wperp);
  const Subspace complement = subspace_intersection(wperp, orth_complement(overlap));
  if (s.dim() + complement.dim() != s.ambient_dim()) {
    throw DecompositionFailedError(
        "compatible_projection: complement does not complete a direct sum");
  }
  try {
    return oblique_projection(s, complement);
  } catch (const NotDirectSumError& e) {
    throw DecompositionFailedError(std::string("compatible_projection: ") + e.what());
  }
}

/// Douglas range inclusion R(Z) subset of R(Y).
inline bool douglas_check(const DenseMatrix& z, const DenseMatrix& y,
                          const ToleranceProfile& tol = {}) {
  if (z.rows() != y.rows()) {
    throw ShapeError("douglas_check: row counts disagree");
  }
  return contains(range_of(y, tol), range_of(z, tol));
}

/// Reduced Douglas factor D0 = Y^dagger Z, the unique solution of Z = Y X
/// with R(D0) orthogonal to N(Y).  ||D0||^2 = min{lambda : Z Z* <= lambda Y Y*}.
inline DenseMatrix douglas_factor(const DenseMatrix& z, const DenseMatrix& y,
                                  const ToleranceProfile& tol = {}) {
  if (!douglas_check(z, y, tol)) {
    throw RangeNotIncludedError("douglas_factor: R(Z) not contained in R(Y)");
  }
  return pinv(y, tol) * z;
}

}  // namespace wproc
