#pragma once

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/projection.hpp"
#include "wproc/subspace.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Shorted operator W_{/S} and compression W_S = W - W_{/S}.
///
/// W_{/S} is the largest X in the positive-operator order with 0 <= X <= W
/// and R(X) inside S^perp; shorting to S leaves the mass supported on S^perp.
struct ShortedPair {
  PsdMatrix shorted;
  PsdMatrix compression;
};

/// Shorting through the weighted square root: with C = W^{1/2} and P the
/// orthogonal projector onto R(C B_S),
///
///   W_{/S} = C (I - P) C = G* G,  G = (I - P) C,
///   W_S    = C P C       = H* H,  H = P C,
///
/// which is the generalized Schur complement of the S-block in factored form
/// (eliminating S against itself leaves exactly the part of C invisible from
/// C S).  Working with G and H instead of the block formula
/// c - b* a^dagger b keeps the computation at condition number kappa(C)
/// rather than kappa(C)^2, makes both outputs hermitian by construction, and
/// lets singular values below the ||C||-scale rank cutoff be flushed, so a
/// shorted operator that vanishes in theory vanishes bit-for-bit here.
inline ShortedPair short_to(const PsdMatrix& w, const Subspace& s,
                            const ToleranceProfile& tol = {}) {
  if (w.dim() != s.ambient_dim()) {
    throw ShapeError("short_to: weight dimension does not match ambient");
  }
  const DenseMatrix c = psd_sqrt(w, tol).matrix();
  const DenseMatrix p = range_of(c * s.basis(), tol).projector();
  const DenseMatrix eye = DenseMatrix::Identity(w.dim(), w.dim());
  const double scale = operator_norm(c);
  const DenseMatrix g = flush_below((eye - p) * c, scale, tol);
  const DenseMatrix h = flush_below(p * c, scale, tol);
  PsdMatrix shorted(g.adjoint() * g, tol);
  PsdMatrix compression(h.adjoint() * h, tol);
  return ShortedPair{std::move(shorted), std::move(compression)};
}

/// Range/nullspace identities of the shorted operator; at finite dimension
/// both must hold.
struct ShortedRangeReport {
  bool range_equality = false;      // R(W_{/S}) = R(W) cap S^perp
  bool nullspace_equality = false;  // N(W_{/S}) = N(W) + S
};

inline ShortedRangeReport shorted_range_nullspace_report(const PsdMatrix& w,
                                                         const Subspace& s,
                                                         const ToleranceProfile& tol = {}) {
  const ShortedPair pair = short_to(w, s, tol);
  const Subspace r_shorted = range_of(pair.shorted.matrix(), tol);
  const Subspace n_shorted = nullspace_of(pair.shorted.matrix(), tol);
  const Subspace r_w = range_of(w.matrix(), tol);
  const Subspace n_w = nullspace_of(w.matrix(), tol);
  ShortedRangeReport report;
  report.range_equality =
      equal_subspaces(r_shorted, subspace_intersection(r_w, orth_complement(s)));
  report.nullspace_equality = equal_subspaces(n_shorted, subspace_sum(n_w, s));
  return report;
}

/// E* W E for a projection E with N(E) = S; one member of the family whose
/// infimum is W_{/S}.
inline PsdMatrix projection_family_value(const PsdMatrix& w, const Subspace& s,
                                         const ObliqueProjection& e) {
  if (w.dim() != e.matrix.rows() || w.dim() != s.ambient_dim()) {
    throw ShapeError("projection_family_value: dimensions disagree");
  }
  const Subspace actual_null = nullspace_of(e.matrix, s.tol());
  if (!equal_subspaces(actual_null, s)) {
    throw NullspaceMismatchError(
        "projection_family_value: projection nullspace is not the shorting subspace");
  }
  return PsdMatrix(e.matrix.adjoint() * w.matrix() * e.matrix, s.tol());
}

}  // namespace wproc
