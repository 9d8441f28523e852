#pragma once

#include <sstream>
#include <utility>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Closed subspace of C^n held as an orthonormal basis (n x k, k possibly 0).
///
/// The zero-dimensional subspace is a first-class value so degenerate cases
/// flow through the set arithmetic without branching.  Every Subspace carries
/// the tolerance profile that decided its rank.
class Subspace {
 public:
  Subspace(Index ambient_dim, DenseMatrix basis, const ToleranceProfile& tol = {})
      : ambient_(ambient_dim), basis_(std::move(basis)), tol_(tol) {
    if (basis_.rows() != ambient_ || basis_.cols() > ambient_) {
      std::ostringstream os;
      os << "Subspace: basis " << basis_.rows() << "x" << basis_.cols()
         << " does not fit ambient dimension " << ambient_;
      throw ShapeError(os.str());
    }
    detail::ensure_finite(basis_, "Subspace");
    if (basis_.cols() > 0) {
      const DenseMatrix gram = basis_.adjoint() * basis_;
      const double err = max_abs(gram - DenseMatrix::Identity(basis_.cols(), basis_.cols()));
      if (err > tol_.residual_tol) {
        std::ostringstream os;
        os << "Subspace: basis columns not orthonormal, deviation " << err;
        throw NumericsError(os.str());
      }
    }
  }

  static Subspace zero(Index ambient_dim, const ToleranceProfile& tol = {}) {
    return Subspace(ambient_dim, DenseMatrix::Zero(ambient_dim, 0), tol);
  }

  static Subspace full(Index ambient_dim, const ToleranceProfile& tol = {}) {
    return Subspace(ambient_dim, DenseMatrix::Identity(ambient_dim, ambient_dim), tol);
  }

  /// Span of a single vector (the zero vector spans the zero subspace).
  static Subspace span_of(const Vector& x, const ToleranceProfile& tol = {});

  [[nodiscard]] Index ambient_dim() const { return ambient_; }
  [[nodiscard]] Index dim() const { return basis_.cols(); }
  [[nodiscard]] const DenseMatrix& basis() const { return basis_; }
  [[nodiscard]] const ToleranceProfile& tol() const { return tol_; }

  /// Orthogonal projector B B* onto the subspace.
  [[nodiscard]] DenseMatrix projector() const { return basis_ * basis_.adjoint(); }

 private:
  Index ambient_;
  DenseMatrix basis_;
  ToleranceProfile tol_;
};

namespace detail {

inline void ensure_same_ambient(const Subspace& a, const Subspace& b, const char* where) {
  if (a.ambient_dim() != b.ambient_dim()) {
    std::ostringstream os;
    os << where << ": ambient dimensions disagree (" << a.ambient_dim() << " vs "
       << b.ambient_dim() << ")";
    throw ShapeError(os.str());
  }
}

}  // namespace detail

/// Column space of m as an orthonormal basis; dim equals the numeric rank.
inline Subspace range_of(const DenseMatrix& m, const ToleranceProfile& tol = {}) {
  const SvdFactors f = svd(m, tol);
  return Subspace(m.rows(), f.u, tol);
}

/// Nullspace of m; dim = cols - numeric rank.
inline Subspace nullspace_of(const DenseMatrix& m, const ToleranceProfile& tol = {}) {
  if (m.rows() == 0 || m.cols() == 0) {
    // No constraints (or no variables): the nullspace is everything.
    return Subspace::full(m.cols(), tol);
  }
  const auto dec = detail::full_svd(m, "nullspace_of");
  const Index r = detail::count_rank(dec.singularValues(), tol, m.rows(), m.cols());
  return Subspace(m.cols(), dec.matrixV().rightCols(m.cols() - r), tol);
}

inline Subspace orth_complement(const Subspace& s) {
  return nullspace_of(s.basis().adjoint(), s.tol());
}

inline Subspace Subspace::span_of(const Vector& x, const ToleranceProfile& tol) {
  return range_of(x, tol);
}

/// Span of the union of the two bases; dim via the rank of the concatenation.
inline Subspace subspace_sum(const Subspace& a, const Subspace& b) {
  detail::ensure_same_ambient(a, b, "subspace_sum");
  DenseMatrix cat(a.ambient_dim(), a.dim() + b.dim());
  cat << a.basis(), b.basis();
  return range_of(cat, a.tol());
}

/// Intersection via the complement of the sum of complements.
inline Subspace subspace_intersection(const Subspace& a, const Subspace& b) {
  detail::ensure_same_ambient(a, b, "subspace_intersection");
  return orth_complement(subspace_sum(orth_complement(a), orth_complement(b)));
}

/// W-orthogonal complement S^{perp_W} = {x : <Wx, s> = 0 for all s in S},
/// computed as the nullspace of B_S* W.
inline Subspace w_orth_complement(const PsdMatrix& w, const Subspace& s) {
  if (w.dim() != s.ambient_dim()) {
    throw ShapeError("w_orth_complement: weight dimension does not match ambient");
  }
  return nullspace_of(s.basis().adjoint() * w.matrix(), s.tol());
}

/// True iff inner lies inside outer within the outer residual tolerance.
inline bool contains(const Subspace& outer, const Subspace& inner) {
  detail::ensure_same_ambient(outer, inner, "contains");
  if (inner.dim() == 0) return true;
  const DenseMatrix rest = inner.basis() - outer.projector() * inner.basis();
  return operator_norm(rest) <= outer.tol().residual_tol;
}

/// Mutual containment with matching dimensions.
inline bool equal_subspaces(const Subspace& a, const Subspace& b) {
  return a.dim() == b.dim() && contains(a, b) && contains(b, a);
}

}  // namespace wproc
