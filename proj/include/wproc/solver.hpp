#pragma once

#include <utility>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/projection.hpp"
#include "wproc/schatten.hpp"
#include "wproc/shorted.hpp"
#include "wproc/subspace.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// The weighted approximation problem min_X ||W^{1/2}(A X - B)||_p.
struct ProcrustesProblem {
  DenseMatrix a;  // n x k
  DenseMatrix b;  // n x m
  PsdMatrix w;    // n x n
  SchattenOrder p;
  ToleranceProfile tol;

  ProcrustesProblem(DenseMatrix a_, DenseMatrix b_, PsdMatrix w_, SchattenOrder p_,
                    ToleranceProfile tol_ = {})
      : a(std::move(a_)), b(std::move(b_)), w(std::move(w_)), p(p_), tol(tol_) {
    if (a.rows() != b.rows() || a.rows() != w.dim()) {
      throw ShapeError("ProcrustesProblem: rows(A), rows(B) and dim(W) must agree");
    }
    detail::ensure_finite(a, "ProcrustesProblem");
    detail::ensure_finite(b, "ProcrustesProblem");
  }
};

/// Canonical minimizer plus the exact minimum data.
///
/// The full solution set is x0 + {L : R(L) inside manifold_nullspace}.
struct ProcrustesSolution {
  DenseMatrix x0;              // (A*WA)^dagger A*WB, rows orthogonal to N(A*WA)
  double min_value = 0.0;      // ||W_{/R(A)}^{1/2} B||_p
  PsdMatrix shorted;           // W_{/R(A)}
  PsdMatrix infimum_operator;  // B* W_{/R(A)} B
  Subspace manifold_nullspace; // N(A*WA)
  bool condition_holds = false;
  bool condition_routes_agree = false;
  double normal_residual = 0.0;  // ||A*W(A x0 - B)||
  ToleranceProfile tol;
};

/// Scale for normal-equation residual thresholds: ||A|| ||W|| (||A|| ||X|| + ||B||).
inline double normal_residual_scale(const DenseMatrix& a, const PsdMatrix& w,
                                    const DenseMatrix& x, const DenseMatrix& b) {
  const double na = operator_norm(a);
  return na * operator_norm(w.matrix()) * (na * operator_norm(x) + operator_norm(b));
}

/// W-least-squares solution of A z = x: u0 = (A*WA)^dagger A*W x.
///
/// The existence condition x in R(A) + R(A)^{perp_W} is automatic at finite
/// dimension; its tolerance-checked failure signals numerical breakdown.
inline Vector w_lss(const DenseMatrix& a, const PsdMatrix& w, const Vector& x,
                    const ToleranceProfile& tol = {}) {
  if (a.rows() != x.size() || a.rows() != w.dim()) {
    throw ShapeError("w_lss: shapes do not compose");
  }
  const Subspace ra = range_of(a, tol);
  const Subspace reachable = subspace_sum(ra, w_orth_complement(w, ra));
  if (!contains(reachable, Subspace::span_of(x, tol))) {
    throw ConditionFailedError("w_lss: x escaped R(A) + R(A)^{perp_W} (tolerance breakdown)");
  }
  const DenseMatrix gram = a.adjoint() * w.matrix() * a;
  return pinv(gram, tol) * (a.adjoint() * (w.matrix() * x));
}

/// Both routes of the solvability condition; they coincide exactly at finite
/// dimension, so disagreement is a tolerance diagnostic.
struct ConditionRoutes {
  bool subspace_route = false;  // R(B) inside R(A) + R(A)^{perp_W}
  bool douglas_route = false;   // R(A*WB) inside R(A*WA)
  [[nodiscard]] bool agree() const { return subspace_route == douglas_route; }
};

inline ConditionRoutes check_condition_routes(const DenseMatrix& a, const DenseMatrix& b,
                                              const PsdMatrix& w,
                                              const ToleranceProfile& tol = {}) {
  if (a.rows() != b.rows() || a.rows() != w.dim()) {
    throw ShapeError("check_condition: shapes do not compose");
  }
  ConditionRoutes routes;
  const Subspace ra = range_of(a, tol);
  routes.subspace_route =
      contains(subspace_sum(ra, w_orth_complement(w, ra)), range_of(b, tol));
  routes.douglas_route =
      douglas_check(a.adjoint() * w.matrix() * b, a.adjoint() * w.matrix() * a, tol);
  return routes;
}

inline bool check_condition(const DenseMatrix& a, const DenseMatrix& b, const PsdMatrix& w,
                            const ToleranceProfile& tol = {}) {
  return check_condition_routes(a, b, w, tol).subspace_route;
}

/// B* W_{/R(A)} B, the infimum of (AX-B)* W (AX-B) over all X.
inline PsdMatrix infimum_operator(const ProcrustesProblem& prob) {
  const PsdMatrix shorted = short_to(prob.w, range_of(prob.a, prob.tol), prob.tol).shorted;
  return PsdMatrix(prob.b.adjoint() * shorted.matrix() * prob.b, prob.tol);
}

/// (AX-B)* W (AX-B), symmetrized.
inline PsdMatrix residual_gram(const DenseMatrix& x, const ProcrustesProblem& prob) {
  if (x.rows() != prob.a.cols() || x.cols() != prob.b.cols()) {
    throw ShapeError("residual_gram: X does not compose with A and B");
  }
  const DenseMatrix r = prob.a * x - prob.b;
  return PsdMatrix(r.adjoint() * prob.w.matrix() * r, prob.tol);
}

/// Exact minimum ||W_{/R(A)}^{1/2} B||_p of the weighted seminorm.
inline double min_value(const ProcrustesProblem& prob) {
  if (!check_condition(prob.a, prob.b, prob.w, prob.tol)) {
    throw ConditionFailedError("min_value: solvability condition failed");
  }
  const PsdMatrix shorted = short_to(prob.w, range_of(prob.a, prob.tol), prob.tol).shorted;
  return schatten_norm(psd_sqrt(shorted, prob.tol).matrix() * prob.b, prob.p);
}

/// Normal-equation test ||A*W(Ax - B)|| <= residual_tol * scale; equivalent to
/// x attaining the infimum operator.
inline bool is_minimizer(const DenseMatrix& x, const ProcrustesProblem& prob) {
  if (x.rows() != prob.a.cols() || x.cols() != prob.b.cols()) {
    throw ShapeError("is_minimizer: X does not compose with A and B");
  }
  const DenseMatrix resid = prob.a.adjoint() * prob.w.matrix() * (prob.a * x - prob.b);
  const double scale = normal_residual_scale(prob.a, prob.w, x, prob.b);
  return operator_norm(resid) <= prob.tol.residual_tol * scale;
}

/// Solve the normal equation A*WA X = A*WB; the canonical representative is
/// (A*WA)^dagger A*WB and every x0 + L with R(L) inside N(A*WA) also solves it.
inline ProcrustesSolution w_inverse(const ProcrustesProblem& prob) {
  const ConditionRoutes routes = check_condition_routes(prob.a, prob.b, prob.w, prob.tol);
  if (!routes.subspace_route) {
    throw ConditionFailedError("w_inverse: solvability condition failed");
  }
  const DenseMatrix gram = prob.a.adjoint() * prob.w.matrix() * prob.a;
  const DenseMatrix rhs = prob.a.adjoint() * prob.w.matrix() * prob.b;
  DenseMatrix x0 = pinv(gram, prob.tol) * rhs;

  const Subspace ra = range_of(prob.a, prob.tol);
  PsdMatrix shorted = short_to(prob.w, ra, prob.tol).shorted;
  PsdMatrix inf_op(prob.b.adjoint() * shorted.matrix() * prob.b, prob.tol);
  const double minimum = schatten_norm(psd_sqrt(shorted, prob.tol).matrix() * prob.b, prob.p);
  const double resid = operator_norm(prob.a.adjoint() * prob.w.matrix() * (prob.a * x0 - prob.b));

  ProcrustesSolution sol{std::move(x0),
                         minimum,
                         std::move(shorted),
                         std::move(inf_op),
                         nullspace_of(gram, prob.tol),
                         routes.subspace_route,
                         routes.agree(),
                         resid,
                         prob.tol};
  return sol;
}

/// Minimizer built from the attaining projection E0 = I - Q with
/// Q = compatible_projection(W, R(A)): X = A^dagger (I - E0) = A^dagger Q.
/// Since R(Q) = R(A), A X - I = Q - I = -E0, so (AX-I)* W (AX-I) equals
/// E0* W E0 = W_{/R(A)}.
inline DenseMatrix attaining_projection_minimizer(const DenseMatrix& a, const PsdMatrix& w,
                                                  const ToleranceProfile& tol = {}) {
  const ObliqueProjection q = compatible_projection(w, range_of(a, tol));
  return pinv(a, tol) * q.matrix;
}

}  // namespace wproc
