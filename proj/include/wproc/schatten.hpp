#pragma once

#include <cmath>
#include <limits>
#include <sstream>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Exponent of a Schatten p-norm: a real p >= 1, or infinity for the
/// operator norm.
class SchattenOrder {
 public:
  explicit SchattenOrder(double p) : p_(p) {
    if (!(p >= 1.0)) {  // rejects NaN too
      std::ostringstream os;
      os << "SchattenOrder: p must be >= 1 or infinity, got " << p;
      throw Error(os.str());
    }
  }

  static SchattenOrder infinity() {
    return SchattenOrder(std::numeric_limits<double>::infinity());
  }

  [[nodiscard]] bool is_infinity() const { return std::isinf(p_); }
  [[nodiscard]] double value() const { return p_; }

 private:
  double p_;
};

/// ||T||_p = (sum sigma_i^p)^{1/p}; the operator norm for p = infinity.
inline double schatten_norm(const DenseMatrix& t, const SchattenOrder& p) {
  if (t.rows() == 0 || t.cols() == 0) return 0.0;
  const Eigen::VectorXd sigma = detail::full_svd(t, "schatten_norm").singularValues();
  if (p.is_infinity()) return sigma(0);
  double acc = 0.0;
  for (Index i = 0; i < sigma.size(); ++i) acc += std::pow(sigma(i), p.value());
  return std::pow(acc, 1.0 / p.value());
}

/// Weighted seminorm ||X||_{p,W} = ||W^{1/2} X||_p.
inline double weighted_seminorm(const DenseMatrix& x, const PsdMatrix& w,
                                const SchattenOrder& p) {
  if (w.dim() != x.rows()) {
    throw ShapeError("weighted_seminorm: weight does not compose with operand");
  }
  return schatten_norm(psd_sqrt(w).matrix() * x, p);
}

/// Polar decomposition X = U |X| with U the partial isometry whose nullspace
/// equals N(X); both factors come from the rank-truncated SVD.
struct PolarForm {
  DenseMatrix partial_isometry;
  PsdMatrix modulus;
};

inline PolarForm polar(const DenseMatrix& x, const ToleranceProfile& tol = {}) {
  const SvdFactors f = svd(x, tol);
  DenseMatrix u = f.u * f.vt;
  DenseMatrix mod = DenseMatrix::Zero(x.cols(), x.cols());
  for (Index i = 0; i < f.numeric_rank; ++i) {
    mod.noalias() += f.singular[static_cast<std::size_t>(i)] * f.vt.row(i).adjoint() * f.vt.row(i);
  }
  return PolarForm{std::move(u), PsdMatrix(mod, tol)};
}

/// phi-directional derivative of G_p(X) = ||X||_p^p at X in direction Y.
///
/// For p > 1:  p Re[e^{i phi} tr(|X|^{p-1} U* Y)].
/// For p = 1:  Re[e^{i phi} tr(U* Y)] + ||P_{N(X*)} Y P_{N(X)}||_1.
/// Zero powers of zero singular values are taken as zero, consistent with the
/// rank-truncated polar form (N(|X|^{p-1}) = N(|X|)).
inline double phi_directional_derivative(const DenseMatrix& x, const DenseMatrix& y,
                                         double p, double phi,
                                         const ToleranceProfile& tol = {}) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("phi_directional_derivative: shapes disagree");
  }
  if (!(p >= 1.0) || std::isinf(p)) {
    throw Error("phi_directional_derivative: p must be finite and >= 1");
  }
  const Complex rot = std::exp(Complex(0.0, phi));
  const SvdFactors f = svd(x, tol);
  if (p > 1.0) {
    // tr(|X|^{p-1} U* Y) with |X|^{p-1} U* = V_r sigma^{p-1} U_r*.
    Complex trace = 0.0;
    for (Index i = 0; i < f.numeric_rank; ++i) {
      const double power = std::pow(f.singular[static_cast<std::size_t>(i)], p - 1.0);
      trace += power * (f.u.col(i).adjoint() * y * f.vt.row(i).adjoint())(0, 0);
    }
    return p * std::real(rot * trace);
  }
  Complex trace = 0.0;
  for (Index i = 0; i < f.numeric_rank; ++i) {
    trace += (f.u.col(i).adjoint() * y * f.vt.row(i).adjoint())(0, 0);
  }
  const DenseMatrix p_left =
      DenseMatrix::Identity(x.rows(), x.rows()) - f.u * f.u.adjoint();
  const DenseMatrix p_right =
      DenseMatrix::Identity(x.cols(), x.cols()) - f.vt.adjoint() * f.vt;
  const double kink = schatten_norm(p_left * y * p_right, SchattenOrder(1.0));
  return std::real(rot * trace) + kink;
}

}  // namespace wproc
