#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>
#include <vector>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/projection.hpp"
#include "wproc/schatten.hpp"
#include "wproc/solver.hpp"
#include "wproc/subspace.hpp"
#include "wproc/types.hpp"

namespace wproc {

// ---------------------------------------------------------------------------
// Seeded random building blocks.  All randomness in the library flows through
// explicit seeds; there is no wall-clock entropy anywhere.
// ---------------------------------------------------------------------------

using Rng = std::mt19937_64;

/// Complex matrix with i.i.d. standard normal real and imaginary parts.
inline DenseMatrix random_matrix(Index rows, Index cols, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  DenseMatrix out(rows, cols);
  for (Index i = 0; i < rows; ++i)
    for (Index j = 0; j < cols; ++j) out(i, j) = Complex(normal(rng), normal(rng));
  return out;
}

/// Haar-like unitary: QR of a Gaussian matrix with the phase of R's diagonal
/// absorbed into Q.
inline DenseMatrix random_unitary(Index n, Rng& rng) {
  if (n == 0) return DenseMatrix(0, 0);
  const DenseMatrix g = random_matrix(n, n, rng);
  Eigen::HouseholderQR<DenseMatrix> qr(g);
  DenseMatrix q = qr.householderQ();
  const DenseMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Index j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    const double mag = std::abs(d);
    if (mag > 0) q.col(j) *= d / mag;
  }
  return q;
}

inline Subspace random_subspace(Index ambient, Index dim, Rng& rng,
                                const ToleranceProfile& tol = {}) {
  return Subspace(ambient, random_unitary(ambient, rng).leftCols(dim), tol);
}

/// Projection E with N(E) = s and Haar-random complementary range; resamples
/// on (measure-zero) degenerate draws.
inline ObliqueProjection random_projection_with_nullspace(const Subspace& s, Rng& rng) {
  const Index n = s.ambient_dim();
  for (int attempt = 0; attempt < 64; ++attempt) {
    const Subspace comp = random_subspace(n, n - s.dim(), rng, s.tol());
    try {
      return oblique_projection(comp, s);
    } catch (const NotDirectSumError&) {
      continue;
    }
  }
  throw DecompositionFailedError(
      "random_projection_with_nullspace: no complement found in 64 draws");
}

// ---------------------------------------------------------------------------
// Instance generation
// ---------------------------------------------------------------------------

/// Recipe for a seeded random problem instance with prescribed ranks.
struct InstanceSpec {
  Index n = 4;       // ambient dimension
  Index k = 4;       // columns of A
  Index m = 4;       // columns of B
  Index rank_a = 4;  // <= min(n, k)
  Index rank_w = 4;  // <= n
  SchattenOrder p{2.0};
  std::uint64_t seed = 0;

  [[nodiscard]] bool valid() const {
    return n >= 0 && k >= 0 && m >= 0 && rank_a >= 0 && rank_w >= 0 &&
           rank_a <= std::min(n, k) && rank_w <= n;
  }
};

/// Deterministic instance: W = R diag(positive, rank_w) R* for a seeded
/// unitary R, A with prescribed rank via seeded factors, B dense Gaussian.
/// Nonzero spectra live in [1/2, 2] so instances stay well scaled.
inline ProcrustesProblem generate_instance(const InstanceSpec& spec,
                                           const ToleranceProfile& tol = {}) {
  if (!spec.valid()) {
    throw Error("generate_instance: ranks out of bounds");
  }
  Rng rng(spec.seed);
  std::uniform_real_distribution<double> spectrum(0.5, 2.0);

  const DenseMatrix r = random_unitary(spec.n, rng);
  Eigen::VectorXd dw = Eigen::VectorXd::Zero(spec.n);
  for (Index i = 0; i < spec.rank_w; ++i) dw(i) = spectrum(rng);
  PsdMatrix w(r * dw.asDiagonal() * r.adjoint(), tol);

  const DenseMatrix ua = random_unitary(spec.n, rng);
  const DenseMatrix va = random_unitary(spec.k, rng);
  DenseMatrix a = DenseMatrix::Zero(spec.n, spec.k);
  for (Index i = 0; i < spec.rank_a; ++i) {
    a.noalias() += spectrum(rng) * ua.col(i) * va.col(i).adjoint();
  }

  const DenseMatrix b = random_matrix(spec.n, spec.m, rng);
  return ProcrustesProblem(std::move(a), b, std::move(w), spec.p, tol);
}

// ---------------------------------------------------------------------------
// Descent oracle
// ---------------------------------------------------------------------------

struct DescentConfig {
  std::size_t max_iters = 20000;
  double step_init = 1.0;
  double step_shrink = 0.5;
  double grad_tol = 1e-10;
  std::uint64_t seed = 0;

  [[nodiscard]] bool valid() const {
    return max_iters >= 1 && step_init > 0 && step_shrink > 0 && step_shrink < 1 &&
           grad_tol >= 0;
  }
};

/// Best iterate and value; `converged` false means a NonConvergence report,
/// not an error — oracle results are advisory.
struct DescentResult {
  DenseMatrix x_best;
  double value = 0.0;  // ||W^{1/2}(A x_best - B)||_p, exact (unsmoothed)
  bool converged = false;
  std::size_t iterations = 0;
  std::vector<double> trace;  // accepted objective values, non-increasing
};

namespace detail {

/// Objective sum g(sigma_i) and gradient A* W^{1/2} U g'(Sigma) V* of the
/// spectral function of M = W^{1/2}(A X - B), for g(s) = s^p (p > 1) or the
/// smoothed g(s) = sqrt(s^2 + delta) (p = 1).
struct SpectralObjective {
  const DenseMatrix& a;
  const DenseMatrix& b;
  const DenseMatrix& w_root;
  double p;
  double delta;  // smoothing, only read when p == 1

  [[nodiscard]] double value_at(const DenseMatrix& x) const {
    const DenseMatrix m = w_root * (a * x - b);
    if (m.rows() == 0 || m.cols() == 0) return 0.0;
    const Eigen::VectorXd sigma = m.jacobiSvd().singularValues();
    double acc = 0.0;
    for (Index i = 0; i < sigma.size(); ++i) {
      acc += p > 1.0 ? std::pow(sigma(i), p) : std::sqrt(sigma(i) * sigma(i) + delta);
    }
    return acc;
  }

  [[nodiscard]] DenseMatrix gradient_at(const DenseMatrix& x) const {
    const DenseMatrix m = w_root * (a * x - b);
    if (m.rows() == 0 || m.cols() == 0) return DenseMatrix::Zero(x.rows(), x.cols());
    Eigen::JacobiSVD<DenseMatrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    Eigen::VectorXd gp = dec.singularValues();
    for (Index i = 0; i < gp.size(); ++i) {
      const double s = gp(i);
      gp(i) = p > 1.0 ? p * std::pow(s, p - 1.0) : s / std::sqrt(s * s + delta);
    }
    return a.adjoint() * w_root.adjoint() * dec.matrixU() * gp.asDiagonal() *
           dec.matrixV().adjoint();
  }
};

/// Armijo backtracking descent on one SpectralObjective, starting from x.
/// Appends accepted values to the trace.
inline void armijo_descent(const SpectralObjective& obj, DenseMatrix& x,
                           const DescentConfig& cfg, std::size_t iters,
                           std::vector<double>& trace, bool& converged,
                           std::size_t& used) {
  constexpr double kSufficientDecrease = 1e-4;
  double f = obj.value_at(x);
  double step = cfg.step_init;
  trace.push_back(f);
  for (std::size_t it = 0; it < iters; ++it) {
    const DenseMatrix g = obj.gradient_at(x);
    const double gnorm2 = g.squaredNorm();
    if (std::sqrt(gnorm2) <= cfg.grad_tol * (1.0 + std::abs(f))) {
      converged = true;
      used = it;
      return;
    }
    bool accepted = false;
    while (step > 1e-18) {
      const DenseMatrix trial = x - step * g;
      const double ft = obj.value_at(trial);
      if (ft <= f - kSufficientDecrease * step * gnorm2) {
        x = trial;
        f = ft;
        trace.push_back(f);
        step *= 2.0;
        accepted = true;
        break;
      }
      step *= cfg.step_shrink;
    }
    if (!accepted) {  // no descent possible at the smallest step: stationary
      converged = true;
      used = it;
      return;
    }
  }
  used = iters;
}

}  // namespace detail

/// Brute-force minimization of ||W^{1/2}(A X - B)||_p by Armijo gradient
/// descent (smoothing continuation for p = 1).  Independent of the
/// closed-form solver path.
inline DescentResult descent_minimize(const ProcrustesProblem& prob,
                                      const DescentConfig& cfg = {}) {
  if (!cfg.valid()) throw Error("descent_minimize: invalid config");
  if (prob.p.is_infinity() || !(prob.p.value() >= 1.0)) {
    throw Error("descent_minimize: p must be finite and >= 1");
  }
  const DenseMatrix w_root = psd_sqrt(prob.w, prob.tol).matrix();
  Rng rng(cfg.seed);
  DenseMatrix x = 0.1 * random_matrix(prob.a.cols(), prob.b.cols(), rng);

  DescentResult result;
  const double p = prob.p.value();
  if (p > 1.0) {
    detail::SpectralObjective obj{prob.a, prob.b, w_root, p, 0.0};
    detail::armijo_descent(obj, x, cfg, cfg.max_iters, result.trace, result.converged,
                           result.iterations);
  } else {
    // Smoothing continuation; each stage reuses the previous iterate.
    const std::vector<double> deltas = {1e-2, 1e-4, 1e-6, 1e-8, 1e-10};
    const std::size_t per_stage = cfg.max_iters / deltas.size() + 1;
    std::size_t total = 0;
    for (double delta : deltas) {
      detail::SpectralObjective obj{prob.a, prob.b, w_root, 1.0, delta};
      std::size_t used = 0;
      bool stage_converged = false;
      detail::armijo_descent(obj, x, cfg, per_stage, result.trace, stage_converged, used);
      total += used;
      result.converged = stage_converged;
    }
    result.iterations = total;
    // The trace is monotone within stages; shrinking delta can only lower the
    // smoothed objective, so it stays non-increasing across stages too.
  }
  result.x_best = std::move(x);
  result.value = weighted_seminorm(prob.a * result.x_best - prob.b, prob.w, prob.p);
  return result;
}

/// One-sided difference quotient of G_p(X) = ||X||_p^p in direction e^{i phi} y.
inline double finite_diff_phi(const DenseMatrix& x, const DenseMatrix& y, double p,
                              double phi, double h) {
  if (h <= 0) throw Error("finite_diff_phi: h must be positive");
  if (x.rows() != y.rows() || x.cols() != y.cols()) {
    throw ShapeError("finite_diff_phi: shapes disagree");
  }
  const SchattenOrder order(p);
  const Complex rot = std::exp(Complex(0.0, phi));
  const double f0 = std::pow(schatten_norm(x, order), p);
  const double f1 = std::pow(schatten_norm(x + (h * rot) * y, order), p);
  return (f1 - f0) / h;
}

/// Running lower envelope of {E* W E : E^2 = E, N(E) = S} over seeded samples:
/// the sample of minimal trace (trace orders the family tightly around the
/// shorted operator, and ties break by lowest trial index so parallel and
/// serial merges agree).
inline PsdMatrix sample_projection_infimum(const PsdMatrix& w, const Subspace& s,
                                           std::size_t trials, std::uint64_t seed) {
  if (trials < 1) throw Error("sample_projection_infimum: trials must be >= 1");
  Rng rng(seed);
  bool have = false;
  double best_trace = 0.0;
  DenseMatrix best;
  for (std::size_t t = 0; t < trials; ++t) {
    const ObliqueProjection e = random_projection_with_nullspace(s, rng);
    const DenseMatrix value = e.matrix.adjoint() * w.matrix() * e.matrix;
    const double tr = value.trace().real();
    if (!have || tr < best_trace) {
      have = true;
      best_trace = tr;
      best = value;
    }
  }
  return PsdMatrix(best, s.tol());
}

}  // namespace wproc
