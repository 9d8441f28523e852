#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "wproc/core.hpp"
#include "wproc/errors.hpp"
#include "wproc/oracle.hpp"
#include "wproc/projection.hpp"
#include "wproc/schatten.hpp"
#include "wproc/shorted.hpp"
#include "wproc/solver.hpp"
#include "wproc/subspace.hpp"
#include "wproc/types.hpp"

namespace wproc {

/// Parameters of one verification run; everything downstream is a pure
/// function of these, so a run is reproducible from its command line.
struct VerifyOptions {
  std::uint64_t seed = 42;
  std::size_t trials = 20;
  Index n = 5;
  std::vector<double> p_values = {1.0, 2.0, 3.0};
  ToleranceProfile tol;
  /// Hidden failure-path demo: run every battery comparison with tolerance
  /// zero, which no floating-point computation survives.
  bool zero_comparison_tolerances = false;

  [[nodiscard]] bool valid() const {
    if (trials < 1 || n < 1 || p_values.empty()) return false;
    for (double p : p_values) {
      if (!(p >= 1.0)) return false;
    }
    return true;
  }
};

/// Outcome of one property over all its checks.  A check passes when its
/// margin (allowed minus observed) is nonnegative; worst_margin is the
/// minimum margin seen.
struct PropertyResult {
  std::string name;
  bool passed = true;
  std::size_t checks = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::string first_failure;
};

struct VerifyReport {
  std::vector<PropertyResult> properties;
  std::string repro;

  [[nodiscard]] bool all_passed() const {
    return std::all_of(properties.begin(), properties.end(),
                       [](const PropertyResult& p) { return p.passed; });
  }
};

namespace detail {

class PropertyAccumulator {
 public:
  explicit PropertyAccumulator(std::string name) { result_.name = std::move(name); }

  void check(double margin, const std::string& context) {
    ++result_.checks;
    if (margin < result_.worst_margin) result_.worst_margin = margin;
    if (margin < 0 && result_.passed) {
      result_.passed = false;
      result_.first_failure = context;
    }
  }

  void fail(const std::string& context) {
    check(-std::numeric_limits<double>::infinity(), context);
  }

  [[nodiscard]] PropertyResult take() { return std::move(result_); }

 private:
  PropertyResult result_;
};

/// Deterministic instance schedule: dimensions and ranks cycle so the run
/// covers square/rectangular and full/deficient-rank cases.
inline InstanceSpec verify_schedule(const VerifyOptions& opts, std::size_t trial,
                                    double p) {
  InstanceSpec spec;
  spec.n = opts.n;
  spec.k = (trial % 3 == 0) ? opts.n : std::max<Index>(1, opts.n - 1 - Index(trial % 2));
  spec.m = (trial % 2 == 0) ? opts.n : std::max<Index>(1, opts.n - 1);
  const Index full_a = std::min(spec.n, spec.k);
  spec.rank_a = (trial % 4 == 3) ? std::max<Index>(1, full_a - 1) : full_a;
  spec.rank_w = (trial % 5 == 4) ? std::max<Index>(1, opts.n - 1) : opts.n;
  spec.p = SchattenOrder(p);
  spec.seed = opts.seed * 1000003ULL + trial;
  return spec;
}

inline std::string trial_tag(std::size_t trial, double p) {
  std::ostringstream os;
  os << "trial " << trial << ", p=" << p;
  return os.str();
}

}  // namespace detail

/// Run the invariant battery: order bounds, exact minimum equality, shorted
/// attainment, descent-oracle agreement, derivative checks and manifold
/// checks, all on seeded instances.  Every comparison uses an explicit
/// allowed-minus-observed margin so failures carry their severity.
inline VerifyReport run_verification(const VerifyOptions& opts) {
  if (!opts.valid()) {
    throw Error("run_verification: trials, n and p values must be positive");
  }
  const bool zero = opts.zero_comparison_tolerances;
  const double eq_tol = zero ? 0.0 : 1e-8;
  const double order_tol = zero ? 0.0 : 1e-8;
  const double oracle_tol = zero ? 0.0 : 1e-4;
  const double deriv_tol = zero ? 0.0 : 1e-5;
  const double resid_tol = zero ? 0.0 : opts.tol.residual_tol;

  detail::PropertyAccumulator order_bound("order-lower-bound");
  detail::PropertyAccumulator min_equal("min-value-equality");
  detail::PropertyAccumulator attainment("shorted-attainment");
  detail::PropertyAccumulator oracle_agree("oracle-agreement");
  detail::PropertyAccumulator derivative("derivative-check");
  detail::PropertyAccumulator manifold("manifold-check");

  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    const double p = opts.p_values[trial % opts.p_values.size()];
    const std::string tag = detail::trial_tag(trial, p);
    const InstanceSpec spec = detail::verify_schedule(opts, trial, p);
    try {
      const ProcrustesProblem prob = generate_instance(spec, opts.tol);
      const ProcrustesSolution sol = w_inverse(prob);
      const double scale_wb =
          operator_norm(prob.w.matrix()) * std::pow(operator_norm(prob.b), 2);

      // Order bound: residual_gram(X) - infimum_operator is PSD up to roundoff.
      Rng rng(spec.seed ^ 0x9e3779b97f4a7c15ULL);
      for (int rep = 0; rep < 5; ++rep) {
        const DenseMatrix x = random_matrix(prob.a.cols(), prob.b.cols(), rng);
        const DenseMatrix gap =
            residual_gram(x, prob).matrix() - sol.infimum_operator.matrix();
        Eigen::SelfAdjointEigenSolver<DenseMatrix> eig(0.5 * (gap + gap.adjoint()),
                                                       Eigen::EigenvaluesOnly);
        const double lo = gap.rows() == 0 ? 0.0 : eig.eigenvalues().minCoeff();
        order_bound.check(lo + order_tol * (1.0 + scale_wb), tag);
      }

      // Exact minimum: the attained value equals the shorted-operator norm.
      const double attained = weighted_seminorm(prob.a * sol.x0 - prob.b, prob.w, prob.p);
      min_equal.check(eq_tol * (1.0 + sol.min_value) - std::abs(attained - sol.min_value),
                      tag);

      // Attainment: E0 = I - Q reaches the shorted operator exactly.
      const Subspace ra = range_of(prob.a, opts.tol);
      const ObliqueProjection q = compatible_projection(prob.w, ra);
      const DenseMatrix e0 =
          DenseMatrix::Identity(prob.a.rows(), prob.a.rows()) - q.matrix;
      const double att_err =
          operator_norm(e0.adjoint() * prob.w.matrix() * e0 - sol.shorted.matrix());
      attainment.check(eq_tol * (1.0 + operator_norm(prob.w.matrix())) - att_err, tag);

      // Normal-equation membership of x0 and of a random manifold shift;
      // a perturbation out of the manifold must fail the same test.
      const DenseMatrix gram = prob.a.adjoint() * prob.w.matrix() * prob.a;
      const auto resid_of = [&](const DenseMatrix& x) {
        return operator_norm(prob.a.adjoint() * prob.w.matrix() * (prob.a * x - prob.b));
      };
      const auto allowed_of = [&](const DenseMatrix& x) {
        return resid_tol * normal_residual_scale(prob.a, prob.w, x, prob.b);
      };
      manifold.check(allowed_of(sol.x0) - resid_of(sol.x0), tag + " (x0)");
      if (sol.manifold_nullspace.dim() > 0) {
        const DenseMatrix coeff =
            random_matrix(sol.manifold_nullspace.dim(), prob.b.cols(), rng);
        const DenseMatrix shifted =
            sol.x0 + (0.5 * (1.0 + operator_norm(sol.x0))) *
                         sol.manifold_nullspace.basis() * coeff;
        manifold.check(allowed_of(shifted) - resid_of(shifted), tag + " (manifold shift)");
      }
      const SvdFactors gram_svd = svd(gram, opts.tol);
      if (gram_svd.numeric_rank > 0 && gram_svd.singular.front() > 1e-6) {
        DenseMatrix bump = DenseMatrix::Zero(prob.a.cols(), prob.b.cols());
        bump.col(0) = gram_svd.vt.row(0).adjoint();
        const DenseMatrix perturbed =
            sol.x0 + (1e-2 * (1.0 + operator_norm(sol.x0))) * bump;
        manifold.check(resid_of(perturbed) - allowed_of(perturbed),
                       tag + " (perturbation must fail)");
      }
    } catch (const Error& e) {
      const std::string what = std::string(": ") + e.what();
      order_bound.fail(tag + what);
      min_equal.fail(tag + what);
      attainment.fail(tag + what);
      manifold.fail(tag + what);
    }
  }

  // Descent oracle against the closed form; capped trial count keeps the
  // battery interactive.
  const std::size_t oracle_trials = std::min<std::size_t>(opts.trials, 10);
  for (std::size_t trial = 0; trial < oracle_trials; ++trial) {
    for (double p : opts.p_values) {
      if (p != 2.0 && p != 3.0) continue;
      const std::string tag = detail::trial_tag(trial, p);
      try {
        const ProcrustesProblem prob =
            generate_instance(detail::verify_schedule(opts, trial, p), opts.tol);
        DescentConfig cfg;
        cfg.seed = opts.seed * 7919ULL + trial;
        const DescentResult run = descent_minimize(prob, cfg);
        const double exact = min_value(prob);
        oracle_agree.check(oracle_tol * (1.0 + exact) - std::abs(run.value - exact), tag);
      } catch (const Error& e) {
        oracle_agree.fail(tag + ": " + e.what());
      }
    }
  }

  // Derivative formulas at synthetic full-rank points with separated singular
  // values; h is fixed and the direction kept small so the one-sided
  // difference stays inside the comparison tolerance.
  const double h = 1e-5;
  Rng drng(opts.seed * 6364136223846793005ULL + 1442695040888963407ULL);
  for (std::size_t trial = 0; trial < opts.trials; ++trial) {
    Eigen::VectorXd sigma(opts.n);
    for (Index i = 0; i < opts.n; ++i) sigma(i) = 2.0 * std::pow(0.7, double(i));
    const DenseMatrix x = random_unitary(opts.n, drng) * sigma.asDiagonal() *
                          random_unitary(opts.n, drng).adjoint();
    DenseMatrix y = random_matrix(opts.n, opts.n, drng);
    y *= 0.05 / y.norm();
    for (double p : opts.p_values) {
      if (std::isinf(p)) continue;
      for (double phi : {0.0, std::acos(-1.0) / 2, std::acos(-1.0), 3 * std::acos(-1.0) / 2}) {
        const double exact = phi_directional_derivative(x, y, p, phi, opts.tol);
        const double fd = finite_diff_phi(x, y, p, phi, h);
        std::ostringstream tag;
        tag << detail::trial_tag(trial, p) << ", phi=" << phi;
        derivative.check(deriv_tol * (1.0 + std::abs(exact)) - std::abs(fd - exact),
                         tag.str());
      }
    }
  }

  VerifyReport report;
  report.properties.push_back(order_bound.take());
  report.properties.push_back(min_equal.take());
  report.properties.push_back(attainment.take());
  report.properties.push_back(oracle_agree.take());
  report.properties.push_back(derivative.take());
  report.properties.push_back(manifold.take());

  std::ostringstream repro;
  repro << "wproc verify --seed " << opts.seed << " --trials " << opts.trials << " --n "
        << opts.n << " --p ";
  for (std::size_t i = 0; i < opts.p_values.size(); ++i) {
    if (i) repro << ",";
    if (std::isinf(opts.p_values[i])) {
      repro << "inf";
    } else {
      repro << opts.p_values[i];
    }
  }
  if (opts.zero_comparison_tolerances) repro << " --inject-zero-tolerance";
  report.repro = repro.str();
  return report;
}

}  // namespace wproc
