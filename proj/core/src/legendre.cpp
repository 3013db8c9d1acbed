#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Cholesky>

#include "toric_hk/error.hpp"
#include "toric_hk/potential.hpp"

namespace toric_hk {
namespace {

struct Objective {
  double value;
  Vec gradient;
};

}  // namespace

KahlerChartPoint legendre_solve(const FlatArrangement& arr, const DeformationMatrix& b,
                                const CVec& u, const CVec& z, const LegendreOptions& opts,
                                const Tolerances& tol) {
  const int n = arr.dim();
  if (u.size() != n || z.size() != n) throw DimensionError("chart point dimension mismatch");
  const Vec target = 4.0 * u.real();  // 2 (u + conj u)

  // G(x) = F(x, z) - target . x is strictly convex with Hessian 4 Phi.
  const auto objective = [&](const Vec& x) {
    const Point3n p(x, z);
    return Objective{eval_F(arr, b, p, tol) - target.dot(x),
                     eval_F_gradient_x(arr, b, p, tol) - target};
  };

  Vec x = opts.x0.value_or(Vec::Zero(n));
  if (x.size() != n) throw DimensionError("initial guess dimension mismatch");
  Objective cur;
  try {
    cur = objective(x);
  } catch (const BranchLocusError& e) {
    throw DomainEscapeError(std::string("initial guess outside the chart: ") + e.what());
  }

  KahlerChartPoint out{u, z, x, 0.0, 0, cur.gradient.norm()};
  for (int it = 0; it < tol.newton_max_iterations; ++it) {
    const double gnorm = cur.gradient.norm();
    if (gnorm <= tol.newton_residual) {
      out.x = x;
      out.K = cur.value;  // G at the root equals F - 2 (u + conj u) . x
      out.iterations = it;
      out.residual = gnorm;
      return out;
    }
    Mat hess;
    try {
      hess = 4.0 * eval_Phi(arr, b, Point3n(x, z), tol).value;
    } catch (const OnFlatError& e) {
      throw DomainEscapeError(std::string("Newton iterate reached a flat: ") + e.what());
    }
    Eigen::LDLT<Mat> ldlt(hess);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      throw NoConvergenceError("Hessian 4 Phi is not positive definite at the iterate");
    }
    const Vec step = -ldlt.solve(cur.gradient);
    const double slope = cur.gradient.dot(step);

    double t = 1.0;
    bool accepted = false;
    bool domain_hit = false;
    for (int bt = 0; bt < tol.max_backtracks; ++bt, t *= 0.5) {
      const Vec trial = x + t * step;
      Objective next;
      try {
        next = objective(trial);
      } catch (const BranchLocusError&) {
        domain_hit = true;
        continue;
      }
      // Armijo, or a strict gradient decrease once G is flat to rounding.
      if (next.value <= cur.value + tol.armijo * t * slope ||
          next.gradient.norm() < (1.0 - tol.armijo * t) * gnorm) {
        x = trial;
        cur = std::move(next);
        accepted = true;
        break;
      }
    }
    if (!accepted) {
      if (domain_hit) throw DomainEscapeError("Newton iterate trapped at the branch locus");
      std::ostringstream msg;
      msg << "line search failed at iteration " << it << " (|grad| = " << gnorm << ")";
      throw NoConvergenceError(msg.str());
    }
  }
  std::ostringstream msg;
  msg << "Newton did not converge in " << tol.newton_max_iterations
      << " iterations (|grad| = " << cur.gradient.norm() << ")";
  throw NoConvergenceError(msg.str());
}

KahlerPotentialFn kahler_potential(const FlatArrangement& arr, const DeformationMatrix& b,
                                   const Tolerances& tol) {
  return [&arr, &b, tol](const CVec& u, const CVec& z) {
    return legendre_solve(arr, b, u, z, {}, tol).K;
  };
}

ReconstructedF reconstruct_F_from_K(const KahlerPotentialFn& K, const CVec& u, const CVec& z,
                                    double step, bool richardson) {
  if (!(step > 0.0) || !std::isfinite(step)) throw InputError("step must be positive");
  const auto n = u.size();
  const auto d_re_u = [&](Eigen::Index i, double h) {
    CVec up = u, um = u;
    up(i) += h;
    um(i) -= h;
    return (K(up, z) - K(um, z)) / (2.0 * h);
  };
  ReconstructedF out;
  out.x.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    // K_u = 1/2 dK/dRe u since K is independent of Im u.
    const double coarse = d_re_u(i, step);
    const double fine = d_re_u(i, 0.5 * step);
    if (std::abs(coarse - fine) > 1e-3 * std::max(1.0, std::abs(fine))) {
      throw NoConvergenceError("chart spacing too coarse for differentiating K");
    }
    const double deriv = richardson ? (4.0 * fine - coarse) / 3.0 : coarse;
    out.x(i) = -0.25 * deriv;
  }
  out.F = K(u, z) + 4.0 * u.real().dot(out.x);
  return out;
}

}  // namespace toric_hk
