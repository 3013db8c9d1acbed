#pragma once

#include <functional>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/config.hpp"
#include "toric_hk/point.hpp"

namespace toric_hk {

// Phi(p) = 1/4 F_xx, symmetric positive definite off the flats.
struct PhiMatrix {
  Mat value;
};

// C[j][l] = F_{x_j z_l}(p).
struct ConnectionForm {
  CMat coefficients;

  // Real coefficients of the connection 1-forms against (d Re z, d Im z):
  // n x 2n, row j is A_j. Includes the 1/2 normalisation under which the
  // assembled metric is Ricci-flat.
  Mat real_form() const;
};

// 4n x 4n metric in coordinate order (x, Re z, Im z, y); y in R / 2 pi Z.
struct MetricTensor {
  Mat value;
};

// A point of a Kahler chart (u, z) together with the Legendre dual x and the
// Kahler potential K = F - 2 sum (u_i + conj u_i) x_i.
struct KahlerChartPoint {
  CVec u;
  CVec z;
  Vec x;
  double K = 0.0;
  int iterations = 0;
  double residual = 0.0;
};

// Sum_k a_k (s_k ln(s_k + r_k) - r_k) + sum_ij b_ij (2 x_i x_j - z_i conj z_j).
// Throws BranchLocusError where s_k + r_k <= tol.branch.
double eval_F(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
              const Tolerances& tol = default_tolerances());

// Gradient dF/dx = sum_k a_k u_k ln(s_k + r_k) + 4 B x.
Vec eval_F_gradient_x(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                      const Tolerances& tol = default_tolerances());

// B + 1/4 sum_k a_k u_k u_k^T / r_k. Throws OnFlatError within tol of a flat.
PhiMatrix eval_Phi(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                   const Tolerances& tol = default_tolerances());

ConnectionForm eval_connection(const FlatArrangement& arr, const DeformationMatrix& b,
                               const Point3n& p, const Tolerances& tol = default_tolerances());

MetricTensor eval_metric(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                         const Tolerances& tol = default_tolerances());

// Phi (+) Phi (+) Phi, the metric induced on the orbit space.
Mat quotient_metric(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                    const Tolerances& tol = default_tolerances());

// (x_i, Re z_i, Im z_i) in the declared coordinate order.
Vec moment_map(const Point3n& p);

struct LegendreOptions {
  std::optional<Vec> x0;  // starting point, 0 if absent
};

// Solves dF/dx (x, z) = 2 (u + conj u) by damped Newton on the strictly
// convex function F - 2 (u + conj u) . x, Hessian 4 Phi.
KahlerChartPoint legendre_solve(const FlatArrangement& arr, const DeformationMatrix& b,
                                const CVec& u, const CVec& z, const LegendreOptions& opts = {},
                                const Tolerances& tol = default_tolerances());

// K as a function on the (u, z) chart.
using KahlerPotentialFn = std::function<double(const CVec& u, const CVec& z)>;

// Chart function that re-solves the Legendre problem at every call.
KahlerPotentialFn kahler_potential(const FlatArrangement& arr, const DeformationMatrix& b,
                                   const Tolerances& tol = default_tolerances());

struct ReconstructedF {
  double F = 0.0;
  Vec x;  // -1/2 K_u
};

// F = K + sum 2 x_i (u_i + conj u_i) with x_i = -1/2 K_{u_i} from central
// differences of K in Re u_i (K does not depend on Im u_i).
ReconstructedF reconstruct_F_from_K(const KahlerPotentialFn& K, const CVec& u, const CVec& z,
                                    double step, bool richardson = false);

}  // namespace toric_hk
