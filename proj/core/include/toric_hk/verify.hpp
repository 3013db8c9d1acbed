#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/config.hpp"
#include "toric_hk/potential.hpp"
#include "toric_hk/sampling.hpp"

namespace toric_hk {

// Outcome of one residual check over a set of sample points.
struct ResidualReport {
  std::string check_name;
  std::vector<Point3n> points;
  std::vector<double> residuals;
  double max_residual = 0.0;
  double tolerance = 0.0;
  bool pass = false;
  std::size_t samples = 0;
  double wall_time_s = 0.0;
  // Free-form numbers attached by a check (step-halving ratios, fitted
  // exponents); serialised alongside the residuals.
  std::vector<std::pair<std::string, double>> extras;

  // Recomputes max_residual and pass from residuals and tolerance.
  void finalize();
};

// |Laplacian| of F restricted to the 3-plane (t, w) -> (x + t v, z + w v),
// v normalised to unit length. 7-point stencil with step h.
double polyharmonic_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const Point3n& p, const Vec& direction, double h);

// Max relative deviation of the closed-form Phi from 1/4 of the central
// finite-difference x-Hessian of F.
double phi_oracle_error(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                        double h, bool richardson = false);

// M = [[K_{u ubar}, K_{u zbar}], [K_{z ubar}, K_{z zbar}]] by central
// differences of K over (Re u, Im u, Re z, Im z); every K value re-solves
// the Legendre problem (warm-started at cp.x).
CMat kahler_hessian(const FlatArrangement& arr, const DeformationMatrix& b,
                    const KahlerChartPoint& cp, double h);

// n = 1 only: |K_{u ubar} K_{z zbar} - K_{u zbar} K_{z ubar} - 1|.
double monge_ampere_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const KahlerChartPoint& cp, double h);

// ||M^T J M - J||_max with J = [[0, I], [-I, 0]].
double sp_condition_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const KahlerChartPoint& cp, double h);

// Max deviation of the finite-difference blocks from
// K_{u ubar} = -4 F_xx^-1 and K_{u zbar} = 2 F_xx^-1 F_{x zbar}.
double legendre_identity_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                                  const KahlerChartPoint& cp, double h);

// Ricci tensor of eval_metric by nested central differences (the metric does
// not depend on y). Throws StencilClippedError if the stencil comes within
// tol.stencil_clearance * h of a flat or Dirac string.
Mat ricci_tensor(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                 double h, const Tolerances& tol = default_tolerances());
double ricci_residual(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                      double h, const Tolerances& tol = default_tolerances());

// n = 1: Phi(x) against sum_k a_k / (4 |x - x_k|) + b (the arrangement's
// masses carry the 1/4), plus the local expansion Phi = c/r + phi near each
// center and harmonicity of Phi in R^3.
struct ConformalCheck {
  double identity_residual = 0.0;
  // max over centers of |phi(rho) - phi(0)| at the smallest probe radius.
  double remainder_deviation = 0.0;
  // max over centers of |phi| at the probe radii (phi stays bounded).
  double remainder_bound = 0.0;
  double laplacian_residual = 0.0;

  double worst() const;
};

ConformalCheck conformal_factor_check(const FlatArrangement& arr, const DeformationMatrix& b,
                                      const Vec& sample, double h);

struct GrowthOptions {
  std::vector<double> radii{50.0, 100.0, 200.0, 400.0};
  std::size_t samples = 4000;  // random (direction, fiber angle) draws
  std::uint64_t seed = 20240601;
  double radial_growth = 0.01;  // relative step of the radial quadrature
};

struct GrowthEstimate {
  double exponent = 0.0;
  double standard_error = 0.0;
  std::vector<double> radii;
  std::vector<double> volumes;
  std::size_t samples = 0;
};

// Fits log Vol(ball(base, R)) against log R. Ball membership uses the
// radial quotient-metric length from the base point plus the fiber
// distance sqrt(theta^T Phi^-1 theta); the volume density is det Phi with
// y in [0, 2 pi)^n. Throws InsufficientSamplesError if the fit's
// standard error exceeds tol.growth_standard_error.
GrowthEstimate volume_growth_exponent(const FlatArrangement& arr, const DeformationMatrix& b,
                                      const Point3n& base, const GrowthOptions& opts = {},
                                      const Tolerances& tol = default_tolerances());

}  // namespace toric_hk

namespace toric_hk {

struct VerifyOptions {
  // Empty selects the default suite for the arrangement's dimension.
  std::vector<std::string> checks;
  std::uint64_t seed = 1;
  std::size_t points = 20;
  std::size_t polyharmonic_points = 50;
  std::size_t ricci_points = 10;
  bool local_models = false;
  GrowthOptions growth;
  Tolerances tol;
};

// Every check name understood by run_verification.
const std::vector<std::string>& known_checks();
std::vector<std::string> default_checks(int n);

// Runs the selected checks on seeded sample points. Step-halved checks add a
// companion report "<name>:halving" holding the ratio of the worst residual
// at the working step h to the worst at 2h (0 when the latter is rounding).
std::vector<ResidualReport> run_verification(const FlatArrangement& arr, const DeformationMatrix& b,
                                             const VerifyOptions& opts = {});

}  // namespace toric_hk
