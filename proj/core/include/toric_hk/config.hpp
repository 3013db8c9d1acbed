#pragma once

namespace toric_hk {

// Every numerical cutoff and pass/fail threshold used by the library lives
// here so that verdicts are reproducible from one place.
struct Tolerances {
  // |<x,u>-l1| + |<z,u>-(l2+i l3)| below this means "p lies on H_k".
  double incidence = 1e-9;
  // s_k + r_k below this means the log in F is on its branch locus.
  double branch = 1e-12;
  // Eigenvalues of B above -psd are accepted and clipped at zero; those
  // above psd (relative to ||B||) count towards the Taub-NUT order.
  double psd = 1e-9;

  // Finite-difference steps.
  double fd_step = 1e-4;          // F and K derivatives (Phi oracle, K Hessians)
  double phi_oracle_step = 5e-4;  // Hessian of F against closed-form Phi
  double polyharmonic_step = 1e-3;
  double ricci_step = 1e-3;
  double conformal_step = 1e-4;
  double stencil_clearance = 10.0;  // in units of the step

  // Newton iteration for the Legendre transform.
  double newton_residual = 1e-10;
  int newton_max_iterations = 200;
  double armijo = 1e-4;
  int max_backtracks = 60;

  // Acceptance thresholds.
  double phi_relative = 1e-6;
  double polyharmonic = 1e-5;
  double monge_ampere = 1e-4;
  double legendre_identity = 1e-5;
  double sp_condition = 1e-4;
  double ricci = 1e-3;
  double growth_exponent = 0.2;
  double growth_standard_error = 0.2;
  double round_trip = 1e-8;
  double local_model = 1e-12;
  double conformal = 1e-6;

  // Step-halving: residual(2h) / residual(h) must reach this unless the
  // residual at 2h is within rounding_factor * eps * scale / (2h)^2 of zero,
  // scale being the magnitude of the differenced quantity.
  double halving_ratio = 3.0;
  double rounding_factor = 100.0;

  // Polyharmonic and Ricci samples keep this far from the strings, where
  // higher derivatives of F and of the connection blow up.
  double fd_string_distance = 1.25;
};

inline const Tolerances& default_tolerances() {
  static const Tolerances t{};
  return t;
}

}  // namespace toric_hk
