#include "toric_hk/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "toric_hk/error.hpp"
#include "toric_hk/finite_difference.hpp"
#include "toric_hk/localmodel.hpp"

namespace toric_hk {

void ResidualReport::finalize() {
  samples = residuals.size();
  max_residual = 0.0;
  for (const double r : residuals) {
    // NaN counts as an unbounded residual.
    max_residual = std::isnan(r) ? std::numeric_limits<double>::infinity()
                                 : std::max(max_residual, r);
  }
  pass = max_residual <= tolerance;
}

double polyharmonic_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const Point3n& p, const Vec& direction, double h) {
  if (direction.size() != arr.dim()) throw DimensionError("direction dimension mismatch");
  const double norm = direction.norm();
  if (!(norm > 0.0)) throw InputError("direction must be nonzero");
  const Vec v = direction / norm;
  const CVec vc = v.cast<Complex>();
  const auto restricted = [&](double t, double a, double c) {
    return eval_F(arr, b, Point3n(p.x + t * v, p.z + Complex(a, c) * vc));
  };
  return std::abs(fd::laplacian3(restricted, h));
}

double phi_oracle_error(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                        double h, bool richardson) {
  const auto f = [&](const Vec& x) { return eval_F(arr, b, Point3n(x, p.z)); };
  const Mat fd = 0.25 * (richardson ? fd::hessian_richardson(f, p.x, h) : fd::hessian(f, p.x, h));
  const Mat phi = eval_Phi(arr, b, p).value;
  return (fd - phi).cwiseAbs().maxCoeff() / phi.cwiseAbs().maxCoeff();
}

CMat kahler_hessian(const FlatArrangement& arr, const DeformationMatrix& b,
                    const KahlerChartPoint& cp, double h) {
  const int n = arr.dim();
  const int m = 2 * n;  // complex variables (u, z)
  Vec q0(2 * m);
  for (int i = 0; i < n; ++i) {
    q0(i) = cp.u(i).real();
    q0(n + i) = cp.z(i).real();
    q0(m + i) = cp.u(i).imag();
    q0(m + n + i) = cp.z(i).imag();
  }
  LegendreOptions warm;
  warm.x0 = cp.x;
  const auto K = [&](const Vec& q) {
    CVec u(n), z(n);
    for (int i = 0; i < n; ++i) {
      u(i) = Complex(q(i), q(m + i));
      z(i) = Complex(q(n + i), q(m + n + i));
    }
    return legendre_solve(arr, b, u, z, warm).K;
  };
  const Mat H = fd::hessian(K, q0, h);
  // d_a dbar_b = 1/4 (d_pa d_pb + d_qa d_qb + i (d_pa d_qb - d_qa d_pb)).
  CMat M(m, m);
  for (int a = 0; a < m; ++a)
    for (int c = 0; c < m; ++c) {
      M(a, c) = 0.25 * Complex(H(a, c) + H(m + a, m + c), H(a, m + c) - H(m + a, c));
    }
  return M;
}

double monge_ampere_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const KahlerChartPoint& cp, double h) {
  if (arr.dim() != 1) throw DimensionError("Monge-Ampere residual needs n = 1");
  const CMat M = kahler_hessian(arr, b, cp, h);
  return std::abs(M(0, 0) * M(1, 1) - M(0, 1) * M(1, 0) - 1.0);
}

double sp_condition_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                             const KahlerChartPoint& cp, double h) {
  const int n = arr.dim();
  const CMat M = kahler_hessian(arr, b, cp, h);
  CMat J = CMat::Zero(2 * n, 2 * n);
  J.topRightCorner(n, n) = CMat::Identity(n, n);
  J.bottomLeftCorner(n, n) = -CMat::Identity(n, n);
  return (M.transpose() * J * M - J).cwiseAbs().maxCoeff();
}

double legendre_identity_residual(const FlatArrangement& arr, const DeformationMatrix& b,
                                  const KahlerChartPoint& cp, double h) {
  const int n = arr.dim();
  const CMat M = kahler_hessian(arr, b, cp, h);
  const Point3n p(cp.x, cp.z);
  const Mat fxx = 4.0 * eval_Phi(arr, b, p).value;
  const Mat fxx_inv = fxx.ldlt().solve(Mat::Identity(n, n));
  const CMat fxzbar = eval_connection(arr, b, p).coefficients.conjugate();
  const CMat kuu = -4.0 * fxx_inv.cast<Complex>();
  const CMat kuzbar = 2.0 * fxx_inv.cast<Complex>() * fxzbar;
  return std::max((M.topLeftCorner(n, n) - kuu).cwiseAbs().maxCoeff(),
                  (M.topRightCorner(n, n) - kuzbar).cwiseAbs().maxCoeff());
}

double ConformalCheck::worst() const {
  return std::max({identity_residual, remainder_deviation, laplacian_residual});
}

ConformalCheck conformal_factor_check(const FlatArrangement& arr, const DeformationMatrix& b,
                                      const Vec& sample, double h) {
  if (arr.dim() != 1) throw DimensionError("conformal factor check needs n = 1");
  if (sample.size() != 3) throw DimensionError("sample must be a point of R^3");
  const double bval = b.entries()(0, 0);
  std::vector<Vec> centers;
  for (const auto& f : arr.flats()) centers.push_back(Vec{{f.offset[0], f.offset[1], f.offset[2]}});
  const auto phi_at = [&](const Vec& c) { return eval_Phi(arr, b, Point3n::from_real(c)).value(0, 0); };
  const auto closed_form = [&](const Vec& c, int skip) {
    double acc = bval;
    for (std::size_t k = 0; k < centers.size(); ++k) {
      if (static_cast<int>(k) != skip) acc += arr.flats()[k].mass / (4.0 * (c - centers[k]).norm());
    }
    return acc;
  };

  ConformalCheck out;
  out.identity_residual = std::abs(phi_at(sample) - closed_form(sample, -1));

  const Vec probe_dir{{0.0, 1.0, 0.0}};
  for (std::size_t k = 0; k < centers.size(); ++k) {
    const double c = arr.flats()[k].mass / 4.0;
    const double at_center = closed_form(centers[k], static_cast<int>(k));
    double smallest_dev = 0.0;
    for (const double rho : {1e-2, 1e-4, 1e-6, 1e-8}) {
      const Vec q = centers[k] + rho * probe_dir;
      // the represented offset, not rho, once centers[k] is not exactly 0
      const double remainder = phi_at(q) - c / (q - centers[k]).norm();
      out.remainder_bound = std::max(out.remainder_bound, std::abs(remainder));
      smallest_dev = std::abs(remainder - at_center);
    }
    out.remainder_deviation = std::max(out.remainder_deviation, smallest_dev);
  }

  const auto shifted = [&](double a, double c, double d) {
    return phi_at(sample + Vec{{a, c, d}});
  };
  out.laplacian_residual = std::abs(fd::laplacian3(shifted, h));
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using Clock = std::chrono::steady_clock;

struct Context {
  const FlatArrangement& arr;
  const DeformationMatrix& b;
  const VerifyOptions& opts;
  Rng rng;
};

ResidualReport make_report(const std::string& name, double tolerance) {
  ResidualReport r;
  r.check_name = name;
  r.tolerance = tolerance;
  return r;
}

// Floor below which a finite-difference residual of step h is rounding.
double rounding_floor(const Tolerances& tol, double scale, double h) {
  return tol.rounding_factor * std::numeric_limits<double>::epsilon() * std::max(1.0, scale) /
         (h * h);
}

// Compares the worst residual at the doubled step with the worst at the
// working step over the same points; waived when the former is already
// rounding.
ResidualReport halving_report(const std::string& name, const std::vector<Point3n>& points,
                              const std::vector<double>& coarse, const std::vector<double>& fine,
                              const std::vector<double>& floors, const Tolerances& tol) {
  auto r = make_report(name + ":halving", 1.0 / tol.halving_ratio);
  if (coarse.empty()) return r;
  const auto worst = static_cast<std::size_t>(
      std::max_element(coarse.begin(), coarse.end()) - coarse.begin());
  const double fine_max = *std::max_element(fine.begin(), fine.end());
  r.points.push_back(points[worst]);
  r.residuals.push_back(coarse[worst] <= floors[worst] ? 0.0 : fine_max / coarse[worst]);
  r.extras.emplace_back("coarse_max", coarse[worst]);
  r.extras.emplace_back("fine_max", fine_max);
  return r;
}

template <class F>
void per_point(ResidualReport& r, F&& f) {
  for (const auto& p : r.points) {
    double v;
    try {
      v = f(p);
    } catch (const Error&) {
      v = std::numeric_limits<double>::infinity();
    }
    r.residuals.push_back(v);
  }
}

std::vector<ResidualReport> chart_check(Context& c, const std::string& name, double tolerance,
                                        double (*fn)(const FlatArrangement&,
                                                     const DeformationMatrix&,
                                                     const KahlerChartPoint&, double)) {
  auto r = make_report(name, tolerance);
  const auto cs = sample_chart_points(c.arr, c.b, c.opts.points, c.rng);
  for (const auto& s : cs) {
    r.points.push_back(s.dual);
    double v;
    try {
      LegendreOptions o;
      o.x0 = s.dual.x;
      const auto cp = legendre_solve(c.arr, c.b, s.u, s.z, o, c.opts.tol);
      v = fn(c.arr, c.b, cp, c.opts.tol.fd_step);
    } catch (const Error&) {
      v = std::numeric_limits<double>::infinity();
    }
    r.residuals.push_back(v);
  }
  return {r};
}

std::vector<ResidualReport> check_phi(Context& c) {
  auto r = make_report("phi", c.opts.tol.phi_relative);
  r.points = sample_points(c.arr, c.opts.points, c.rng);
  per_point(r, [&](const Point3n& p) {
    return phi_oracle_error(c.arr, c.b, p, c.opts.tol.phi_oracle_step);
  });
  return {r};
}

std::vector<ResidualReport> check_det(Context& c) {
  auto r = make_report("det-g", 1e-8);
  r.points = sample_points(c.arr, c.opts.points, c.rng);
  per_point(r, [&](const Point3n& p) {
    const double dphi = eval_Phi(c.arr, c.b, p).value.determinant();
    const double dg = eval_metric(c.arr, c.b, p).value.determinant();
    return std::abs(dg - dphi * dphi) / (dphi * dphi);
  });
  return {r};
}

std::vector<ResidualReport> check_polyharmonic(Context& c) {
  const auto& tol = c.opts.tol;
  const double h = tol.polyharmonic_step;
  auto r = make_report("polyharmonic", tol.polyharmonic);
  SamplingRegion region;
  region.min_string_distance = tol.fd_string_distance;
  r.points = sample_points(c.arr, c.opts.polyharmonic_points, c.rng, region);
  std::vector<Vec> dirs;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    dirs.push_back(sample_rational_direction(c.arr.dim(), c.rng));
  }
  std::vector<double> coarse, floors;
  for (std::size_t i = 0; i < r.points.size(); ++i) {
    try {
      r.residuals.push_back(polyharmonic_residual(c.arr, c.b, r.points[i], dirs[i], h));
      coarse.push_back(polyharmonic_residual(c.arr, c.b, r.points[i], dirs[i], 2.0 * h));
      floors.push_back(rounding_floor(tol, std::abs(eval_F(c.arr, c.b, r.points[i])), 2.0 * h));
    } catch (const Error&) {
      r.residuals.push_back(std::numeric_limits<double>::infinity());
      coarse.push_back(std::numeric_limits<double>::infinity());
      floors.push_back(0.0);
    }
  }
  return {r, halving_report("polyharmonic", r.points, coarse, r.residuals, floors, tol)};
}

std::vector<ResidualReport> check_ricci(Context& c) {
  const auto& tol = c.opts.tol;
  const double h = tol.ricci_step;
  auto r = make_report("ricci", tol.ricci);
  SamplingRegion region;
  region.min_string_distance = tol.fd_string_distance;
  r.points = sample_points(c.arr, c.opts.ricci_points, c.rng, region);
  std::vector<double> coarse, floors;
  for (const auto& p : r.points) {
    try {
      r.residuals.push_back(ricci_residual(c.arr, c.b, p, h, tol));
      coarse.push_back(ricci_residual(c.arr, c.b, p, 2.0 * h, tol));
      const Mat g = eval_metric(c.arr, c.b, p).value;
      const Mat ginv = g.inverse();
      floors.push_back(
          rounding_floor(tol, g.cwiseAbs().maxCoeff() * ginv.cwiseAbs().maxCoeff(), 2.0 * h));
    } catch (const Error&) {
      r.residuals.push_back(std::numeric_limits<double>::infinity());
      coarse.push_back(std::numeric_limits<double>::infinity());
      floors.push_back(0.0);
    }
  }
  return {r, halving_report("ricci", r.points, coarse, r.residuals, floors, tol)};
}

std::vector<ResidualReport> check_round_trip(Context& c) {
  auto r = make_report("round-trip", c.opts.tol.round_trip);
  const auto cs = sample_chart_points(c.arr, c.b, c.opts.points, c.rng);
  const auto K = kahler_potential(c.arr, c.b, c.opts.tol);
  for (const auto& s : cs) {
    r.points.push_back(s.dual);
    double v;
    try {
      const double F = eval_F(c.arr, c.b, s.dual);
      const auto rec = reconstruct_F_from_K(K, s.u, s.z, c.opts.tol.fd_step, true);
      v = std::abs(rec.F - F);
    } catch (const Error&) {
      v = std::numeric_limits<double>::infinity();
    }
    r.residuals.push_back(v);
  }
  return {r};
}

std::vector<ResidualReport> check_conformal(Context& c) {
  if (c.arr.dim() != 1) throw DimensionError("conformal check needs n = 1");
  auto r = make_report("conformal", c.opts.tol.conformal);
  r.points = sample_points(c.arr, c.opts.points, c.rng);
  per_point(r, [&](const Point3n& p) {
    return conformal_factor_check(c.arr, c.b, p.to_real(), c.opts.tol.conformal_step).worst();
  });
  return {r};
}

std::vector<ResidualReport> check_growth(Context& c) {
  auto r = make_report("growth", c.opts.tol.growth_exponent);
  const Point3n base = arrangement_center(c.arr);
  r.points.push_back(base);
  const double expected = 4.0 * c.arr.dim() - c.b.order();
  try {
    const auto est = volume_growth_exponent(c.arr, c.b, base, c.opts.growth, c.opts.tol);
    r.residuals.push_back(std::abs(est.exponent - expected));
    r.extras.emplace_back("exponent", est.exponent);
    r.extras.emplace_back("standard_error", est.standard_error);
  } catch (const Error&) {
    r.residuals.push_back(std::numeric_limits<double>::infinity());
  }
  r.extras.emplace_back("expected", expected);
  return {r};
}

std::vector<ResidualReport> check_local_models(Context& c) {
  const int n = c.arr.dim();
  auto r = make_report("local-models", c.opts.tol.local_model);
  std::normal_distribution<double> gauss;
  for (int s = 0; s < 10000; ++s) {
    Vec p(3 * n);
    for (int i = 0; i < 3 * n; ++i) p(i) = gauss(c.rng);
    const auto y = chart_inverse(p);
    const double scale = std::max(1.0, p.cwiseAbs().maxCoeff());
    const double err = std::max({(invariant_moment_map(y) - p).cwiseAbs().maxCoeff() / scale,
                                 y.relation_residual() / (scale * scale),
                                 std::max(0.0, -y.min_diagonal())});
    r.residuals.push_back(err);
  }
  std::vector<ResidualReport> out{r};

  // Isotropy weights are dual to the active normals at each stratum.
  const auto verdict = smoothness_check(c.arr, c.opts.tol);
  if (verdict.smooth && !c.arr.empty()) {
    auto w = make_report("local-models:weights", 0.0);
    for (const auto& st : intersection_strata(c.arr, c.opts.tol)) {
      const auto ws = stratum_weights(c.arr, st);
      const auto rows = c.arr.normal_matrix(st.active);
      w.points.push_back(st.witness);
      std::int64_t worst = 0;
      for (int k = 0; k < ws.size(); ++k)
        for (int j = 0; j < ws.size(); ++j) {
          const std::int64_t pairing = rows.row(k).dot(ws.alphas()[j].transpose());
          worst = std::max<std::int64_t>(worst, std::abs(pairing - (k == j ? 1 : 0)));
        }
      w.residuals.push_back(static_cast<double>(worst));
    }
    out.push_back(w);
  }
  return out;
}

using CheckFn = std::function<std::vector<ResidualReport>(Context&)>;

const std::map<std::string, CheckFn>& registry() {
  static const std::map<std::string, CheckFn> checks = {
      {"phi", check_phi},
      {"det-g", check_det},
      {"polyharmonic", check_polyharmonic},
      {"monge-ampere",
       [](Context& c) {
         return chart_check(c, "monge-ampere", c.opts.tol.monge_ampere, monge_ampere_residual);
       }},
      {"legendre-identity",
       [](Context& c) {
         return chart_check(c, "legendre-identity", c.opts.tol.legendre_identity,
                            legendre_identity_residual);
       }},
      {"sp-condition",
       [](Context& c) {
         return chart_check(c, "sp-condition", c.opts.tol.sp_condition, sp_condition_residual);
       }},
      {"ricci", check_ricci},
      {"round-trip", check_round_trip},
      {"conformal", check_conformal},
      {"growth", check_growth},
      {"local-models", check_local_models},
  };
  return checks;
}

}  // namespace

const std::vector<std::string>& known_checks() {
  static const std::vector<std::string> names = {
      "phi",          "det-g", "polyharmonic", "monge-ampere", "legendre-identity", "sp-condition",
      "ricci",        "round-trip", "conformal", "growth",      "local-models"};
  return names;
}

std::vector<std::string> default_checks(int n) {
  std::vector<std::string> out = {"phi", "det-g", "polyharmonic"};
  if (n == 1) {
    out.insert(out.end(), {"monge-ampere", "legendre-identity"});
  }
  out.insert(out.end(), {"sp-condition", "ricci", "round-trip"});
  if (n == 1) out.push_back("conformal");
  out.push_back("growth");
  return out;
}

std::vector<ResidualReport> run_verification(const FlatArrangement& arr, const DeformationMatrix& b,
                                             const VerifyOptions& opts) {
  std::vector<std::string> names = opts.checks.empty() ? default_checks(arr.dim()) : opts.checks;
  if (opts.local_models && std::find(names.begin(), names.end(), "local-models") == names.end()) {
    names.push_back("local-models");
  }
  for (const auto& name : names) {
    if (!registry().count(name)) throw InputError("unknown check '" + name + "'");
    if ((name == "monge-ampere" || name == "conformal") && arr.dim() != 1) {
      throw DimensionError("check '" + name + "' needs n = 1");
    }
  }
  std::vector<ResidualReport> out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    // Each check draws from its own stream so that selecting a subset does
    // not change the points of the others.
    const auto pos = std::find(known_checks().begin(), known_checks().end(), names[i]);
    std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                      static_cast<std::uint32_t>(pos - known_checks().begin())};
    Context ctx{arr, b, opts, Rng(seq)};
    const auto start = Clock::now();
    auto reports = registry().at(names[i])(ctx);
    const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
    for (auto& r : reports) {
      r.wall_time_s = elapsed;
      r.finalize();
      out.push_back(std::move(r));
    }
  }
  return out;
}

}  // namespace toric_hk
