#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/LU>

#include "toric_hk/error.hpp"
#include "toric_hk/parallel.hpp"
#include "toric_hk/verify.hpp"

namespace toric_hk {
namespace {

constexpr double kInnerRadius = 1e-3;
constexpr int kMaxRadialSteps = 200000;

struct Draw {
  Vec direction;  // unit vector in R^3n
  Vec angle;      // fiber angles in [-pi, pi]^n
};

// Per-draw radial integrals of det Phi rho^(3n-1) over the admitted part of
// the ray, one per radius.
Vec ray_volumes(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& base,
                const Draw& d, const std::vector<double>& radii, double growth,
                const Tolerances& tol) {
  const int n = arr.dim();
  const int dim = 3 * n;
  const Vec origin = base.to_real();
  const double r_max = radii.back();
  Vec out = Vec::Zero(static_cast<Eigen::Index>(radii.size()));

  double lo = 0.0, hi = kInnerRadius, dist = 0.0;
  for (int step = 0; step < kMaxRadialSteps; ++step) {
    const double mid = 0.5 * (lo + hi);
    const double width = hi - lo;
    Mat phi;
    try {
      phi = eval_Phi(arr, b, Point3n::from_real(origin + mid * d.direction), tol).value;
    } catch (const OnFlatError&) {
      lo = hi;
      hi *= 1.0 + growth;
      continue;
    }
    double speed2 = 0.0;
    for (int blk = 0; blk < 3; ++blk) {
      const Vec w = d.direction.segment(blk * n, n);
      speed2 += w.dot(phi * w);
    }
    const double det = phi.determinant();
    if (!(det > 0.0)) throw InputError("Phi is degenerate along the ray");
    const double dist_mid = dist + 0.5 * width * std::sqrt(speed2);
    if (dist_mid > r_max) return out;
    Eigen::LDLT<Mat> ldlt(phi);
    const double fiber = std::sqrt(std::max(0.0, d.angle.dot(ldlt.solve(d.angle))));
    const double weight = det * std::pow(mid, dim - 1) * width;
    for (std::size_t i = 0; i < radii.size(); ++i) {
      if (dist_mid + fiber <= radii[i]) out(static_cast<Eigen::Index>(i)) += weight;
    }
    dist += width * std::sqrt(speed2);
    lo = hi;
    hi *= 1.0 + growth;
  }
  throw NoConvergenceError("radial quadrature did not leave the largest ball");
}

}  // namespace

GrowthEstimate volume_growth_exponent(const FlatArrangement& arr, const DeformationMatrix& b,
                                      const Point3n& base, const GrowthOptions& opts,
                                      const Tolerances& tol) {
  const int n = arr.dim();
  if (base.dim() != n) throw DimensionError("base point dimension mismatch");
  if (opts.radii.size() < 2) throw InputError("need at least two radii");
  for (std::size_t i = 0; i < opts.radii.size(); ++i) {
    if (!(opts.radii[i] > 0.0) || (i > 0 && !(opts.radii[i] > opts.radii[i - 1]))) {
      throw InputError("radii must be positive and increasing");
    }
  }
  if (opts.samples < 2) throw InputError("need at least two samples");
  if (opts.samples > 1000000) throw InputError("at most 10^6 samples");
  if (!(opts.radial_growth > 0.0)) throw InputError("radial growth must be positive");
  if (arr.empty() && b.order() < n) {
    throw InputError("Phi degenerates: no flats and B is not positive definite");
  }

  const int dim = 3 * n;
  const int m = b.order();
  Rng rng(opts.seed);
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);

  // For 0 < m < n the ball's volume concentrates near ker B (x) R^3, in a
  // cone of angle ~ 1/R about it. There the angle alpha to that subspace is
  // drawn from a mixture of log-uniform and uniform densities and each draw
  // carries the weight (uniform sphere density) / (sampling density).
  const bool split = m > 0 && m < n;
  Mat kernel, range;
  double log_span = 0.0, beta_norm = 0.0;
  const int kd = 3 * (n - m), pd = 3 * m;
  constexpr double kMinAngle = 1e-6;
  if (split) {
    Eigen::SelfAdjointEigenSolver<Mat> eig(b.entries());
    kernel = eig.eigenvectors().leftCols(n - m);  // eigenvalues in increasing order
    range = eig.eigenvectors().rightCols(m);
    log_span = std::log(0.5 * std::numbers::pi / kMinAngle);
    // int_0^{pi/2} cos^{kd-1} sin^{pd-1} = B(kd/2, pd/2) / 2
    beta_norm = 0.5 * std::exp(std::lgamma(0.5 * kd) + std::lgamma(0.5 * pd) -
                               std::lgamma(0.5 * (kd + pd)));
  }
  const auto unit_gauss = [&](int len) {
    Vec g(len);
    for (int i = 0; i < len; ++i) g(i) = gauss(rng);
    return Vec(g.normalized());
  };
  // Embeds per-block coordinates against a basis of R^n into R^3n.
  const auto embed = [&](const Vec& coeff, const Mat& basis) {
    Vec out = Vec::Zero(dim);
    const auto cols = basis.cols();
    for (int blk = 0; blk < 3; ++blk) out.segment(blk * n, n) = basis * coeff.segment(blk * cols, cols);
    return out;
  };

  std::vector<Draw> draws(opts.samples);
  std::vector<double> weights(opts.samples, 1.0);
  for (std::size_t s = 0; s < draws.size(); ++s) {
    auto& d = draws[s];
    if (split) {
      double alpha;
      if (unit(rng) < 0.5) {
        alpha = 0.5 * std::numbers::pi * std::exp(-log_span * unit(rng));
      } else {
        alpha = 0.5 * std::numbers::pi * unit(rng);
      }
      const double q = 0.5 * (alpha >= kMinAngle ? 1.0 / (log_span * alpha) : 0.0) +
                       0.5 * 2.0 / std::numbers::pi;
      const double p = std::pow(std::cos(alpha), kd - 1) * std::pow(std::sin(alpha), pd - 1) /
                       beta_norm;
      weights[s] = p / q;
      d.direction = std::cos(alpha) * embed(unit_gauss(kd), kernel) +
                    std::sin(alpha) * embed(unit_gauss(pd), range);
    } else {
      d.direction = unit_gauss(dim);
    }
    d.angle.resize(n);
    for (int i = 0; i < n; ++i) d.angle(i) = angle(rng);
  }

  const auto k = static_cast<Eigen::Index>(opts.radii.size());
  Mat per_draw(static_cast<Eigen::Index>(opts.samples), k);
  parallel_for(opts.samples, [&](std::size_t s) {
    per_draw.row(static_cast<Eigen::Index>(s)) =
        weights[s] *
        ray_volumes(arr, b, base, draws[s], opts.radii, opts.radial_growth, tol).transpose();
  });

  const double sphere = 2.0 * std::pow(std::numbers::pi, 0.5 * dim) / std::tgamma(0.5 * dim);
  const double prefactor = std::pow(2.0 * std::numbers::pi, n) * sphere;
  const Vec mean = per_draw.colwise().mean().transpose();
  if ((mean.array() <= 0.0).any()) {
    throw InsufficientSamplesError("a ball received no volume; radii too small");
  }

  GrowthEstimate est;
  est.radii = opts.radii;
  est.samples = opts.samples;
  Vec lx(k), ly(k);
  for (Eigen::Index i = 0; i < k; ++i) {
    lx(i) = std::log(opts.radii[i]);
    ly(i) = std::log(prefactor * mean(i));
    est.volumes.push_back(prefactor * mean(i));
  }
  const double mx = lx.mean(), my = ly.mean();
  const Vec dx = lx.array() - mx;
  const double sxx = dx.squaredNorm();
  const double slope = dx.dot(ly.array().matrix() - Vec::Constant(k, my)) / sxx;
  const Vec resid = (ly.array() - my).matrix() - slope * dx;
  const double fit_var = k > 2 ? resid.squaredNorm() / static_cast<double>(k - 2) / sxx : 0.0;

  // Monte-Carlo variance of the slope by the delta method: the slope is
  // sum_i c_i log V_i with c_i = dx_i / sxx.
  const Vec c = dx / sxx;
  Vec y(static_cast<Eigen::Index>(opts.samples));
  for (Eigen::Index s = 0; s < y.size(); ++s) {
    y(s) = (per_draw.row(s).transpose().array() / mean.array() * c.array()).sum();
  }
  const double ybar = y.mean();
  const double mc_var =
      (y.array() - ybar).square().sum() / static_cast<double>(y.size() - 1) / y.size();

  est.exponent = slope;
  est.standard_error = std::sqrt(fit_var + mc_var);
  if (est.standard_error > tol.growth_standard_error) {
    std::ostringstream msg;
    msg << "growth fit standard error " << est.standard_error << " exceeds "
        << tol.growth_standard_error;
    throw InsufficientSamplesError(msg.str());
  }
  return est;
}

}  // namespace toric_hk
