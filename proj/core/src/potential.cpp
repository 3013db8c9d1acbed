#include "toric_hk/potential.hpp"

#include <cmath>
#include <sstream>

#include <Eigen/Cholesky>
#include <Eigen/LU>

#include "toric_hk/error.hpp"

namespace toric_hk {
namespace {

void check_dims(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p) {
  if (b.dim() != arr.dim() || p.dim() != arr.dim()) {
    throw DimensionError("arrangement, deformation matrix and point dimensions differ");
  }
}

[[noreturn]] void throw_branch(std::size_t k, const FlatTerms& t) {
  std::ostringstream msg;
  msg << "point on the branch locus of flat " << k << " (s+r = " << t.s_plus_r << ")";
  throw BranchLocusError(msg.str());
}

[[noreturn]] void throw_on_flat(std::size_t k, const FlatTerms& t) {
  std::ostringstream msg;
  msg << "point lies on flat " << k << " (r = " << t.r << ")";
  throw OnFlatError(msg.str());
}

}  // namespace

Mat ConnectionForm::real_form() const {
  const auto n = coefficients.rows();
  Mat a(n, 2 * n);
  a.leftCols(n) = 0.5 * coefficients.imag();
  a.rightCols(n) = 0.5 * coefficients.real();
  return a;
}

double eval_F(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
              const Tolerances& tol) {
  check_dims(arr, b, p);
  double f = 0.0;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& flat = arr.flats()[k];
    const auto t = flat_terms(flat, p);
    if (t.s_plus_r <= tol.branch) throw_branch(k, t);
    f += flat.mass * (t.s * std::log(t.s_plus_r) - t.r);
  }
  const Mat& bm = b.entries();
  f += 2.0 * p.x.dot(bm * p.x);
  // z^T B conj(z) is real for real symmetric B.
  f -= (p.z.transpose() * bm.cast<Complex>() * p.z.conjugate())(0).real();
  return f;
}

Vec eval_F_gradient_x(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                      const Tolerances& tol) {
  check_dims(arr, b, p);
  Vec g = 4.0 * b.entries() * p.x;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& flat = arr.flats()[k];
    const auto t = flat_terms(flat, p);
    if (t.s_plus_r <= tol.branch) throw_branch(k, t);
    g += flat.mass * std::log(t.s_plus_r) * flat.normal.as_real();
  }
  return g;
}

PhiMatrix eval_Phi(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                   const Tolerances& tol) {
  check_dims(arr, b, p);
  Mat phi = b.entries();
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& flat = arr.flats()[k];
    const auto t = flat_terms(flat, p);
    if (t.r <= tol.incidence) throw_on_flat(k, t);
    const Vec u = flat.normal.as_real();
    phi += (0.25 * flat.mass / t.r) * u * u.transpose();
  }
  return {phi};
}

ConnectionForm eval_connection(const FlatArrangement& arr, const DeformationMatrix& b,
                               const Point3n& p, const Tolerances& tol) {
  check_dims(arr, b, p);
  const int n = arr.dim();
  CMat c = CMat::Zero(n, n);
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto& flat = arr.flats()[k];
    const auto t = flat_terms(flat, p);
    if (t.r <= tol.incidence) throw_on_flat(k, t);
    if (t.s_plus_r <= tol.branch) throw_branch(k, t);
    const Vec u = flat.normal.as_real();
    const Complex w = flat.mass * std::conj(t.v) / (2.0 * t.r * t.s_plus_r);
    c += w * (u * u.transpose()).cast<Complex>();
  }
  return {c};
}

MetricTensor eval_metric(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                         const Tolerances& tol) {
  const int n = arr.dim();
  const Mat phi = eval_Phi(arr, b, p, tol).value;
  const Mat a = eval_connection(arr, b, p, tol).real_form();
  Eigen::LDLT<Mat> ldlt(phi);
  const Mat phi_inv = ldlt.solve(Mat::Identity(n, n));

  Mat g = Mat::Zero(4 * n, 4 * n);
  g.block(0, 0, n, n) = phi;
  g.block(n, n, n, n) = phi;
  g.block(2 * n, 2 * n, n, n) = phi;
  // (dy + A)^T Phi^-1 (dy + A) with A acting on (d Re z, d Im z).
  const Mat pa = phi_inv * a;
  g.block(n, n, 2 * n, 2 * n) += a.transpose() * pa;
  g.block(n, 3 * n, 2 * n, n) = pa.transpose();
  g.block(3 * n, n, n, 2 * n) = pa;
  g.block(3 * n, 3 * n, n, n) = phi_inv;
  return {0.5 * (g + g.transpose())};
}

Mat quotient_metric(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                    const Tolerances& tol) {
  const int n = arr.dim();
  const Mat phi = eval_Phi(arr, b, p, tol).value;
  Mat q = Mat::Zero(3 * n, 3 * n);
  for (int blk = 0; blk < 3; ++blk) q.block(blk * n, blk * n, n, n) = phi;
  return q;
}

Vec moment_map(const Point3n& p) { return p.to_real(); }

}  // namespace toric_hk
