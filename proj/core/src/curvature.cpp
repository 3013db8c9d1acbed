#include <cmath>
#include <sstream>
#include <vector>

#include <Eigen/Cholesky>

#include "toric_hk/error.hpp"
#include "toric_hk/verify.hpp"

namespace toric_hk {
namespace {

void check_clearance(const FlatArrangement& arr, const Point3n& p, double h,
                     const Tolerances& tol) {
  const double clearance = tol.stencil_clearance * h;
  for (std::size_t k = 0; k < arr.size(); ++k) {
    const auto t = flat_terms(arr.flats()[k], p);
    if (t.r <= tol.incidence) throw OnFlatError("point lies on a flat");
    std::ostringstream msg;
    if (t.r < clearance) {
      msg << "stencil of step " << h << " comes within " << t.r << " of flat " << k;
      throw StencilClippedError(msg.str());
    }
    if (t.s < 0.0 && std::abs(t.v) < clearance) {
      msg << "stencil of step " << h << " crosses the string of flat " << k;
      throw StencilClippedError(msg.str());
    }
  }
}

}  // namespace

Mat ricci_tensor(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                 double h, const Tolerances& tol) {
  if (!(h > 0.0)) throw InputError("step must be positive");
  check_clearance(arr, p, h, tol);
  const int n = arr.dim();
  const int base = 3 * n;  // coordinates the metric depends on
  const int dim = 4 * n;
  const Vec c0 = p.to_real();

  const auto metric_at = [&](const Vec& c) {
    return eval_metric(arr, b, Point3n::from_real(c), tol).value;
  };

  const Mat g = metric_at(c0);
  std::vector<Mat> dg(dim, Mat::Zero(dim, dim));
  std::vector<std::vector<Mat>> ddg(dim, std::vector<Mat>(dim, Mat::Zero(dim, dim)));
  {
    std::vector<Mat> plus(base), minus(base);
    Vec c = c0;
    for (int a = 0; a < base; ++a) {
      c(a) = c0(a) + h;
      plus[a] = metric_at(c);
      c(a) = c0(a) - h;
      minus[a] = metric_at(c);
      c(a) = c0(a);
      dg[a] = (plus[a] - minus[a]) / (2.0 * h);
      ddg[a][a] = (plus[a] - 2.0 * g + minus[a]) / (h * h);
    }
    for (int a = 0; a < base; ++a) {
      for (int e = a + 1; e < base; ++e) {
        Mat acc = Mat::Zero(dim, dim);
        for (const int sa : {1, -1})
          for (const int se : {1, -1}) {
            c(a) = c0(a) + sa * h;
            c(e) = c0(e) + se * h;
            acc += (sa * se) * metric_at(c);
          }
        c(a) = c0(a);
        c(e) = c0(e);
        ddg[a][e] = ddg[e][a] = acc / (4.0 * h * h);
      }
    }
  }

  const Mat ginv = g.ldlt().solve(Mat::Identity(dim, dim));
  std::vector<Mat> dginv(dim, Mat::Zero(dim, dim));
  for (int a = 0; a < base; ++a) dginv[a] = -ginv * dg[a] * ginv;

  // Lowered symbols G[m](i, j) = 1/2 (d_i g_mj + d_j g_mi - d_m g_ij) and
  // their derivatives dG[l][m](i, j).
  std::vector<Mat> lower(dim, Mat::Zero(dim, dim));
  std::vector<std::vector<Mat>> dlower(dim, std::vector<Mat>(dim, Mat::Zero(dim, dim)));
  for (int m = 0; m < dim; ++m)
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j) {
        lower[m](i, j) = 0.5 * (dg[i](m, j) + dg[j](m, i) - dg[m](i, j));
        for (int l = 0; l < base; ++l) {
          dlower[l][m](i, j) = 0.5 * (ddg[l][i](m, j) + ddg[l][j](m, i) - ddg[l][m](i, j));
        }
      }

  // Gamma[k](i, j) and dGamma[l][k](i, j).
  std::vector<Mat> gamma(dim, Mat::Zero(dim, dim));
  std::vector<std::vector<Mat>> dgamma(dim, std::vector<Mat>(dim, Mat::Zero(dim, dim)));
  for (int k = 0; k < dim; ++k)
    for (int m = 0; m < dim; ++m) {
      gamma[k] += ginv(k, m) * lower[m];
      for (int l = 0; l < base; ++l) {
        dgamma[l][k] += dginv[l](k, m) * lower[m] + ginv(k, m) * dlower[l][m];
      }
    }

  Mat ric = Mat::Zero(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) {
      double acc = 0.0;
      for (int k = 0; k < dim; ++k) {
        acc += dgamma[k][k](i, j) - dgamma[j][k](i, k);
        for (int l = 0; l < dim; ++l) {
          acc += gamma[k](k, l) * gamma[l](i, j) - gamma[k](j, l) * gamma[l](i, k);
        }
      }
      ric(i, j) = acc;
    }
  return 0.5 * (ric + ric.transpose());
}

double ricci_residual(const FlatArrangement& arr, const DeformationMatrix& b, const Point3n& p,
                      double h, const Tolerances& tol) {
  return ricci_tensor(arr, b, p, h, tol).cwiseAbs().maxCoeff();
}

}  // namespace toric_hk
