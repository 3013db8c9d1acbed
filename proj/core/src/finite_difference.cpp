#include "toric_hk/finite_difference.hpp"

namespace toric_hk::fd {

Vec gradient(const ScalarField& f, const Vec& at, double h) {
  const auto n = at.size();
  Vec g(n);
  Vec p = at;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = at(i) + h;
    const double fp = f(p);
    p(i) = at(i) - h;
    const double fm = f(p);
    p(i) = at(i);
    g(i) = (fp - fm) / (2.0 * h);
  }
  return g;
}

Mat hessian(const ScalarField& f, const Vec& at, double h) {
  const auto n = at.size();
  Mat hess(n, n);
  const double f0 = f(at);
  Vec p = at;
  for (Eigen::Index i = 0; i < n; ++i) {
    p(i) = at(i) + h;
    const double fp = f(p);
    p(i) = at(i) - h;
    const double fm = f(p);
    p(i) = at(i);
    hess(i, i) = (fp - 2.0 * f0 + fm) / (h * h);
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (const int si : {1, -1})
        for (const int sj : {1, -1}) {
          p(i) = at(i) + si * h;
          p(j) = at(j) + sj * h;
          acc += si * sj * f(p);
        }
      p(i) = at(i);
      p(j) = at(j);
      hess(i, j) = hess(j, i) = acc / (4.0 * h * h);
    }
  }
  return hess;
}

Mat hessian_richardson(const ScalarField& f, const Vec& at, double h) {
  return (4.0 * hessian(f, at, 0.5 * h) - hessian(f, at, h)) / 3.0;
}

double laplacian3(const std::function<double(double, double, double)>& f, double h) {
  const double f0 = f(0, 0, 0);
  const double sum = f(h, 0, 0) + f(-h, 0, 0) + f(0, h, 0) + f(0, -h, 0) + f(0, 0, h) + f(0, 0, -h);
  return (sum - 6.0 * f0) / (h * h);
}

}  // namespace toric_hk::fd
