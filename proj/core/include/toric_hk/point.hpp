#pragma once

#include <complex>
#include <span>

#include <Eigen/Core>

namespace toric_hk {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Complex = std::complex<double>;

// A point (x, z) of R^n x C^n = R^3 (x) R^n, the target of the moment map.
struct Point3n {
  Vec x;
  CVec z;

  Point3n() = default;
  Point3n(Vec x_, CVec z_);
  static Point3n zero(int n);
  // Real coordinates in the order (x_1..x_n, Re z_1..Re z_n, Im z_1..Im z_n).
  static Point3n from_real(std::span<const double> coords);
  static Point3n from_real(const Vec& coords);

  int dim() const { return static_cast<int>(x.size()); }
  Vec to_real() const;
  bool finite() const;
};

}  // namespace toric_hk
