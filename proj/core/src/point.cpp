#include "toric_hk/point.hpp"

#include <string>

#include "toric_hk/error.hpp"

namespace toric_hk {

Point3n::Point3n(Vec x_, CVec z_) : x(std::move(x_)), z(std::move(z_)) {
  if (x.size() != z.size()) {
    throw DimensionError("point has " + std::to_string(x.size()) + " real and " +
                         std::to_string(z.size()) + " complex coordinates");
  }
}

Point3n Point3n::zero(int n) { return {Vec::Zero(n), CVec::Zero(n)}; }

Point3n Point3n::from_real(std::span<const double> coords) {
  if (coords.size() % 3 != 0 || coords.empty()) {
    throw DimensionError("expected 3n real coordinates, got " + std::to_string(coords.size()));
  }
  const auto n = static_cast<Eigen::Index>(coords.size() / 3);
  Point3n p = zero(static_cast<int>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    p.x(i) = coords[i];
    p.z(i) = {coords[n + i], coords[2 * n + i]};
  }
  return p;
}

Point3n Point3n::from_real(const Vec& coords) {
  return from_real(std::span<const double>(coords.data(), static_cast<std::size_t>(coords.size())));
}

Vec Point3n::to_real() const {
  const auto n = x.size();
  Vec out(3 * n);
  out.head(n) = x;
  out.segment(n, n) = z.real();
  out.tail(n) = z.imag();
  return out;
}

bool Point3n::finite() const { return x.allFinite() && z.allFinite(); }

}  // namespace toric_hk
