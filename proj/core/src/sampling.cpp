#include "toric_hk/sampling.hpp"

#include <cmath>

#include "toric_hk/error.hpp"

namespace toric_hk {

Point3n arrangement_center(const FlatArrangement& arr) {
  Point3n c = Point3n::zero(arr.dim());
  if (arr.empty()) return c;
  for (const auto& f : arr.flats()) {
    const Vec u = f.normal.as_real();
    const double uu = u.squaredNorm();
    c.x += (f.offset[0] / uu) * u;
    c.z += (f.complex_offset() / uu) * u.cast<Complex>();
  }
  c.x /= static_cast<double>(arr.size());
  c.z /= static_cast<double>(arr.size());
  return c;
}

bool admissible(const FlatArrangement& arr, const Point3n& p, const SamplingRegion& region) {
  for (const auto& f : arr.flats()) {
    const auto t = flat_terms(f, p);
    const double unorm = f.normal.as_real().norm();
    if (t.r / unorm < region.min_flat_distance) return false;
    if (t.s < 0.0 && std::abs(t.v) / unorm < region.min_string_distance) return false;
  }
  return true;
}

std::vector<Point3n> sample_points(const FlatArrangement& arr, std::size_t count, Rng& rng,
                                   const SamplingRegion& region) {
  const int n = arr.dim();
  const Point3n center = arrangement_center(arr);
  std::uniform_real_distribution<double> coord(-region.half_width, region.half_width);
  std::vector<Point3n> out;
  out.reserve(count);
  std::size_t attempts = 0;
  const std::size_t max_attempts = 1000 * (count + 1);
  while (out.size() < count) {
    if (++attempts > max_attempts) {
      throw InsufficientSamplesError("sampling region leaves too few admissible points");
    }
    Point3n p = center;
    for (int i = 0; i < n; ++i) {
      p.x(i) += coord(rng);
      p.z(i) += Complex(coord(rng), coord(rng));
    }
    if (admissible(arr, p, region)) out.push_back(std::move(p));
  }
  return out;
}

Vec sample_rational_direction(int n, Rng& rng, int bound) {
  std::uniform_int_distribution<int> entry(-bound, bound);
  Vec v = Vec::Zero(n);
  while (v.squaredNorm() == 0.0) {
    for (int i = 0; i < n; ++i) v(i) = entry(rng);
  }
  return v;
}

std::vector<ChartSample> sample_chart_points(const FlatArrangement& arr, const DeformationMatrix& b,
                                             std::size_t count, Rng& rng,
                                             const SamplingRegion& region) {
  std::uniform_real_distribution<double> imag_part(-1.0, 1.0);
  std::vector<ChartSample> out;
  for (auto& p : sample_points(arr, count, rng, region)) {
    // Re u = F_x / 4 makes p.x the Legendre dual of (u, z).
    const Vec re_u = 0.25 * eval_F_gradient_x(arr, b, p);
    CVec u(arr.dim());
    for (int i = 0; i < arr.dim(); ++i) u(i) = Complex(re_u(i), imag_part(rng));
    out.push_back({u, p.z, p});
  }
  return out;
}

}  // namespace toric_hk
