#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/potential.hpp"

namespace toric_hk {

using Rng = std::mt19937_64;

// Region for random evaluation points: a box around the arrangement, kept
// away from every flat and from the Dirac string {v_k = 0, s_k < 0} where
// the connection of F is singular.
struct SamplingRegion {
  double half_width = 2.0;
  double min_flat_distance = 0.5;
  double min_string_distance = 0.25;
};

// Center of the box: mean of the flats' points of closest approach to 0.
Point3n arrangement_center(const FlatArrangement& arr);

bool admissible(const FlatArrangement& arr, const Point3n& p, const SamplingRegion& region);

std::vector<Point3n> sample_points(const FlatArrangement& arr, std::size_t count, Rng& rng,
                                   const SamplingRegion& region = {});

// Random nonzero integer direction with entries in [-bound, bound].
Vec sample_rational_direction(int n, Rng& rng, int bound = 3);

// Chart points (u, z) whose Legendre dual is a sampled off-flat point; each
// comes with that dual point for reference.
struct ChartSample {
  CVec u;
  CVec z;
  Point3n dual;
};

std::vector<ChartSample> sample_chart_points(const FlatArrangement& arr, const DeformationMatrix& b,
                                             std::size_t count, Rng& rng,
                                             const SamplingRegion& region = {});

}  // namespace toric_hk
