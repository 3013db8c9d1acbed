#pragma once

#include <array>
#include <cstdint>
#include <random>
#include <vector>

#include "toric_hk/arrangement.hpp"
#include "toric_hk/lattice.hpp"
#include "toric_hk/point.hpp"

namespace toric_hk {

// A point (z, w) of C^2n = H^n.
struct FlatModelPoint {
  CVec z;
  CVec w;

  int dim() const { return static_cast<int>(z.size()); }
};

// Per index i: (|z_i|^2, |w_i|^2, Re z_i w_i, Im z_i w_i).
struct InvariantCoords {
  std::vector<std::array<double, 4>> y;

  int dim() const { return static_cast<int>(y.size()); }
  // max_i |y1 y2 - y3^2 - y4^2|, and min_i min(y1, y2) for the sign conditions.
  double relation_residual() const;
  double min_diagonal() const;
  double distance(const InvariantCoords& other) const;
};

// Moment-map values are laid out like moment_map: (p1_i..., p2_i..., p3_i...).
// (1/2 (|z|^2 - |w|^2), Re z w, Im z w) per index.
Vec flat_moment_map(const FlatModelPoint& p);

InvariantCoords invariants_of(const FlatModelPoint& p);

// The moment map on the invariant variety: ((y1 - y2)/2, y3, y4) per index.
Vec invariant_moment_map(const InvariantCoords& y);

// Inverse of invariant_moment_map: y1 = p1 + |p|, y2 = -p1 + |p|, y3 = p2, y4 = p3.
InvariantCoords chart_inverse(const Vec& p);

// Variant with first component y1 = p1, which generally leaves the variety. Kept only
// so that tests can show it fails.
InvariantCoords printed_chart_inverse(const Vec& p);

// Isotropy weights alpha_1..alpha_i of a fixed stratum, linearly independent.
class WeightSystem {
 public:
  // Throws InputError unless the alphas are nonempty, of one length, and
  // linearly independent (so a Z-basis of the lattice they span).
  explicit WeightSystem(std::vector<lattice::IntVector> alphas);

  const std::vector<lattice::IntVector>& alphas() const { return alphas_; }
  int size() const { return static_cast<int>(alphas_.size()); }
  int ambient_dim() const { return static_cast<int>(alphas_.front().size()); }

 private:
  std::vector<lattice::IntVector> alphas_;
};

// 1/2 sum_k (|z_k|^2 - |w_k|^2) alpha_k. Throws DimensionError unless p has
// exactly ws.size() coordinates.
Vec weight_moment_map(const WeightSystem& ws, const FlatModelPoint& p);

// Weights of the isotropy representation at a stratum: the integer dual
// basis to {u_k : k in S} inside a Z-basis extending it, so that
// <u_k, alpha_j> = delta_kj. Throws NotSmoothError if the normals do not
// extend to a Z-basis.
WeightSystem stratum_weights(const FlatArrangement& arr, const Stratum& stratum);

// Uniform points of the ball |(z, w)| <= radius in C^2n.
std::vector<FlatModelPoint> sample_model_ball(int n, double radius, std::size_t count,
                                              std::mt19937_64& rng);

struct BilipschitzEstimate {
  double constant = 0.0;  // min |mu(a) - mu(b)| / |y(a) - y(b)| over pairs
  std::size_t samples = 0;
  std::size_t argmin_a = 0;
  std::size_t argmin_b = 0;
};

// Brute force over all pairs with distinct invariants.
BilipschitzEstimate bilipschitz_check(const std::vector<FlatModelPoint>& samples);

}  // namespace toric_hk
