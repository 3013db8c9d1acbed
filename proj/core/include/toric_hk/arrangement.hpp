#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "toric_hk/config.hpp"
#include "toric_hk/lattice.hpp"
#include "toric_hk/point.hpp"

namespace toric_hk {

// Primitive integer normal u_k, stored with its first nonzero entry positive.
class Normal {
 public:
  // Throws InputError for the zero vector or a non-primitive vector (the
  // message names the gcd).
  explicit Normal(std::vector<std::int64_t> entries);

  const std::vector<std::int64_t>& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.size()); }
  Vec as_real() const;
  // True iff the stored orientation is the negation of the input.
  bool flipped() const { return flipped_; }

  friend bool operator==(const Normal& a, const Normal& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<std::int64_t> entries_;
  bool flipped_ = false;
};

// Codimension-3 flat H = { <x,u> = l1, <z,u> = l2 + i l3 } with mass a > 0.
// An input normal with negative leading entry is negated together with its
// offsets, which describes the same flat.
struct Flat {
  Normal normal;
  std::array<double, 3> offset;
  double mass;

  Flat(Normal u, std::array<double, 3> lambda, double a = 1.0);
  Complex complex_offset() const { return {offset[1], offset[2]}; }
};

// s = <x,u> - l1, v = <z,u> - (l2 + i l3), r = |(s, v)|.
struct FlatTerms {
  double s;
  Complex v;
  double r;
  // s + r evaluated without cancellation for s < 0.
  double s_plus_r;
};

FlatTerms flat_terms(const Flat& flat, const Point3n& p);

// Sum of the three affine residuals of p against H.
double incidence_residual(const Flat& flat, const Point3n& p);

class FlatArrangement {
 public:
  // Throws InputError on dimension mismatch or duplicate flats.
  FlatArrangement(int n, std::vector<Flat> flats, const Tolerances& tol = default_tolerances());

  int dim() const { return n_; }
  const std::vector<Flat>& flats() const { return flats_; }
  std::size_t size() const { return flats_.size(); }
  bool empty() const { return flats_.empty(); }
  // Rows u_k for the given indices.
  lattice::IntMatrix normal_matrix(const std::vector<int>& indices) const;

 private:
  int n_;
  std::vector<Flat> flats_;
};

// Symmetric positive-semidefinite B; order m = rank(B).
class DeformationMatrix {
 public:
  explicit DeformationMatrix(Mat entries, const Tolerances& tol = default_tolerances());
  static DeformationMatrix zero(int n) { return DeformationMatrix(Mat::Zero(n, n)); }

  const Mat& entries() const { return entries_; }
  int dim() const { return static_cast<int>(entries_.rows()); }
  int order() const { return order_; }

 private:
  Mat entries_;
  int order_ = 0;
};

struct Stratum {
  std::vector<int> active;  // sorted flat indices
  Point3n witness;
  int rank = 0;
};

struct ClassificationReport {
  bool smooth = false;
  std::optional<Stratum> failing_stratum;
  bool simply_connected = false;
  int flat_factor_l = 0;
  int taub_nut_order = 0;
  int volume_growth_exponent = 0;
  std::optional<int> ale_label;
  bool cone_over_3sasakian = false;
};

// Upper bound on candidate index sets examined by intersection_strata.
inline constexpr std::size_t kStrataCandidateLimit = std::size_t{1} << 20;

// Every nonempty intersection of flats, keyed by the full set of flats that
// contain it; a witness point lies on exactly those flats.
std::vector<Stratum> intersection_strata(const FlatArrangement& arr,
                                         const Tolerances& tol = default_tolerances());

// Strata not strictly contained in a larger stratum's active set.
std::vector<Stratum> maximal_strata(const std::vector<Stratum>& strata);

struct SmoothnessVerdict {
  bool smooth = true;
  std::optional<Stratum> failing_stratum;
};

SmoothnessVerdict smoothness_check(const FlatArrangement& arr,
                                   const Tolerances& tol = default_tolerances());

struct Isotropy {
  std::vector<Normal> basis;
  int dim = 0;
};

Isotropy isotropy_at(const FlatArrangement& arr, const Point3n& p,
                     const Tolerances& tol = default_tolerances());

// Throws NotSmoothError for arrangements failing smoothness_check.
ClassificationReport classify_topology(const FlatArrangement& arr, const DeformationMatrix& b,
                                       const Tolerances& tol = default_tolerances());

// Like classify_topology, but reports non-smooth arrangements instead of
// throwing (only `smooth` and `failing_stratum` are meaningful then).
ClassificationReport classify(const FlatArrangement& arr, const DeformationMatrix& b,
                              const Tolerances& tol = default_tolerances());

bool operator==(const Stratum& a, const Stratum& b);
bool operator==(const ClassificationReport& a, const ClassificationReport& b);

}  // namespace toric_hk
