#include "toric_hk/arrangement.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "toric_hk/error.hpp"

namespace toric_hk {

Normal::Normal(std::vector<std::int64_t> entries) : entries_(std::move(entries)) {
  if (entries_.empty()) throw InputError("normal has no entries");
  const auto g = lattice::gcd(entries_);
  if (g == 0) throw InputError("normal is the zero vector");
  if (g != 1) {
    std::ostringstream msg;
    msg << "normal not primitive (gcd " << g << ")";
    throw InputError(msg.str());
  }
  const auto lead = std::find_if(entries_.begin(), entries_.end(), [](auto e) { return e != 0; });
  if (*lead < 0) {
    for (auto& e : entries_) e = -e;
    flipped_ = true;
  }
}

Vec Normal::as_real() const {
  Vec v(dim());
  for (int i = 0; i < dim(); ++i) v(i) = static_cast<double>(entries_[i]);
  return v;
}

Flat::Flat(Normal u, std::array<double, 3> lambda, double a)
    : normal(std::move(u)), offset(lambda), mass(a) {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw InputError("flat mass must be positive");
  for (const auto l : offset)
    if (!std::isfinite(l)) throw InputError("flat offset must be finite");
  if (normal.flipped()) {
    for (auto& l : offset) l = -l;
  }
}

FlatTerms flat_terms(const Flat& flat, const Point3n& p) {
  const auto& u = flat.normal.entries();
  double s = -flat.offset[0];
  Complex v = -flat.complex_offset();
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double ui = static_cast<double>(u[i]);
    s += ui * p.x(static_cast<Eigen::Index>(i));
    v += ui * p.z(static_cast<Eigen::Index>(i));
  }
  const double vv = std::norm(v);
  const double r = std::hypot(s, std::abs(v));
  const double spr = s >= 0.0 ? s + r : (r - s > 0.0 ? vv / (r - s) : 0.0);
  return {s, v, r, spr};
}

double incidence_residual(const Flat& flat, const Point3n& p) {
  const auto t = flat_terms(flat, p);
  return std::abs(t.s) + std::abs(t.v.real()) + std::abs(t.v.imag());
}

FlatArrangement::FlatArrangement(int n, std::vector<Flat> flats, const Tolerances& tol)
    : n_(n), flats_(std::move(flats)) {
  if (n_ <= 0) throw InputError("arrangement dimension must be positive");
  for (std::size_t k = 0; k < flats_.size(); ++k) {
    if (flats_[k].normal.dim() != n_) {
      throw DimensionError("flat " + std::to_string(k) + " has a normal of length " +
                           std::to_string(flats_[k].normal.dim()) + ", expected " +
                           std::to_string(n_));
    }
  }
  for (std::size_t i = 0; i < flats_.size(); ++i)
    for (std::size_t j = i + 1; j < flats_.size(); ++j) {
      const auto& a = flats_[i];
      const auto& b = flats_[j];
      if (!(a.normal == b.normal)) continue;
      double diff = 0;
      for (int c = 0; c < 3; ++c) diff += std::abs(a.offset[c] - b.offset[c]);
      if (diff <= tol.incidence) {
        throw InputError("flats " + std::to_string(i) + " and " + std::to_string(j) +
                         " are identical");
      }
    }
}

lattice::IntMatrix FlatArrangement::normal_matrix(const std::vector<int>& indices) const {
  lattice::IntMatrix m(static_cast<Eigen::Index>(indices.size()), n_);
  for (std::size_t r = 0; r < indices.size(); ++r)
    for (int c = 0; c < n_; ++c) m(static_cast<Eigen::Index>(r), c) = flats_[indices[r]].normal.entries()[c];
  return m;
}

DeformationMatrix::DeformationMatrix(Mat entries, const Tolerances& tol) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DimensionError("deformation matrix must be square and nonempty");
  }
  if (!entries_.allFinite()) throw InputError("deformation matrix has non-finite entries");
  const double scale = std::max(1.0, entries_.cwiseAbs().maxCoeff());
  if ((entries_ - entries_.transpose()).cwiseAbs().maxCoeff() > tol.psd * scale) {
    throw InputError("deformation matrix is not symmetric");
  }
  entries_ = 0.5 * (entries_ + entries_.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Mat> eig(entries_);
  const Vec& values = eig.eigenvalues();
  if (values.minCoeff() < -tol.psd * scale) {
    throw InputError("deformation matrix is not positive semidefinite (eigenvalue " +
                     std::to_string(values.minCoeff()) + ")");
  }
  Vec clipped = values.cwiseMax(0.0);
  order_ = static_cast<int>((clipped.array() > tol.psd * scale).count());
  if (values.minCoeff() < 0.0) {
    entries_ = eig.eigenvectors() * clipped.asDiagonal() * eig.eigenvectors().transpose();
  }
}

namespace {

// Affine data of the intersection of a set of flats: a particular point and
// a basis of directions (shared by the x, Re z and Im z copies).
struct Intersection {
  bool consistent = false;
  int rank = 0;
  Point3n base;
  Mat directions;  // n x (n - rank)
};

Intersection intersect(const FlatArrangement& arr, const std::vector<int>& active,
                       const Tolerances& tol) {
  const int n = arr.dim();
  const auto k = static_cast<Eigen::Index>(active.size());
  Intersection out;
  const auto normals = arr.normal_matrix(active);
  out.rank = lattice::rank(normals);
  Mat u = normals.cast<double>();
  Vec c1(k);
  CVec c2(k);
  for (Eigen::Index r = 0; r < k; ++r) {
    const auto& f = arr.flats()[active[r]];
    c1(r) = f.offset[0];
    c2(r) = f.complex_offset();
  }
  Eigen::JacobiSVD<Mat> svd(u, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Vec& sigma = svd.singularValues();
  Vec x = Vec::Zero(n);
  CVec z = CVec::Zero(n);
  for (int i = 0; i < out.rank; ++i) {
    const Vec ui = svd.matrixU().col(i);
    const Vec vi = svd.matrixV().col(i);
    x += (ui.dot(c1) / sigma(i)) * vi;
    const Complex zi = (ui.cast<Complex>().transpose() * c2)(0);
    z += (zi / sigma(i)) * vi.cast<Complex>();
  }
  out.base = Point3n(x, z);
  out.directions = svd.matrixV().rightCols(n - out.rank);
  out.consistent = true;
  for (const int idx : active) {
    if (incidence_residual(arr.flats()[idx], out.base) > tol.incidence) {
      out.consistent = false;
      break;
    }
  }
  return out;
}

// Every flat containing the intersection: normal in the span and base point
// on the flat.
std::vector<int> closure(const FlatArrangement& arr, const std::vector<int>& active,
                         const Intersection& inter, const Tolerances& tol) {
  std::vector<int> out;
  const auto normals = arr.normal_matrix(active);
  for (int k = 0; k < static_cast<int>(arr.size()); ++k) {
    if (std::binary_search(active.begin(), active.end(), k)) {
      out.push_back(k);
      continue;
    }
    lattice::IntMatrix ext(normals.rows() + 1, arr.dim());
    ext.topRows(normals.rows()) = normals;
    ext.row(normals.rows()) = arr.normal_matrix({k});
    if (lattice::rank(ext) != inter.rank) continue;
    if (incidence_residual(arr.flats()[k], inter.base) <= tol.incidence) out.push_back(k);
  }
  return out;
}

std::vector<int> flats_through(const FlatArrangement& arr, const Point3n& p, const Tolerances& tol) {
  std::vector<int> out;
  for (int k = 0; k < static_cast<int>(arr.size()); ++k)
    if (incidence_residual(arr.flats()[k], p) <= tol.incidence) out.push_back(k);
  return out;
}

// A point of the intersection avoiding every flat outside `active`.
Point3n generic_witness(const FlatArrangement& arr, const std::vector<int>& active,
                        const Intersection& inter, const Tolerances& tol) {
  if (inter.directions.cols() == 0) return inter.base;
  std::uint64_t seed = 0x9e3779b97f4a7c15ULL;
  for (const int a : active) seed = seed * 1000003ULL + static_cast<std::uint64_t>(a) + 1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coef(-1.0, 1.0);
  const auto free_dims = inter.directions.cols();
  for (int attempt = 0; attempt < 32; ++attempt) {
    Vec a(free_dims), b(free_dims), c(free_dims);
    for (Eigen::Index i = 0; i < free_dims; ++i) {
      a(i) = coef(rng);
      b(i) = coef(rng);
      c(i) = coef(rng);
    }
    const double scale = 1.0 + attempt;
    Point3n w(inter.base.x + scale * inter.directions * a,
              inter.base.z + scale * (inter.directions * b).cast<Complex>() +
                  Complex(0, 1) * scale * (inter.directions * c).cast<Complex>());
    if (flats_through(arr, w, tol) == active) return w;
  }
  throw Error("failed to find a generic witness point for a stratum");
}

bool stratum_before(const Stratum& a, const Stratum& b) {
  if (a.active.size() != b.active.size()) return a.active.size() < b.active.size();
  return a.active < b.active;
}

}  // namespace

std::vector<Stratum> intersection_strata(const FlatArrangement& arr, const Tolerances& tol) {
  const int d = static_cast<int>(arr.size());
  std::vector<Stratum> out;
  if (d == 0) return out;

  std::vector<std::vector<bool>> compatible(d, std::vector<bool>(d, true));
  std::size_t candidates = 0;
  const auto count_candidate = [&] {
    if (++candidates > kStrataCandidateLimit) {
      throw EnumerationLimitError("stratum enumeration exceeded " +
                                  std::to_string(kStrataCandidateLimit) + " candidate subsets");
    }
  };
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      count_candidate();
      compatible[i][j] = compatible[j][i] = intersect(arr, {i, j}, tol).consistent;
    }

  std::set<std::vector<int>> seen;
  std::deque<std::vector<int>> queue;
  std::map<std::vector<int>, Intersection> data;
  for (int k = 0; k < d; ++k) {
    std::vector<int> s{k};
    auto inter = intersect(arr, s, tol);
    auto closed = closure(arr, s, inter, tol);
    if (seen.insert(closed).second) {
      data.emplace(closed, intersect(arr, closed, tol));
      queue.push_back(closed);
    }
  }
  while (!queue.empty()) {
    const auto s = queue.front();
    queue.pop_front();
    for (int k = 0; k < d; ++k) {
      if (std::binary_search(s.begin(), s.end(), k)) continue;
      if (!std::all_of(s.begin(), s.end(), [&](int j) { return compatible[j][k]; })) continue;
      count_candidate();
      auto t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), k), k);
      auto inter = intersect(arr, t, tol);
      if (!inter.consistent) continue;
      auto closed = closure(arr, t, inter, tol);
      if (seen.insert(closed).second) {
        data.emplace(closed, closed == t ? std::move(inter) : intersect(arr, closed, tol));
        queue.push_back(closed);
      }
    }
  }

  for (const auto& [active, inter] : data) {
    Stratum st;
    st.active = active;
    st.rank = inter.rank;
    st.witness = generic_witness(arr, active, inter, tol);
    out.push_back(std::move(st));
  }
  std::sort(out.begin(), out.end(), stratum_before);
  return out;
}

std::vector<Stratum> maximal_strata(const std::vector<Stratum>& strata) {
  std::vector<Stratum> out;
  for (const auto& s : strata) {
    const bool contained = std::any_of(strata.begin(), strata.end(), [&](const Stratum& t) {
      return t.active.size() > s.active.size() &&
             std::includes(t.active.begin(), t.active.end(), s.active.begin(), s.active.end());
    });
    if (!contained) out.push_back(s);
  }
  return out;
}

SmoothnessVerdict smoothness_check(const FlatArrangement& arr, const Tolerances& tol) {
  for (const auto& s : intersection_strata(arr, tol)) {
    const bool ok = static_cast<int>(s.active.size()) <= arr.dim() &&
                    s.rank == static_cast<int>(s.active.size()) &&
                    lattice::extends_to_basis(arr.normal_matrix(s.active));
    if (!ok) return {false, s};
  }
  return {true, std::nullopt};
}

Isotropy isotropy_at(const FlatArrangement& arr, const Point3n& p, const Tolerances& tol) {
  if (p.dim() != arr.dim()) throw DimensionError("point dimension does not match arrangement");
  Isotropy out;
  const auto active = flats_through(arr, p, tol);
  for (const int k : active) out.basis.push_back(arr.flats()[k].normal);
  out.dim = active.empty() ? 0 : lattice::rank(arr.normal_matrix(active));
  return out;
}

namespace {

ClassificationReport build_report(const FlatArrangement& arr, const DeformationMatrix& b,
                                  const std::vector<Stratum>& strata, const Tolerances& tol) {
  const int n = arr.dim();
  ClassificationReport rep;
  rep.smooth = true;
  int max_rank = 0;
  for (const auto& s : strata) max_rank = std::max(max_rank, s.rank);
  rep.simply_connected = max_rank == n;
  rep.flat_factor_l = n - max_rank;
  rep.taub_nut_order = b.order();
  rep.volume_growth_exponent = 4 * n - rep.taub_nut_order;
  const int d = static_cast<int>(arr.size());
  if (n == 1 && rep.taub_nut_order == 0 && d >= 1) rep.ale_label = d - 1;
  const bool through_origin = std::all_of(arr.flats().begin(), arr.flats().end(), [&](const Flat& f) {
    return std::abs(f.offset[0]) + std::abs(f.offset[1]) + std::abs(f.offset[2]) <= tol.incidence;
  });
  rep.cone_over_3sasakian = rep.taub_nut_order == 0 && through_origin && d <= n;
  return rep;
}

}  // namespace

ClassificationReport classify_topology(const FlatArrangement& arr, const DeformationMatrix& b,
                                       const Tolerances& tol) {
  if (b.dim() != arr.dim()) throw DimensionError("deformation matrix size does not match n");
  const auto strata = intersection_strata(arr, tol);
  for (const auto& s : strata) {
    const bool ok = static_cast<int>(s.active.size()) <= arr.dim() &&
                    s.rank == static_cast<int>(s.active.size()) &&
                    lattice::extends_to_basis(arr.normal_matrix(s.active));
    if (!ok) {
      std::ostringstream msg;
      msg << "arrangement is not smooth: flats {";
      for (std::size_t i = 0; i < s.active.size(); ++i) msg << (i ? "," : "") << s.active[i];
      msg << "} do not extend to a Z-basis";
      throw NotSmoothError(msg.str());
    }
  }
  return build_report(arr, b, strata, tol);
}

ClassificationReport classify(const FlatArrangement& arr, const DeformationMatrix& b,
                              const Tolerances& tol) {
  const auto verdict = smoothness_check(arr, tol);
  if (!verdict.smooth) {
    ClassificationReport rep;
    rep.smooth = false;
    rep.failing_stratum = verdict.failing_stratum;
    rep.taub_nut_order = b.order();
    rep.volume_growth_exponent = 4 * arr.dim() - b.order();
    return rep;
  }
  return classify_topology(arr, b, tol);
}

bool operator==(const Stratum& a, const Stratum& b) {
  return a.active == b.active && a.rank == b.rank && a.witness.x == b.witness.x &&
         a.witness.z == b.witness.z;
}

bool operator==(const ClassificationReport& a, const ClassificationReport& b) {
  return a.smooth == b.smooth && a.failing_stratum == b.failing_stratum &&
         a.simply_connected == b.simply_connected && a.flat_factor_l == b.flat_factor_l &&
         a.taub_nut_order == b.taub_nut_order &&
         a.volume_growth_exponent == b.volume_growth_exponent && a.ale_label == b.ale_label &&
         a.cone_over_3sasakian == b.cone_over_3sasakian;
}

}  // namespace toric_hk
