#include "toric_hk/localmodel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Core>

#include "toric_hk/error.hpp"

namespace toric_hk {

double InvariantCoords::relation_residual() const {
  double worst = 0.0;
  for (const auto& v : y) worst = std::max(worst, std::abs(v[0] * v[1] - v[2] * v[2] - v[3] * v[3]));
  return worst;
}

double InvariantCoords::min_diagonal() const {
  double lo = std::numeric_limits<double>::infinity();
  for (const auto& v : y) lo = std::min({lo, v[0], v[1]});
  return lo;
}

double InvariantCoords::distance(const InvariantCoords& other) const {
  if (other.dim() != dim()) throw DimensionError("invariant coordinates of different size");
  double acc = 0.0;
  for (int i = 0; i < dim(); ++i)
    for (int c = 0; c < 4; ++c) acc += (y[i][c] - other.y[i][c]) * (y[i][c] - other.y[i][c]);
  return std::sqrt(acc);
}

Vec flat_moment_map(const FlatModelPoint& p) {
  const int n = p.dim();
  if (p.w.size() != n) throw DimensionError("z and w differ in length");
  Vec out(3 * n);
  for (int i = 0; i < n; ++i) {
    const Complex zw = p.z(i) * p.w(i);
    out(i) = 0.5 * (std::norm(p.z(i)) - std::norm(p.w(i)));
    out(n + i) = zw.real();
    out(2 * n + i) = zw.imag();
  }
  return out;
}

InvariantCoords invariants_of(const FlatModelPoint& p) {
  const int n = p.dim();
  if (p.w.size() != n) throw DimensionError("z and w differ in length");
  InvariantCoords out;
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const Complex zw = p.z(i) * p.w(i);
    out.y[i] = {std::norm(p.z(i)), std::norm(p.w(i)), zw.real(), zw.imag()};
  }
  return out;
}

Vec invariant_moment_map(const InvariantCoords& y) {
  const int n = y.dim();
  Vec out(3 * n);
  for (int i = 0; i < n; ++i) {
    out(i) = 0.5 * (y.y[i][0] - y.y[i][1]);
    out(n + i) = y.y[i][2];
    out(2 * n + i) = y.y[i][3];
  }
  return out;
}

namespace {

int per_index_count(const Vec& p) {
  if (p.size() % 3 != 0) throw DimensionError("moment-map value must have 3n entries");
  return static_cast<int>(p.size() / 3);
}

}  // namespace

InvariantCoords chart_inverse(const Vec& p) {
  const int n = per_index_count(p);
  InvariantCoords out;
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double p1 = p(i), p2 = p(n + i), p3 = p(2 * n + i);
    const double rho = std::sqrt(p1 * p1 + p2 * p2 + p3 * p3);
    const double q = p2 * p2 + p3 * p3;
    // The smaller of rho +- p1 via q / (rho + |p1|) keeps the relation exact.
    double y1, y2;
    if (p1 >= 0.0) {
      y1 = p1 + rho;
      y2 = y1 > 0.0 ? q / y1 : 0.0;
    } else {
      y2 = -p1 + rho;
      y1 = q / y2;
    }
    out.y[i] = {y1, y2, p2, p3};
  }
  return out;
}

InvariantCoords printed_chart_inverse(const Vec& p) {
  const int n = per_index_count(p);
  InvariantCoords out;
  out.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double p1 = p(i), p2 = p(n + i), p3 = p(2 * n + i);
    const double rho = std::sqrt(p1 * p1 + p2 * p2 + p3 * p3);
    out.y[i] = {p1, -p1 + rho, p2, p3};
  }
  return out;
}

WeightSystem::WeightSystem(std::vector<lattice::IntVector> alphas) : alphas_(std::move(alphas)) {
  if (alphas_.empty()) throw InputError("weight system is empty");
  const auto len = alphas_.front().size();
  lattice::IntMatrix m(static_cast<Eigen::Index>(alphas_.size()), len);
  for (std::size_t k = 0; k < alphas_.size(); ++k) {
    if (alphas_[k].size() != len) throw DimensionError("weights of different length");
    m.row(static_cast<Eigen::Index>(k)) = alphas_[k].transpose();
  }
  if (lattice::rank(m) != static_cast<int>(alphas_.size())) {
    throw InputError("weights are linearly dependent");
  }
}

Vec weight_moment_map(const WeightSystem& ws, const FlatModelPoint& p) {
  if (p.dim() != ws.size() || p.w.size() != p.z.size()) {
    throw DimensionError("model point must have one (z, w) pair per weight");
  }
  Vec out = Vec::Zero(ws.ambient_dim());
  for (int k = 0; k < ws.size(); ++k) {
    out += 0.5 * (std::norm(p.z(k)) - std::norm(p.w(k))) * ws.alphas()[k].cast<double>();
  }
  return out;
}

WeightSystem stratum_weights(const FlatArrangement& arr, const Stratum& stratum) {
  if (stratum.active.empty()) throw InputError("stratum has no active flats");
  const lattice::IntMatrix rows = arr.normal_matrix(stratum.active);
  if (!lattice::extends_to_basis(rows)) {
    throw NotSmoothError("stratum normals do not extend to a Z-basis");
  }
  const lattice::IntMatrix w = lattice::complete_to_basis(rows);
  const lattice::IntMatrix dual = lattice::unimodular_inverse(w).transpose();
  std::vector<lattice::IntVector> alphas;
  for (Eigen::Index j = 0; j < rows.rows(); ++j) alphas.emplace_back(dual.row(j).transpose());
  return WeightSystem(std::move(alphas));
}

std::vector<FlatModelPoint> sample_model_ball(int n, double radius, std::size_t count,
                                              std::mt19937_64& rng) {
  if (n < 1) throw DimensionError("model dimension must be positive");
  std::normal_distribution<double> gauss;
  std::uniform_real_distribution<double> unit;
  const int real_dim = 4 * n;
  std::vector<FlatModelPoint> out;
  out.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Vec g(real_dim);
    for (int c = 0; c < real_dim; ++c) g(c) = gauss(rng);
    g *= radius * std::pow(unit(rng), 1.0 / real_dim) / g.norm();
    FlatModelPoint p{CVec(n), CVec(n)};
    for (int i = 0; i < n; ++i) {
      p.z(i) = Complex(g(4 * i), g(4 * i + 1));
      p.w(i) = Complex(g(4 * i + 2), g(4 * i + 3));
    }
    out.push_back(std::move(p));
  }
  return out;
}

BilipschitzEstimate bilipschitz_check(const std::vector<FlatModelPoint>& samples) {
  BilipschitzEstimate est;
  est.samples = samples.size();
  est.constant = std::numeric_limits<double>::infinity();
  std::vector<InvariantCoords> ys;
  std::vector<Vec> mus;
  ys.reserve(samples.size());
  mus.reserve(samples.size());
  for (const auto& p : samples) {
    ys.push_back(invariants_of(p));
    mus.push_back(invariant_moment_map(ys.back()));
  }
  for (std::size_t a = 0; a < samples.size(); ++a) {
    for (std::size_t b = a + 1; b < samples.size(); ++b) {
      const double dy = ys[a].distance(ys[b]);
      if (dy == 0.0) continue;
      const double ratio = (mus[a] - mus[b]).norm() / dy;
      if (ratio < est.constant) {
        est.constant = ratio;
        est.argmin_a = a;
        est.argmin_b = b;
      }
    }
  }
  return est;
}

}  // namespace toric_hk
