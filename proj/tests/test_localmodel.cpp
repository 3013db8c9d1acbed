#include <doctest.h>

#include <cmath>
#include <random>

#include "toric_hk/error.hpp"
#include "toric_hk/localmodel.hpp"

using namespace toric_hk;

namespace {

Flat flat(std::vector<std::int64_t> u, double l1, double l2 = 0, double l3 = 0) {
  return Flat(Normal(std::move(u)), {l1, l2, l3});
}

FlatModelPoint gaussian_point(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  FlatModelPoint p{CVec(n), CVec(n)};
  for (int i = 0; i < n; ++i) {
    p.z(i) = Complex(g(rng), g(rng));
    p.w(i) = Complex(g(rng), g(rng));
  }
  return p;
}

Vec gaussian_vec(int size, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(size);
  for (auto& e : v) e = g(rng);
  return v;
}

}  // namespace

TEST_CASE("flat model moment map examples") {
  const FlatModelPoint a{CVec::Constant(1, 1.0), CVec::Constant(1, 0.0)};
  CHECK(flat_moment_map(a) == (Vec(3) << 0.5, 0.0, 0.0).finished());
  const FlatModelPoint b{CVec::Constant(1, 1.0), CVec::Constant(1, 1.0)};
  CHECK(flat_moment_map(b) == (Vec(3) << 0.0, 1.0, 0.0).finished());
  const FlatModelPoint c{CVec::Constant(1, Complex(0, 1)), CVec::Constant(1, 1.0)};
  CHECK(flat_moment_map(c) == (Vec(3) << 0.0, 0.0, 1.0).finished());
  const auto y = invariants_of(b);
  CHECK(y.y[0] == std::array<double, 4>{1.0, 1.0, 1.0, 0.0});
}

TEST_CASE("invariants satisfy the relations and factor the moment map") {
  std::mt19937_64 rng(41);
  for (int n = 1; n <= 3; ++n) {
    for (int trial = 0; trial < 200; ++trial) {
      const auto p = gaussian_point(n, rng);
      const auto y = invariants_of(p);
      CHECK(y.relation_residual() <= 1e-12 * (1.0 + p.z.squaredNorm() * p.w.squaredNorm()));
      CHECK(y.min_diagonal() >= 0.0);
      CHECK((invariant_moment_map(y) - flat_moment_map(p)).norm() <= 1e-14 * (1.0 + y.y[0][0]));
    }
  }
}

TEST_CASE("moment map is invariant under the torus") {
  std::mt19937_64 rng(43);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
  for (int trial = 0; trial < 100; ++trial) {
    auto p = gaussian_point(2, rng);
    const Vec mu = flat_moment_map(p);
    const auto y = invariants_of(p);
    for (int i = 0; i < 2; ++i) {
      const Complex phase = std::polar(1.0, angle(rng));
      p.z(i) *= phase;
      p.w(i) /= phase;
    }
    CHECK((flat_moment_map(p) - mu).norm() <= 1e-13);
    CHECK(invariants_of(p).distance(y) <= 1e-13);
  }
}

TEST_CASE("corrected chart inverse is a right inverse onto the variety") {
  std::mt19937_64 rng(47);
  for (int trial = 0; trial < 10000; ++trial) {
    const Vec p = gaussian_vec(6, rng);
    const auto y = chart_inverse(p);
    CHECK(y.min_diagonal() >= 0.0);
    const double scale = 1.0 + p.squaredNorm();
    CHECK(y.relation_residual() <= 1e-12 * scale);
    CHECK((invariant_moment_map(y) - p).cwiseAbs().maxCoeff() <= 1e-12 * std::sqrt(scale));
  }
  // p1 very negative with tiny p2, p3: y1 must stay accurate.
  const Vec p = (Vec(3) << -1e8, 1e-3, 0.0).finished();
  const auto y = chart_inverse(p);
  CHECK(y.y[0][0] == doctest::Approx(5e-15).epsilon(1e-10));
  CHECK(y.relation_residual() <= 1e-12);
}

TEST_CASE("printed chart inverse leaves the variety") {
  std::mt19937_64 rng(53);
  int off = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    const Vec p = gaussian_vec(3, rng);
    off += printed_chart_inverse(p).relation_residual() > 1e-6;
  }
  CHECK(off >= 990);
  // On the positive p1 axis it happens to land on the variety, but it is
  // still not an inverse of the moment map.
  const Vec q = (Vec(3) << 1.0, 0.0, 0.0).finished();
  CHECK(printed_chart_inverse(q).relation_residual() == 0.0);
  CHECK((invariant_moment_map(printed_chart_inverse(q)) - q).norm() > 0.4);
  CHECK((invariant_moment_map(chart_inverse(q)) - q).norm() == 0.0);
  const Vec neg = (Vec(3) << -1.0, 0.0, 0.0).finished();
  CHECK(printed_chart_inverse(neg).min_diagonal() < 0.0);
  CHECK(chart_inverse(neg).min_diagonal() >= 0.0);
}

TEST_CASE("weight systems") {
  CHECK_THROWS_AS(WeightSystem({}), InputError);
  CHECK_THROWS_AS(WeightSystem({lattice::IntVector{{1, 0}}, lattice::IntVector{{1}}}), InputError);
  CHECK_THROWS_AS(WeightSystem({lattice::IntVector{{1, 2}}, lattice::IntVector{{2, 4}}}), InputError);
  const WeightSystem ws({lattice::IntVector{{1, 0, 0}}, lattice::IntVector{{0, 1, 1}}});
  CHECK(ws.size() == 2);
  CHECK(ws.ambient_dim() == 3);
  const FlatModelPoint p{(CVec(2) << 2.0, 1.0).finished(), (CVec(2) << 0.0, 1.0).finished()};
  CHECK(weight_moment_map(ws, p) == (Vec(3) << 2.0, 0.0, 0.0).finished());
  const FlatModelPoint bad{CVec::Zero(3), CVec::Zero(3)};
  CHECK_THROWS_AS(weight_moment_map(ws, bad), DimensionError);
}

TEST_CASE("stratum weights are dual to the normals") {
  const FlatArrangement arr(3, {flat({1, 0, 0}, 0.0), flat({1, 1, 0}, 0.0), flat({0, 2, 1}, 0.0)});
  Stratum s;
  s.active = {0, 1, 2};
  s.rank = 3;
  s.witness = Point3n::zero(3);
  const auto ws = stratum_weights(arr, s);
  REQUIRE(ws.size() == 3);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j) {
      std::int64_t pair = 0;
      for (int i = 0; i < 3; ++i) pair += arr.flats()[k].normal.entries()[i] * ws.alphas()[j](i);
      CHECK(pair == (k == j ? 1 : 0));
    }

  Stratum two;
  two.active = {0, 2};
  two.rank = 2;
  two.witness = Point3n::zero(3);
  const auto ws2 = stratum_weights(arr, two);
  REQUIRE(ws2.size() == 2);
  // The moment map of the model pairs with u_k to 1/2 (|z_k|^2 - |w_k|^2).
  std::mt19937_64 rng(59);
  const auto p = gaussian_point(2, rng);
  const Vec mu = weight_moment_map(ws2, p);
  for (int j = 0; j < 2; ++j) {
    const Vec u = arr.flats()[two.active[j]].normal.as_real();
    CHECK(u.dot(mu) == doctest::Approx(0.5 * (std::norm(p.z(j)) - std::norm(p.w(j)))));
  }

  const FlatArrangement bad(2, {flat({1, 1}, 0.0), flat({1, -1}, 0.0)});
  Stratum sb;
  sb.active = {0, 1};
  sb.rank = 2;
  sb.witness = Point3n::zero(2);
  CHECK_THROWS_AS(stratum_weights(bad, sb), NotSmoothError);
}

TEST_CASE("model ball samples") {
  std::mt19937_64 rng(61);
  const auto pts = sample_model_ball(2, 1.5, 500, rng);
  REQUIRE(pts.size() == 500);
  double max_norm = 0.0;
  for (const auto& p : pts) max_norm = std::max(max_norm, std::sqrt(p.z.squaredNorm() + p.w.squaredNorm()));
  CHECK(max_norm <= 1.5);
  CHECK(max_norm >= 1.3);
}

TEST_CASE("bilipschitz constant") {
  std::mt19937_64 rng(67);
  // w = 0: mu = y1 / 2 exactly.
  std::vector<FlatModelPoint> line;
  std::normal_distribution<double> g;
  for (int i = 0; i < 200; ++i)
    line.push_back({CVec::Constant(1, Complex(g(rng), g(rng))), CVec::Zero(1)});
  const auto est = bilipschitz_check(line);
  CHECK(est.constant == doctest::Approx(0.5).epsilon(1e-12));

  auto inner = sample_model_ball(1, 1.0, 150, rng);
  const auto c_inner = bilipschitz_check(inner).constant;
  auto nested = inner;
  const auto outer = sample_model_ball(1, 2.0, 150, rng);
  nested.insert(nested.end(), outer.begin(), outer.end());
  const auto c_nested = bilipschitz_check(nested);
  CHECK(c_nested.constant <= c_inner);
  CHECK(c_nested.constant > 0.0);
  CHECK(c_nested.samples == nested.size());
  CHECK(c_nested.argmin_a != c_nested.argmin_b);

  // Both maps are homogeneous of degree two, so scaling the points does not
  // change the constant.
  for (auto& p : inner) {
    p.z *= 3.0;
    p.w *= 3.0;
  }
  CHECK(bilipschitz_check(inner).constant == doctest::Approx(c_inner).epsilon(1e-12));
}
