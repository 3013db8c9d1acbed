#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "toric_hk/error.hpp"
#include "toric_hk/verify.hpp"

using namespace toric_hk;

namespace {

Flat flat(std::vector<std::int64_t> u, double l1, double l2 = 0, double l3 = 0, double a = 1) {
  return Flat(Normal(std::move(u)), {l1, l2, l3}, a);
}

Point3n pt1(double x, Complex z) { return Point3n(Vec::Constant(1, x), CVec::Constant(1, z)); }

CVec c1(Complex v) { return CVec::Constant(1, v); }

FlatArrangement n2_generic() {
  return FlatArrangement(2, {flat({1, 0}, 0.5, 1.0 / 3, -0.25), flat({0, 1}, -1.0 / 3, 0.2, 0.5),
                             flat({1, 1}, 0.25, -0.5, 1.0 / 3)});
}

const ResidualReport& find(const std::vector<ResidualReport>& reps, const std::string& name) {
  const auto it = std::find_if(reps.begin(), reps.end(),
                               [&](const ResidualReport& r) { return r.check_name == name; });
  REQUIRE(it != reps.end());
  return *it;
}

}  // namespace

TEST_CASE("report finalisation") {
  ResidualReport r;
  r.tolerance = 1e-3;
  r.residuals = {1e-5, 2e-4};
  r.finalize();
  CHECK(r.max_residual == 2e-4);
  CHECK(r.pass);
  CHECK(r.samples == 2);
  r.residuals.push_back(std::numeric_limits<double>::quiet_NaN());
  r.finalize();
  CHECK_FALSE(r.pass);
  CHECK(std::isinf(r.max_residual));
}

TEST_CASE("polyharmonic residual") {
  const FlatArrangement empty(2, {});
  Mat bm(2, 2);
  bm << 1.0, 0.4, 0.4, 2.0;
  const DeformationMatrix b(bm);
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 10; ++trial) {
    const Vec v = Vec::Random(2);
    // Quadratic F: the 7-point Laplacian is exact up to rounding.
    CHECK(polyharmonic_residual(empty, b, Point3n::zero(2), v, 1e-2) <= 1e-10);
  }
  const auto arr = n2_generic();
  const Point3n p((Vec(2) << 1.3, -0.9).finished(),
                  (CVec(2) << Complex(0.8, 1.1), Complex(-1.2, 0.7)).finished());
  const Vec v = (Vec(2) << 0.6, -1.7).finished();
  const double r = polyharmonic_residual(arr, b, p, v, 1e-3);
  CHECK(r <= 1e-5);
  CHECK(polyharmonic_residual(arr, b, p, -v, 1e-3) == doctest::Approx(r).epsilon(1e-6).scale(1e-9));
  CHECK(polyharmonic_residual(arr, b, p, 2.0 * v, 1e-3) == r);
  CHECK_THROWS_AS(polyharmonic_residual(arr, b, p, Vec::Zero(2), 1e-3), InputError);
  CHECK_THROWS_AS(polyharmonic_residual(arr, b, p, Vec::Zero(3), 1e-3), DimensionError);
}

TEST_CASE("Phi oracle error") {
  const FlatArrangement eh(1, {flat({1}, -1.0), flat({1}, 1.0)});
  const auto b = DeformationMatrix::zero(1);
  CHECK(phi_oracle_error(eh, b, pt1(0.3, Complex(0.7, -0.5)), 5e-4) <= 1e-6);
  CHECK(phi_oracle_error(eh, b, pt1(0.3, Complex(0.7, -0.5)), 1e-3, true) <= 1e-7);
}

TEST_CASE("Monge-Ampere, Sp and Legendre identities on Taub-NUT") {
  const FlatArrangement arr(1, {flat({1}, 0.0)});
  const DeformationMatrix b(Mat::Ones(1, 1));
  std::mt19937_64 rng(37);
  std::normal_distribution<double> g(0.0, 0.7);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cp = legendre_solve(arr, b, c1(Complex(g(rng), g(rng))), c1(Complex(g(rng), g(rng))));
    CHECK(monge_ampere_residual(arr, b, cp, 1e-4) <= 1e-4);
    CHECK(sp_condition_residual(arr, b, cp, 1e-4) <= 1e-4);
    CHECK(legendre_identity_residual(arr, b, cp, 1e-4) <= 1e-5);
    const CMat m = kahler_hessian(arr, b, cp, 1e-4);
    CHECK((m - m.adjoint()).norm() <= 1e-5);
  }
  const auto arr2 = n2_generic();
  const auto cp2 = legendre_solve(arr2, DeformationMatrix::zero(2), CVec::Zero(2),
                                  (CVec(2) << Complex(0.4, 0.1), Complex(1.0, -0.3)).finished());
  CHECK_THROWS_AS(monge_ampere_residual(arr2, DeformationMatrix::zero(2), cp2, 1e-4), DimensionError);
  CHECK(sp_condition_residual(arr2, DeformationMatrix::zero(2), cp2, 1e-4) <= 1e-4);
}

TEST_CASE("Ricci tensor") {
  // Constant metric: the difference quotients vanish identically.
  Mat bm(2, 2);
  bm << 1.0, 0.3, 0.3, 0.5;
  const Mat ric0 = ricci_tensor(FlatArrangement(2, {}), DeformationMatrix(bm), Point3n::zero(2), 1e-3);
  CHECK(ric0.rows() == 8);
  CHECK(ric0.norm() == 0.0);

  const FlatArrangement tn(1, {flat({1}, 0.0)});
  const DeformationMatrix b(Mat::Ones(1, 1));
  CHECK(ricci_residual(tn, b, pt1(0.4, Complex(-0.5, 0.6)), 1e-3) <= 1e-3);
  const Mat ric = ricci_tensor(tn, b, pt1(0.4, Complex(-0.5, 0.6)), 1e-3);
  CHECK((ric - ric.transpose()).norm() <= 1e-3);

  CHECK_THROWS_AS(ricci_residual(tn, b, pt1(0.0, 0.0), 1e-3), OnFlatError);
  CHECK_THROWS_AS(ricci_residual(tn, b, pt1(5e-3, 0.0), 1e-3), StencilClippedError);
  CHECK_THROWS_AS(ricci_residual(tn, b, pt1(-1.0, 1e-3), 1e-3), StencilClippedError);
  CHECK_NOTHROW(ricci_residual(tn, b, pt1(1.0, 1e-3), 1e-3));
  CHECK_THROWS_AS(ricci_residual(tn, b, pt1(1.0, 0.0), 0.0), InputError);
}

TEST_CASE("conformal factor on a multi-center space") {
  const FlatArrangement arr(1, {flat({1}, -1.0, 0.5), flat({1}, 0.8, -0.2, 0.3, 2.0)});
  const DeformationMatrix b(Mat::Constant(1, 1, 0.5));
  const auto c = conformal_factor_check(arr, b, (Vec(3) << 0.3, 1.2, -0.4).finished(), 1e-4);
  CHECK(c.identity_residual <= 1e-12);
  CHECK(c.laplacian_residual <= 1e-6);
  CHECK(c.remainder_deviation <= 1e-6);
  CHECK(std::isfinite(c.remainder_bound));
  CHECK(c.worst() <= 1e-6);
  CHECK_THROWS_AS(conformal_factor_check(n2_generic(), DeformationMatrix::zero(2), Vec::Zero(3), 1e-4),
                  DimensionError);
}

TEST_CASE("volume growth is unchanged by rescaling masses and B") {
  GrowthOptions opts;
  opts.samples = 2000;
  const FlatArrangement arr(1, {flat({1}, 0.0)});
  const auto est = volume_growth_exponent(arr, DeformationMatrix(Mat::Ones(1, 1)), Point3n::zero(1), opts);
  const FlatArrangement heavy(1, {flat({1}, 0.0, 0, 0, 3.0)});
  const auto est3 =
      volume_growth_exponent(heavy, DeformationMatrix(Mat::Constant(1, 1, 3.0)), Point3n::zero(1), opts);
  CHECK(std::abs(est.exponent - 3.0) <= 0.2);
  CHECK(std::abs(est3.exponent - 3.0) <= 0.2);
  CHECK(std::abs(est.exponent - est3.exponent) <= 2.0 * (est.standard_error + est3.standard_error) + 0.05);
  CHECK(est.radii == opts.radii);
  CHECK(est.volumes.size() == opts.radii.size());
  CHECK(std::is_sorted(est.volumes.begin(), est.volumes.end()));

  GrowthOptions bad = opts;
  bad.radii = {100.0};
  CHECK_THROWS_AS(volume_growth_exponent(arr, DeformationMatrix::zero(1), Point3n::zero(1), bad),
                  InputError);
  bad = opts;
  bad.samples = 2000000;
  CHECK_THROWS_AS(volume_growth_exponent(arr, DeformationMatrix::zero(1), Point3n::zero(1), bad),
                  InputError);
  CHECK_THROWS_AS(volume_growth_exponent(FlatArrangement(1, {}), DeformationMatrix::zero(1),
                                         Point3n::zero(1), opts),
                  InputError);
}

TEST_CASE("verification driver") {
  const FlatArrangement arr(1, {flat({1}, -1.0), flat({1}, 1.0)});
  const auto b = DeformationMatrix::zero(1);
  VerifyOptions opts;
  opts.checks = {"phi", "polyharmonic", "monge-ampere"};
  opts.seed = 5;
  const auto reps = run_verification(arr, b, opts);
  for (const auto& r : reps) CHECK_MESSAGE(r.pass, r.check_name, " ", r.max_residual);
  CHECK(find(reps, "phi").samples == opts.points);
  CHECK(find(reps, "polyharmonic").samples == opts.polyharmonic_points);
  CHECK(find(reps, "polyharmonic:halving").max_residual <= 1.0 / 3.0);

  const auto again = run_verification(arr, b, opts);
  REQUIRE(again.size() == reps.size());
  for (std::size_t i = 0; i < reps.size(); ++i) CHECK(again[i].residuals == reps[i].residuals);
  opts.seed = 6;
  CHECK(run_verification(arr, b, opts)[0].residuals != reps[0].residuals);

  const auto d1 = default_checks(1);
  const auto d2 = default_checks(2);
  CHECK(std::count(d1.begin(), d1.end(), "monge-ampere") == 1);
  CHECK(std::count(d2.begin(), d2.end(), "monge-ampere") == 0);
  CHECK(std::count(d2.begin(), d2.end(), "sp-condition") == 1);
  for (const auto& c : d1)
    CHECK(std::count(known_checks().begin(), known_checks().end(), c) == 1);

  opts.checks = {"no-such-check"};
  CHECK_THROWS_AS(run_verification(arr, b, opts), InputError);
  opts.checks = {"monge-ampere"};
  CHECK_THROWS_AS(run_verification(n2_generic(), DeformationMatrix::zero(2), opts), DimensionError);
}
