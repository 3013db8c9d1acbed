#include <doctest.h>

#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>

#include <Eigen/Eigenvalues>

#include "toric_hk/catalog.hpp"
#include "toric_hk/error.hpp"
#include "toric_hk/parallel.hpp"
#include "toric_hk/sampling.hpp"
#include "toric_hk/verify.hpp"

using namespace toric_hk;

namespace {

std::vector<const CatalogEntry*> smooth_entries() {
  std::vector<const CatalogEntry*> out;
  for (const auto& e : catalog())
    if (smoothness_check(e.arrangement).smooth) out.push_back(&e);
  return out;
}

bool normals_span(const FlatArrangement& arr) {
  std::vector<int> all(arr.size());
  for (std::size_t k = 0; k < arr.size(); ++k) all[k] = static_cast<int>(k);
  return !arr.empty() && lattice::rank(arr.normal_matrix(all)) == arr.dim();
}

}  // namespace

TEST_CASE("strata of smooth arrangements have independent normals") {
  for (const auto* e : smooth_entries()) {
    for (const auto& s : intersection_strata(e->arrangement)) {
      CHECK(s.rank == static_cast<int>(s.active.size()));
      CHECK(lattice::rank(e->arrangement.normal_matrix(s.active)) == s.rank);
    }
  }
}

TEST_CASE("Phi is positive definite when B is or the normals span") {
  for (const auto* e : smooth_entries()) {
    const Eigen::SelfAdjointEigenSolver<Mat> bs(e->b.entries());
    const bool b_pd = bs.eigenvalues().minCoeff() > 0.0;
    if (!b_pd && !normals_span(e->arrangement)) continue;
    Rng rng(73);
    for (const auto& p : sample_points(e->arrangement, 50, rng)) {
      const Eigen::SelfAdjointEigenSolver<Mat> es(eval_Phi(e->arrangement, e->b, p).value);
      CHECK_MESSAGE(es.eigenvalues().minCoeff() > 0.0, e->name);
    }
  }
}

TEST_CASE("det g equals det Phi squared on every entry") {
  for (const auto* e : smooth_entries()) {
    Rng rng(79);
    for (const auto& p : sample_points(e->arrangement, 30, rng)) {
      const double dphi = eval_Phi(e->arrangement, e->b, p).value.determinant();
      const double dg = eval_metric(e->arrangement, e->b, p).value.determinant();
      CHECK_MESSAGE(std::abs(dg - dphi * dphi) <= 1e-8 * dphi * dphi, e->name);
    }
  }
}

TEST_CASE("finite-difference residuals converge when the step is halved") {
  // Steps coarse enough that truncation dominates rounding.
  const auto* tn = find_catalog_entry("taub-nut");
  const auto* eh = find_catalog_entry("eguchi-hanson");
  const auto* n2 = find_catalog_entry("n2-unimodular");
  const Point3n p(Vec::Constant(1, 0.7), CVec::Constant(1, Complex(1.1, -0.9)));
  const Point3n q((Vec(2) << 1.6, -0.2).finished(),
                  (CVec(2) << Complex(-1.4, 1.5), Complex(0.9, -1.3)).finished());

  const auto halves = [](double coarse, double fine) {
    CHECK(coarse > 0.0);
    CHECK(fine <= 0.5 * coarse);
  };
  halves(phi_oracle_error(eh->arrangement, eh->b, p, 0.08),
         phi_oracle_error(eh->arrangement, eh->b, p, 0.04));
  const Vec v = (Vec(2) << 1.0, 2.0).finished();
  halves(polyharmonic_residual(n2->arrangement, n2->b, q, v, 0.08),
         polyharmonic_residual(n2->arrangement, n2->b, q, v, 0.04));
  halves(ricci_residual(eh->arrangement, eh->b, p, 0.02), ricci_residual(eh->arrangement, eh->b, p, 0.01));
  halves(ricci_residual(n2->arrangement, n2->b, q, 0.02), ricci_residual(n2->arrangement, n2->b, q, 0.01));

  const auto cp = legendre_solve(tn->arrangement, tn->b, CVec::Constant(1, Complex(0.3, 0.2)),
                                 CVec::Constant(1, Complex(0.8, -0.4)));
  halves(monge_ampere_residual(tn->arrangement, tn->b, cp, 0.04),
         monge_ampere_residual(tn->arrangement, tn->b, cp, 0.02));
  halves(legendre_identity_residual(tn->arrangement, tn->b, cp, 0.04),
         legendre_identity_residual(tn->arrangement, tn->b, cp, 0.02));
  const auto cp2 = legendre_solve(n2->arrangement, n2->b, (CVec(2) << 0.2, -0.1).finished(),
                                  (CVec(2) << Complex(0.4, 0.7), Complex(-0.8, 0.3)).finished());
  halves(sp_condition_residual(n2->arrangement, n2->b, cp2, 0.04),
         sp_condition_residual(n2->arrangement, n2->b, cp2, 0.02));
  const Vec s = (Vec(3) << 0.4, -0.6, 0.9).finished();
  halves(conformal_factor_check(eh->arrangement, eh->b, s, 0.08).laplacian_residual,
         conformal_factor_check(eh->arrangement, eh->b, s, 0.04).laplacian_residual);
}

TEST_CASE("Ricci residual halving across the catalog") {
  for (const auto* e : smooth_entries()) {
    VerifyOptions opts;
    opts.checks = {"ricci"};
    opts.ricci_points = 4;
    opts.seed = 83;
    const auto reps = run_verification(e->arrangement, e->b, opts);
    REQUIRE(reps.size() == 2);
    CHECK_MESSAGE(reps[0].pass, e->name, " ", reps[0].max_residual);
    CHECK_MESSAGE(reps[1].max_residual <= 1.0 / 3.0, e->name, " ", reps[1].max_residual);
  }
}

TEST_CASE("round trip through the Kahler potential on every entry") {
  for (const auto* e : smooth_entries()) {
    VerifyOptions opts;
    opts.checks = {"round-trip"};
    opts.points = 5;
    opts.seed = 89;
    const auto reps = run_verification(e->arrangement, e->b, opts);
    CHECK_MESSAGE(reps[0].pass, e->name, " ", reps[0].max_residual);
  }
}

TEST_CASE("parallel_for visits every index once and rethrows") {
  std::vector<std::atomic<int>> hits(1000);
  parallel_for(hits.size(), [&](std::size_t i) { hits[i]++; });
  for (const auto& h : hits) CHECK(h.load() == 1);
  CHECK_THROWS_AS(parallel_for(100,
                               [](std::size_t i) {
                                 if (i == 37) throw NoConvergenceError("boom");
                               }),
                  NoConvergenceError);
  parallel_for(0, [](std::size_t) { FAIL("called"); });
}

TEST_CASE("growth estimate does not depend on the thread count") {
  const auto* e = find_catalog_entry("flat-H");
  GrowthOptions opts;
  opts.samples = 400;
  ::setenv("TORIC_HK_THREADS", "1", 1);
  CHECK(worker_count() == 1);
  const auto one = volume_growth_exponent(e->arrangement, e->b, Point3n::zero(1), opts, [] {
    Tolerances t;
    t.growth_standard_error = 10.0;
    return t;
  }());
  ::setenv("TORIC_HK_THREADS", "3", 1);
  CHECK(worker_count() == 3);
  const auto three = volume_growth_exponent(e->arrangement, e->b, Point3n::zero(1), opts, [] {
    Tolerances t;
    t.growth_standard_error = 10.0;
    return t;
  }());
  ::unsetenv("TORIC_HK_THREADS");
  CHECK(one.volumes == three.volumes);
  CHECK(one.exponent == three.exponent);
}
