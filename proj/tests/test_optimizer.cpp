#include <doctest.h>

#include <cmath>
#include <numbers>

#include "anisofreq/error.hpp"
#include "anisofreq/optimizer.hpp"
#include "anisofreq/serialize.hpp"
#include "anisofreq/verification.hpp"

using namespace anisofreq;

namespace {

constexpr double kPi = std::numbers::pi;

double rel(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

OptimizeOptions at_level(int level) {
  OptimizeOptions o;
  o.mesh.level = level;
  return o;
}

}  // namespace

TEST_CASE("lambda_max is the isotropic value") {
  const MaxResult sq = lambda_max(domains::square(), 0.25, 2.0, {5}, {});
  CHECK(rel(sq.lambda, kPi * kPi / 2) < 5e-3);
  CHECK(sq.form == QuadForm::identity());
  const MaxResult disk = lambda_max(domains::unit_disk(), 0.5, 2.0, {5}, {});
  CHECK(rel(disk.lambda, 5.783185962946783) < 1e-2);
  CHECK_THROWS_AS(lambda_max(domains::square(), 1.0, 2.0, {3}, {}), Error);
}

TEST_CASE("lambda_min on the square") {
  const OptimizeOptions o = at_level(4);
  const OptimizeResult r = lambda_min(domains::square(), 0.25, 2.0, o);
  CHECK(r.lambda_min <= r.lambda_max);
  CHECK(r.lambda_min >= 0.25 * r.lambda_max - r.residual * r.lambda_max);
  CHECK(classify(r.extremizer, 0.25) == ClassTag::InQaExact);
  CHECK(theta_of_alpha(0.25, r.alpha_star) == doctest::Approx(r.theta_star).epsilon(1e-10));
  CHECK(alpha_of_theta(0.25, r.theta_star) == doctest::Approx(r.alpha_star).epsilon(1e-10));
  REQUIRE(r.theta_profile.size() == 17);
  CHECK(r.theta_profile.front().theta == 0.0);
  CHECK(r.theta_profile.back().theta == doctest::Approx(kPi / 2));
  // The square is symmetric under theta -> pi/2 - theta.
  for (std::size_t k = 0; k < r.theta_profile.size(); ++k)
    CHECK(rel(r.theta_profile[k].lambda, r.theta_profile[16 - k].lambda) < 1e-2);
  // The diagonal orientation wins on the square.
  CHECK(r.theta_star == doctest::Approx(kPi / 4).epsilon(1e-3));
  CHECK_FALSE(r.flat_disk_flag);
  for (const auto& s : r.theta_profile) CHECK(r.lambda_min <= s.lambda);
}

TEST_CASE("disk profile is flat") {
  const OptimizeOptions o = at_level(4);
  const OptimizeResult r = lambda_min(domains::unit_disk(), 0.25, 2.0, o);
  CHECK(r.flat_disk_flag);
  CHECK(r.relative_spread < 1e-2);
  const double ellipse = solve_p2(build_mesh(shear_y(domains::unit_disk(), 0.25), o.mesh), QuadForm::identity()).lambda;
  CHECK(rel(r.lambda_min, 0.25 * ellipse) < 1e-2);
  // Every grid point ties, so the plateau is reported whole.
  CHECK(r.multiplicity_warning);
  CHECK(r.minimizers.size() == 17);
}

TEST_CASE("R_a minimum") {
  const OptimizeResult r = lambda_min(domains::rectangle_ra(0.25), 0.25, 2.0, at_level(5));
  CHECK(rel(r.lambda_min, 0.25 * kPi * kPi / 2) < 1e-2);
  // Discretization moves the discrete argmin off 0 by O(h^2).
  CHECK(r.theta_star < 1e-2);
}

TEST_CASE("a close to 1 collapses the class") {
  const OptimizeResult r = lambda_min(domains::l_shape(), 0.999, 2.0, at_level(4));
  CHECK(rel(r.lambda_min, r.lambda_max) < 5e-3);
}

TEST_CASE("a = 1 sample equals the isotropic value") {
  const OptimizeOptions o = at_level(4);
  const double iso = solve_p2(build_mesh(domains::square(), o.mesh), QuadForm::identity()).lambda;
  CHECK(lambda_at_theta(domains::square(), 1.0, 0.0, 2.0, o).lambda == doctest::Approx(iso).epsilon(1e-10));
}

TEST_CASE("direct route works on one mesh") {
  OptimizeOptions o = at_level(4);
  o.route = Route::Direct;
  const OptimizeResult direct = lambda_min(domains::square(), 0.5, 2.0, o);
  o.route = Route::Sheared;
  const OptimizeResult sheared = lambda_min(domains::square(), 0.5, 2.0, o);
  CHECK(rel(direct.lambda_min, sheared.lambda_min) < 2e-2);
}

TEST_CASE("argument checks") {
  OptimizeOptions o = at_level(3);
  CHECK_THROWS_AS(lambda_min(domains::square(), 0.0, 2.0, o), Error);
  CHECK_THROWS_AS(lambda_min(domains::square(), 1.0, 2.0, o), Error);
  o.grid_n = 8;
  CHECK_THROWS_AS(lambda_min(domains::square(), 0.5, 2.0, o), Error);
}

TEST_CASE("verification entries") {
  const OptimizeOptions o = at_level(3);
  const VerificationReport rig = verify_rigidity(domains::square(), 0.25, 2.0, 4, 4, o, 42);
  REQUIRE(rig.entries.size() == 2);
  for (const auto& e : rig.entries) {
    CHECK(e.passed);
    CHECK(e.mesh_level == 3);
    CHECK(e.residual > 0.0);
  }
  CHECK(rig.entries[0].get("violations") == 0.0);
  CHECK(rig.entries[0].get("min_margin") > 0.0);

  const VerificationReport same = verify_quantitative(domains::square(), {{0.3, 0.3}}, {2.0}, o);
  REQUIRE(same.entries.size() == 2);
  CHECK(same.entries[0].get("ratio_minus_one") == 0.0);
  CHECK(same.entries[0].get("bound") == 0.0);
  CHECK(same.entries[1].get("difference") == 0.0);
  CHECK(same.entries[1].get("rhs") == 0.0);
  CHECK(same.passed());

  const VerificationEntry chain = verify_chain(domains::l_shape(), 0.25, 2.0, o);
  CHECK(chain.passed);
  const VerificationEntry nn = verify_nonnormalized(domains::square(), 0.25, 2.0, 6, o, 7);
  CHECK(nn.passed);
  CHECK_THROWS_AS(verify_rigidity(domains::square(), 0.25, 2.0, 0, 0, o, 1), Error);
  CHECK_THROWS_AS(verify_Q0_limit(domains::square(), 2.0, {0.1, 0.5}, o), Error);
}

TEST_CASE("suite is deterministic for a fixed seed") {
  SuiteConfig c;
  c.opts.mesh.level = 3;
  c.b = 0.5;
  c.seed = 42;
  const std::string first = dump_json(to_json(run_verification_suite(c)));
  const std::string second = dump_json(to_json(run_verification_suite(c)));
  CHECK(first == second);
  c.seed = 43;
  CHECK(dump_json(to_json(run_verification_suite(c))) != first);
}
