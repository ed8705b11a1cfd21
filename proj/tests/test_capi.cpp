// Exercises the shared library through its C header only.
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>

#include "anisofreq/anisofreq.h"

TEST_CASE("status codes and the error message") {
  af_quadform q;
  CHECK(af_quadform_make(1.0, -0.5, 1.0, &q) == AF_ERR_NEGATIVE_CROSS_TERM);
  CHECK(std::string(af_last_error()).find("negative") != std::string::npos);
  CHECK(af_quadform_make(1.0, 0.5, 1.0, &q) == AF_OK);
  CHECK(std::string(af_last_error()).empty());
  CHECK(af_quadform_make(1.0, 0.0, 1.0, nullptr) == AF_ERR_INVALID_ARGUMENT);
  CHECK(af_quadform_reflect(1.0, -0.5, 1.0, &q) == AF_OK);
  CHECK(q.beta == 0.5);
  af_domain* d = nullptr;
  CHECK(af_domain_from_json("{not json", &d) == AF_ERR_INVALID_ARGUMENT);
  CHECK(d == nullptr);
  CHECK(af_domain_from_json(R"({"type":"hexagon"})", &d) == AF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("quadform functions") {
  af_quadform q{0.5, 0.25, 0.5};
  double v = 0, lo = 0, hi = 0, t = 0;
  REQUIRE(af_quadform_eval(q, 1.0, 1.0, &v) == AF_OK);
  CHECK(v == doctest::Approx(1.5));
  REQUIRE(af_quadform_spectral(q, &lo, &hi, &t) == AF_OK);
  CHECK(lo == doctest::Approx(0.25));
  CHECK(hi == doctest::Approx(0.75));
  af_class_tag tag;
  REQUIRE(af_quadform_classify({0.25, 0, 1}, 0.25, &tag) == AF_OK);
  CHECK(tag == AF_CLASS_EXACT);
  REQUIRE(af_alpha_of_theta(0.25, M_PI / 4, &v) == AF_OK);
  CHECK(v == doctest::Approx(0.625));
  af_quadform qa;
  REQUIRE(af_q_alpha(0.25, 0.5, &qa) == AF_OK);
  CHECK(qa.beta == doctest::Approx(std::sqrt(0.125)));
  af_decomposition dec;
  REQUIRE(af_decompose({1, 0, 1}, 0.25, &dec) == AF_OK);
  CHECK(dec.has_alpha == 0);
  CHECK(dec.w_iso == 1.0);
  CHECK(af_decompose({0.1, 0, 1}, 0.25, &dec) == AF_ERR_CLASS_MEMBERSHIP);
  REQUIRE(af_quant_upper_bound(0.25, 0.5, 2.0, &v) == AF_OK);
  CHECK(v == doctest::Approx(3.265986323710904));
}

TEST_CASE("mesh, solve and optimize through handles") {
  af_domain* d = nullptr;
  REQUIRE(af_domain_from_json(R"({"type":"square"})", &d) == AF_OK);
  double area = 0;
  REQUIRE(af_domain_area(d, &area) == AF_OK);
  CHECK(area == 4.0);
  af_options o;
  af_options_default(&o);
  o.mesh_level = 4;

  af_mesh* m = nullptr;
  REQUIRE(af_mesh_build(d, &o, &m) == AF_OK);
  size_t nodes = 0, tris = 0, bnd = 0;
  REQUIRE(af_mesh_counts(m, &nodes, &tris, &bnd) == AF_OK);
  CHECK(tris == 512);
  CHECK(nodes == 289);
  CHECK(bnd == 64);

  af_eigen* e = nullptr;
  REQUIRE(af_solve(m, {1, 0, 1}, 2.0, &o, &e) == AF_OK);
  double lambda = 0, residual = 0;
  int iters = 0;
  REQUIRE(af_eigen_lambda(e, &lambda, &residual, &iters) == AF_OK);
  CHECK(std::abs(lambda - M_PI * M_PI / 2) / lambda < 1e-2);
  const double* u = nullptr;
  size_t n = 0;
  REQUIRE(af_eigen_values(e, &u, &n) == AF_OK);
  CHECK(n == nodes);
  char* json = nullptr;
  REQUIRE(af_eigen_json(e, &json) == AF_OK);
  CHECK(std::string(json).find("\"lambda\"") != std::string::npos);
  af_string_free(json);
  af_eigen_free(e);

  CHECK(af_solve(m, {1, 0, 1}, 1.0, &o, &e) == AF_ERR_INVALID_ARGUMENT);
  af_mesh_free(m);

  double r1 = 0, r2 = 0;
  REQUIRE(af_two_routes(d, 0.5, 0.3, 2.0, &o, &r1, &r2, nullptr) == AF_OK);
  CHECK(std::abs(r1 - r2) / r1 < 1e-2);

  af_optimize* opt = nullptr;
  REQUIRE(af_lambda_min(d, 0.25, 2.0, &o, &opt) == AF_OK);
  double lmin = 0, lmax = 0, ts = 0, as = 0;
  REQUIRE(af_optimize_values(opt, &lmin, &lmax, &ts, &as) == AF_OK);
  CHECK(lmin < lmax);
  af_quadform ext;
  REQUIRE(af_optimize_extremizer(opt, &ext) == AF_OK);
  af_class_tag tag;
  REQUIRE(af_quadform_classify(ext, 0.25, &tag) == AF_OK);
  CHECK(tag == AF_CLASS_EXACT);
  REQUIRE(af_optimize_json(opt, &json) == AF_OK);
  CHECK(std::string(json).find("theta_profile") != std::string::npos);
  af_string_free(json);
  af_optimize_free(opt);
  af_domain_free(d);
}

TEST_CASE("verify report and envelope") {
  af_report* r = nullptr;
  REQUIRE(af_verify(R"({"a":0.25,"p":2,"level":3,"seed":5,"n_samples":2,"n_pairs":2})", &r) == AF_OK);
  int passed = 0;
  REQUIRE(af_report_passed(r, &passed) == AF_OK);
  CHECK(passed == 1);
  char* json = nullptr;
  REQUIRE(af_report_json(r, &json) == AF_OK);
  char* env = nullptr;
  REQUIRE(af_envelope(json, 0, &env) == AF_OK);
  CHECK(std::string(env).rfind("{\n  \"schema_version\": 1,", 0) == 0);
  af_string_free(env);
  af_string_free(json);
  af_report_free(r);
  CHECK(af_verify(R"({"a":1.0})", &r) == AF_ERR_INVALID_ARGUMENT);
}

TEST_CASE("null handles are safe to free") {
  af_domain_free(nullptr);
  af_mesh_free(nullptr);
  af_eigen_free(nullptr);
  af_optimize_free(nullptr);
  af_report_free(nullptr);
  af_string_free(nullptr);
}
