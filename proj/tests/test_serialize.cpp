#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <limits>

#include "anisofreq/error.hpp"
#include "anisofreq/serialize.hpp"

using namespace anisofreq;

TEST_CASE("numbers print with 17 significant digits") {
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(format_number(-2.5) == "-2.5");
  CHECK(format_number(1e300) == "1.0000000000000001e+300");
  CHECK(format_number(std::numeric_limits<double>::quiet_NaN()) == "nan");
}

TEST_CASE("dump_json") {
  Json j = {{"b", 0.1}, {"a", Json::array({1.0, 2, 3.5})}, {"s", "x"}, {"n", Json::object()}};
  const std::string out = dump_json(j);
  CHECK(out == "{\n  \"b\": 0.10000000000000001,\n  \"a\": [1.0, 2, 3.5],\n  \"s\": \"x\",\n  \"n\": {}\n}\n");
  CHECK(dump_json(Json{{"x", std::numeric_limits<double>::infinity()}}, 0) == "{\"x\":\"inf\"}\n");
  // Output parses back to the same doubles.
  const Json back = Json::parse(dump_json(Json{{"v", 0.1 + 0.2}}));
  CHECK(back["v"].get<double>() == 0.1 + 0.2);
}

TEST_CASE("quadform json") {
  const QuadForm q(0.5, 0.25, 0.75);
  CHECK(quadform_from_json(to_json(q)) == q);
  CHECK_THROWS_AS(quadform_from_json(Json{{"alpha", 1.0}}), Error);
  CHECK_THROWS_AS(quadform_from_json(Json{{"alpha", 1.0}, {"beta", -0.1}, {"gamma", 1.0}}), Error);
}

TEST_CASE("domain json") {
  for (const DomainSpec& d : {domains::square(), domains::unit_disk(), domains::l_shape(),
                              shear_y(domains::unit_disk(), 0.25), DomainSpec{Disk{{0.5, -1.0}, 2.0}}}) {
    const DomainSpec back = domain_from_json(Json::parse(dump_json(to_json(d))));
    CHECK(dump_json(to_json(back)) == dump_json(to_json(d)));
    CHECK(area(back) == area(d));
  }
  CHECK(area(domain_from_json(Json::parse(R"({"type":"ra","a":0.25})"))) == doctest::Approx(8.0));
  CHECK(area(domain_from_json(Json::parse(R"({"type":"rectangle","hw":1,"hh":2})"))) == doctest::Approx(8.0));
  CHECK(area(domain_from_json(Json::parse(R"({"type":"disk","radius":1.0})"))) == doctest::Approx(M_PI));
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"torus"})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"disk"})")), Error);
  CHECK_THROWS_AS(domain_from_json(Json::parse(R"({"type":"polygon","vertices":[[0,0],[1,0]]})")), Error);
}

TEST_CASE("atomic write") {
  const auto dir = std::filesystem::temp_directory_path() / "anisofreq_serialize_test";
  std::filesystem::create_directories(dir);
  const std::string path = (dir / "out.txt").string();
  write_atomic(path, "first");
  write_atomic(path, "second");
  CHECK(read_file(path) == "second");
  CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
  write_atomic((dir / "nested" / "x.txt").string(), "x");
  CHECK(read_file((dir / "nested" / "x.txt").string()) == "x");
  // A regular file where a directory is needed.
  CHECK_THROWS_AS(write_atomic((dir / "out.txt" / "x.txt").string(), "x"), Error);
  CHECK_THROWS_AS(read_file((dir / "nope.txt").string()), Error);
  std::filesystem::remove_all(dir);
}

TEST_CASE("envelope and csv") {
  const Json e = envelope(Json{{"x", 1}}, "t");
  CHECK(e.begin().key() == "schema_version");
  CHECK(e["schema_version"] == kSchemaVersion);
  CHECK(e["payload"]["x"] == 1);
  const Mesh m = build_mesh(domains::square(), {1});
  std::vector<double> u(m.node_count(), 0.5);
  const std::string csv = eigenfunction_csv(m, u);
  CHECK(csv.rfind("x,y,u\n", 0) == 0);
  CHECK_THROWS_AS(eigenfunction_csv(m, {1.0}), Error);
  CHECK(profile_csv({{0.0, 1.5}}) == "theta,lambda\n0.0,1.5\n");
}
