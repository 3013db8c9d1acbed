#include <doctest.h>

#include <cmath>
#include <random>
#include <set>
#include <sstream>

#include "toric_hk/catalog.hpp"
#include "toric_hk/error.hpp"
#include "toric_hk/io.hpp"

using namespace toric_hk;

namespace {

std::string error_of(const std::string& text) {
  try {
    parse_arrangement(text, "arr.json");
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

std::vector<std::string> split_lines(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream in(s);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

}  // namespace

TEST_CASE("catalog has the required entries") {
  std::set<std::string> names;
  for (const auto& e : catalog()) CHECK(names.insert(e.name).second);
  for (const char* need : {"flat-cylinder", "flat-H", "taub-nut", "eguchi-hanson", "multi-EH-3",
                           "n2-unimodular", "n2-taub-nut", "n2-nonunimodular"}) {
    CHECK_MESSAGE(names.count(need) == 1, need);
  }
  CHECK(find_catalog_entry("no-such-entry") == nullptr);
  REQUIRE(find_catalog_entry("taub-nut") != nullptr);
  CHECK(find_catalog_entry("taub-nut")->b.order() == 1);
}

TEST_CASE("classification matches every catalog golden") {
  for (const auto& e : catalog()) {
    const auto rep = classify(e.arrangement, e.b);
    const auto bad = golden_mismatches(e, rep);
    CHECK_MESSAGE(bad.empty(), e.name, ": ", bad.empty() ? "" : bad.front());
  }
}

TEST_CASE("frozen classification values") {
  const auto rep = [](const char* name) {
    const auto* e = find_catalog_entry(name);
    REQUIRE(e != nullptr);
    return classify(e->arrangement, e->b);
  };
  const auto eh = rep("eguchi-hanson");
  CHECK(eh.ale_label == 1);
  CHECK(eh.volume_growth_exponent == 4);
  CHECK(rep("multi-EH-3").ale_label == 2);
  CHECK(rep("flat-H").ale_label == 0);
  CHECK_FALSE(rep("taub-nut").ale_label);
  CHECK(rep("taub-nut").volume_growth_exponent == 3);
  const auto cyl = rep("flat-cylinder");
  CHECK_FALSE(cyl.simply_connected);
  CHECK(cyl.flat_factor_l == 1);
  CHECK(rep("flat-H").cone_over_3sasakian);
  CHECK_FALSE(rep("eguchi-hanson").cone_over_3sasakian);
  const auto n2 = rep("n2-unimodular");
  CHECK(n2.smooth);
  CHECK(n2.simply_connected);
  CHECK(n2.volume_growth_exponent == 8);
  CHECK(rep("n2-taub-nut").volume_growth_exponent == 7);
  const auto bad = rep("n2-nonunimodular");
  CHECK_FALSE(bad.smooth);
  REQUIRE(bad.failing_stratum);
  CHECK(bad.failing_stratum->active == std::vector<int>{0, 1});
}

TEST_CASE("golden mismatches are reported per field") {
  const auto* e = find_catalog_entry("eguchi-hanson");
  auto rep = classify(e->arrangement, e->b);
  rep.ale_label = 3;
  rep.volume_growth_exponent = 5;
  const auto bad = golden_mismatches(*e, rep);
  CHECK(bad.size() == 2);
  for (const auto& line : bad) CHECK(line.find("expected") != std::string::npos);
}

TEST_CASE("closed-form Phi of the n = 1 entries agrees with eval_Phi") {
  std::mt19937_64 rng(71);
  std::normal_distribution<double> g(0.0, 2.0);
  for (const auto& e : catalog()) {
    if (!e.expected.phi) continue;
    for (int trial = 0; trial < 50; ++trial) {
      const Point3n p(Vec::Constant(1, g(rng)), CVec::Constant(1, Complex(g(rng), g(rng))));
      const double want = e.expected.phi(p);
      CHECK(eval_Phi(e.arrangement, e.b, p).value(0, 0) ==
            doctest::Approx(want).epsilon(4 * std::numeric_limits<double>::epsilon()));
    }
  }
}

TEST_CASE("arrangement JSON round trip") {
  for (const auto& e : catalog()) {
    const auto j = arrangement_to_json(e.arrangement, e.b);
    const auto back = parse_arrangement(j.dump(), e.name);
    REQUIRE(back.arrangement.size() == e.arrangement.size());
    for (std::size_t k = 0; k < e.arrangement.size(); ++k) {
      CHECK(back.arrangement.flats()[k].normal == e.arrangement.flats()[k].normal);
      CHECK(back.arrangement.flats()[k].offset == e.arrangement.flats()[k].offset);
      CHECK(back.arrangement.flats()[k].mass == e.arrangement.flats()[k].mass);
    }
    CHECK(back.b.entries() == e.b.entries());
    CHECK(arrangement_to_json(back.arrangement, back.b) == j);
  }
}

TEST_CASE("arrangement parsing") {
  const auto d = parse_arrangement(R"({"n": 2, "flats": [{"u": [1, 0], "lambda": [0.5, 0, 0]},
      {"u": [-1, -1], "lambda": [1, 2, 3], "a": 2}], "B": [[1, 0], [0, 0]]})");
  CHECK(d.arrangement.dim() == 2);
  CHECK(d.arrangement.flats()[0].mass == 1.0);
  CHECK(d.arrangement.flats()[1].normal.entries() == std::vector<std::int64_t>{1, 1});
  CHECK(d.arrangement.flats()[1].offset == std::array<double, 3>{-1, -2, -3});
  CHECK(d.b.order() == 1);
  const auto e = parse_arrangement(R"({"n": 3, "flats": []})");
  CHECK(e.arrangement.empty());
  CHECK(e.b.order() == 0);
}

TEST_CASE("parse diagnostics") {
  CHECK(error_of("{\"n\": 1,\n \"flats\": [}").rfind("arr.json:2:", 0) == 0);
  CHECK(error_of("{\"n\": 1,\n \"flats\": [}").find("invalid JSON (") != std::string::npos);
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [2], "lambda": [0, 0, 0]}]})") ==
        "arr.json: field flats[0]: normal not primitive (gcd 2)");
  CHECK(error_of(R"({"n": 2, "flats": [{"u": [1], "lambda": [0, 0, 0]}]})") ==
        "arr.json: field flats[0].u: expected 2 entries, got 1");
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [1.5], "lambda": [0, 0, 0]}]})") ==
        "arr.json: field flats[0].u[0]: expected an integer");
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [1], "lambda": [0, 0]}]})") ==
        "arr.json: field flats[0].lambda: expected 3 numbers");
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [1]}]})") == "arr.json: field flats[0].lambda: missing");
  CHECK(error_of(R"({"flats": []})") == "arr.json: field n: missing");
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [1], "lambda": [0, 0, 0], "a": -1}]})") ==
        "arr.json: field flats[0]: flat mass must be positive");
  CHECK(error_of(R"({"n": 1, "flats": [], "B": [[-1]]})").rfind("arr.json: ", 0) == 0);
  CHECK(error_of(R"({"n": 1, "flats": [], "B": [[1, 0]]})") == "arr.json: field B[0]: expected 1 entries");
  CHECK(error_of(R"({"n": 1, "flats": [{"u": [1], "lambda": [0, 0, 0]},
      {"u": [-1], "lambda": [0, 0, 0]}]})")
            .rfind("arr.json: ", 0) == 0);
  CHECK(error_of("[1, 2]") == "arr.json: field <root>: expected an object");
  CHECK_THROWS_AS(load_arrangement("/nonexistent/file.json"), InputError);
}

TEST_CASE("report JSON round trips") {
  const auto* e = find_catalog_entry("n2-nonunimodular");
  const auto rep = classify(e->arrangement, e->b);
  const auto back = report_from_json(to_json(rep));
  CHECK(back == rep);
  const auto good = classify(find_catalog_entry("multi-EH-3")->arrangement,
                             find_catalog_entry("multi-EH-3")->b);
  CHECK(report_from_json(to_json(good)) == good);

  ResidualReport r;
  r.check_name = "phi";
  r.points = {Point3n(Vec::Constant(1, 0.25), CVec::Constant(1, Complex(1, -2)))};
  r.residuals = {std::numeric_limits<double>::infinity()};
  r.tolerance = 1e-6;
  r.wall_time_s = 0.5;
  r.extras = {{"ratio", 0.25}};
  r.finalize();
  const auto j = to_json(r);
  CHECK(j["residuals"][0].is_null());
  const auto rb = residual_report_from_json(j);
  CHECK(rb.check_name == "phi");
  CHECK(std::isinf(rb.residuals[0]));
  CHECK(rb.pass == r.pass);
  CHECK(rb.points[0].z(0) == Complex(1, -2));
  CHECK(rb.extras == r.extras);

  const Point3n p((Vec(2) << 1, 2).finished(), (CVec(2) << Complex(3, 4), Complex(5, 6)).finished());
  const auto pb = point_from_json(to_json(p));
  CHECK(pb.x == p.x);
  CHECK(pb.z == p.z);
}

TEST_CASE("point parsing") {
  const auto p = parse_point("1,2,3.5,-4,0,1e-3", 2);
  CHECK(p.x == (Vec(2) << 1, 2).finished());
  CHECK(p.z == (CVec(2) << Complex(3.5, 0), Complex(-4, 1e-3)).finished());
  CHECK_THROWS_AS(parse_point("1,2", 1), InputError);
  CHECK_THROWS_AS(parse_point("1,a,3", 1), InputError);
}

TEST_CASE("grid export") {
  const auto* e = find_catalog_entry("flat-H");
  std::ostringstream out;
  write_grid_csv(out, e->arrangement, e->b, Point3n::zero(1), {GridAxis{0, -1.0, 1.0, 3}});
  const auto lines = split_lines(out.str());
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "x1,rez1,imz1,phi11,det_phi,det_g");
  // On the string Phi is finite but the metric is not defined in this gauge.
  CHECK(lines[1] == "-1,0,0,0.25,0.25,nan");
  CHECK(lines[2] == "0,0,0,nan,nan,nan");
  CHECK(lines[3] == "1,0,0,0.25,0.25,0.0625");

  std::ostringstream grid2;
  write_grid_csv(grid2, e->arrangement, e->b, Point3n::zero(1),
                 {GridAxis{1, 1.0, 2.0, 2}, GridAxis{2, 0.0, 1.0, 3}});
  CHECK(split_lines(grid2.str()).size() == 7);
  std::ostringstream sink;
  CHECK_THROWS_AS(write_grid_csv(sink, e->arrangement, e->b, Point3n::zero(1), {GridAxis{3, 0, 1, 2}}),
                  InputError);
}
