#include <cmath>
#include <filesystem>
#include <limits>

#include "pathcalc/csv.hpp"
#include "pathcalc/report.hpp"
#include "support.hpp"

using namespace testing;

namespace {

std::string scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "pathcalc_unit";
  std::filesystem::create_directories(dir);
  return (dir / name).string();
}

}  // namespace

TEST_CASE("canonical json") {
  Json j{{"b", 1}, {"a", {{"z", 0.1}, {"y", true}}}, {"c", Json::array({1.0 / 3.0, nullptr, "s"})}};
  std::string s = canonical_dump(j);
  CHECK(s == canonical_dump(Json::parse(s)));
  CHECK(s.find("\"a\"") < s.find("\"b\""));
  CHECK(s.find("\"y\"") < s.find("\"z\""));
  CHECK(s.find("0.33333333333333331") != std::string::npos);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.back() == '\n');

  Json bad{{"x", std::numeric_limits<double>::quiet_NaN()}, {"y", std::numeric_limits<double>::infinity()}};
  auto nb = Json::parse(canonical_dump(bad));
  CHECK(nb["x"].is_null());
  CHECK(nb["y"].is_null());

  double v = 0.1 + 0.2;
  CHECK(Json::parse(canonical_dump(Json{{"v", v}}))["v"].get<double>() == v);
}

TEST_CASE("analysis reports") {
  auto b = skeleton(95, 0, 10, 1);
  auto file = scratch("w.csv");
  export_csv_file(file, b);
  auto r = run_analysis("integrate", Json{{"integrand", file}, {"integrator", file}});
  for (const char* key : {"command", "levels", "sup_deltas", "converged", "tol", "eps0", "crossings",
                          "limit_terminal", "ok"})
    CHECK(r.contains(key));
  CHECK(r["levels"].size() == 7);
  CHECK(r["sup_deltas"].size() == 6);
  CHECK(r["ok"].get<bool>());
  CHECK(canonical_dump(r) == canonical_dump(run_analysis("integrate", Json{{"integrand", file}, {"integrator", file}})));

  auto q = run_analysis("qv", Json{{"x", file}, {"levels", "6:8"}});
  CHECK(q["levels"].size() == 3);

  CHECK(code_of([] { run_analysis("nothing", Json::object()); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { run_analysis("integrate", Json::object()); }) == ErrorCode::BadParameter);
  CHECK(code_of([] { run_analysis("integrate", Json::array()); }) == ErrorCode::BadParameter);
  CHECK(code_of([&] { run_analysis("integrate", Json{{"integrand", file}, {"integrator", "/nonexistent/x.csv"}}); }) ==
        ErrorCode::IOError);
  CHECK(code_of([&] { run_analysis("integrate", Json{{"integrand", file}, {"integrator", file}, {"levels", "x"}}); }) ==
        ErrorCode::BadParameter);
}
