#include <sstream>

#include "pathcalc/csv.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("build_path validates its inputs") {
  auto c = SampledPath::build({0.0, 1.0}, {5.0, 5.0});
  CHECK(c.sample_at(0.3) == 5.0);
  CHECK(code_of([] { SampledPath::build({0.0, 1.0, 1.0}, {0.0, 1.0, 2.0}); }) == ErrorCode::NonMonotoneTimes);
  CHECK(code_of([] { SampledPath::build({0.0, 1.0}, {0.0}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { SampledPath::build({0.0}, {0.0}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { SampledPath::build({0.0, 1.0}, {0.0, NAN}); }) == ErrorCode::NonFiniteValue);
  CHECK(code_of([] { SampledPath::build({0.0, INFINITY}, {0.0, 1.0}); }) == ErrorCode::NonFiniteValue);
}

TEST_CASE("sample_at interpolates linearly and is exact at nodes") {
  auto tent = SampledPath::build({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK(tent.sample_at(0.25) == 0.5);
  CHECK(tent.sample_at(0.5) == 1.0);
  CHECK(tent.sample_at(0.75) == 0.5);
  CHECK(code_of([&] { tent.sample_at(2.0); }) == ErrorCode::OutOfDomain);
  CHECK(code_of([&] { tent.sample_at(-0.1); }) == ErrorCode::OutOfDomain);

  auto w = brownian(3, 0, 1000).column(0);
  auto t = w.times();
  auto v = w.values();
  for (std::size_t i = 0; i < w.size(); i += 37) CHECK(w.sample_at(t[i]) == v[i]);
  for (std::size_t i = 0; i + 1 < w.size(); i += 53) {
    double lam = 0.3;
    double s = t[i] + lam * (t[i + 1] - t[i]);
    CHECK(w.sample_at(s) == doctest::Approx(v[i] + lam * (v[i + 1] - v[i])).epsilon(1e-12));
  }
  auto ts = std::vector<double>{0.0, 0.1, 0.1, 0.55, 1.0};
  auto batch = w.sample_sorted(ts);
  for (std::size_t k = 0; k < ts.size(); ++k) CHECK(batch[k] == w.sample_at(ts[k]));
}

TEST_CASE("grid helpers") {
  std::vector<double> a{0.0, 0.5, 1.0}, b{0.0, 0.25, 0.5, 0.75};
  std::span<const double> parts[] = {a, b};
  CHECK(merge_sorted(parts) == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

  auto x = line(0.0, 2.0, 2);
  auto y = line(1.0, 1.0, 3);
  auto s = add(x, y, -1.0);
  CHECK(s.size() == 5);
  CHECK(s.sample_at(1.0 / 3.0) == doctest::Approx(2.0 / 3.0 - 1.0));
  CHECK(sup_abs(x) == 2.0);
  CHECK(total_variation(SampledPath::build({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0})) == 2.0);
  CHECK(sup_distance(x, scale(x, 1.0)) == 0.0);
  CHECK(code_of([] { require_positive(line(1.0, 0.0), "x"); }) == ErrorCode::NonPositivePath);
  CHECK(code_of([&] { add(x, line(0.0, 1.0, 2, 0.0, 2.0)); }) == ErrorCode::DomainMismatch);
}

TEST_CASE("market frames") {
  auto f = brownian(1, 0, 10, 3);
  CHECK(f.column_count() == 3);
  CHECK(f.names() == std::vector<std::string>{"X1", "X2", "X3"});
  CHECK(f.column("X2").values().data() != nullptr);
  CHECK(code_of([&] { f.column("Y"); }) == ErrorCode::MissingColumn);
  CHECK(code_of([] {
          MarketFrame(make_grid({0.0, 1.0}), {{0.0, 1.0}}, {"A"}, 2);
        }) == ErrorCode::BadParameter);
  CHECK(code_of([] {
          MarketFrame(make_grid({0.0, 1.0}), {{0.0, 1.0, 2.0}}, {"A"}, 1);
        }) == ErrorCode::LengthMismatch);
}

TEST_CASE("csv ingestion") {
  std::istringstream in("time,S\n0,100\n1,110\n");
  ColumnMapping m;
  m.value_columns = {"S"};
  m.traded_count = 1;
  auto f = ingest_csv(in, m);
  CHECK(f.times().size() == 2);
  CHECK(f.column_count() == 1);
  CHECK(f.traded_count() == 1);
  CHECK(f.column(0).back() == 110.0);

  std::istringstream bad("time,S\n0,100\n1,abc\n");
  CHECK(code_of([&] { ingest_csv(bad); }) == ErrorCode::ParseError);
  std::istringstream back("time,S\n0,100\n0,110\n");
  CHECK(code_of([&] { ingest_csv(back); }) == ErrorCode::NonMonotoneTimes);
  std::istringstream missing("t,S\n0,100\n1,110\n");
  CHECK(code_of([&] { ingest_csv(missing); }) == ErrorCode::MissingColumn);
  std::istringstream nocol("time,S\n0,100\n1,110\n");
  CHECK(code_of([&] { ingest_csv(nocol, m = ColumnMapping{"time", {"I"}, 0}); }) == ErrorCode::MissingColumn);
  std::istringstream ragged("time,S,I\n0,100\n1,110,3\n");
  CHECK(code_of([&] { ingest_csv(ragged); }) == ErrorCode::ParseError);
}

TEST_CASE("csv export and ingest round trip bit for bit") {
  auto f = correlated(9, 0, 500);
  std::stringstream io;
  export_csv(io, f);
  auto g = ingest_csv(io);
  REQUIRE(g.column_count() == 2);
  CHECK(g.names() == f.names());
  for (std::size_t i = 0; i < f.times().size(); ++i) {
    CHECK(g.times()[i] == f.times()[i]);
    CHECK(g.column_values(0)[i] == f.column_values(0)[i]);
    CHECK(g.column_values(1)[i] == f.column_values(1)[i]);
  }
  CHECK(format_double(0.1) == "0.10000000000000001");
}

TEST_CASE("error codes have names") {
  CHECK(std::string(error_code_name(ErrorCode::QVRangeExceeded)) == "QVRangeExceeded");
  CHECK(std::string(error_code_name(ErrorCode::IOError)) == "IOError");
}
