#include "pathcalc/partition.hpp"
#include "support.hpp"

using namespace testing;

TEST_CASE("constant path never crosses") {
  auto c = constant(3.0);
  for (int n = 1; n <= 12; ++n) {
    SampledPath mon[] = {c};
    auto p = lebesgue_partition(mon, n, 0.5);
    CHECK(p.stop_times == std::vector<double>{0.0});
    CHECK(p.exhausted);
    CHECK(p.threshold == std::ldexp(0.5, -n));
  }
}

TEST_CASE("unit-slope line crosses uniformly") {
  SampledPath mon[] = {line(0.0, 1.0, 7)};
  auto p = threshold_partition(mon, 0.25);
  CHECK(p.stop_times == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});

  auto seq = partition_sequence(mon, 1, 2, 0.5);
  REQUIRE(seq.size() == 2);
  CHECK(seq[0].threshold == 0.25);
  CHECK(seq[1].threshold == 0.125);
  CHECK(crossing_count(seq[0]) == 4);
  CHECK(crossing_count(seq[1]) == 8);
  auto five = partition_sequence(std::span<const SampledPath>(std::vector<SampledPath>{constant(1.0)}), 1, 5, 0.5);
  CHECK(five.size() == 5);
  for (auto& p5 : five) CHECK(p5.stop_times.size() == 1);
}

TEST_CASE("the first path to move triggers the stop") {
  SampledPath mon[] = {line(0.0, 1.0, 3), line(0.0, -2.0, 5)};
  auto p = threshold_partition(mon, 0.5);
  CHECK(p.stop_times == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
}

TEST_CASE("brownian partitions are fine and deterministic") {
  auto w = brownian(21, 0, 100000).column(0);
  SampledPath mon[] = {w};
  for (int n = 4; n <= 9; ++n) {
    auto p = lebesgue_partition(mon, n, 0.5);
    CHECK(p.stop_times.front() == 0.0);
    CHECK(std::is_sorted(p.stop_times.begin(), p.stop_times.end()));
    CHECK(p.stop_times.back() <= 1.0);
    auto r = verify_fineness(p, w, 2.0 * p.threshold);
    CHECK(r.fine);
    CHECK(r.max_oscillation <= 2.0 * p.threshold * (1 + 1e-12));
    // Every stop reaches the threshold exactly.
    for (std::size_t k = 1; k < p.stop_times.size(); ++k)
      CHECK(std::abs(w.sample_at(p.stop_times[k]) - w.sample_at(p.stop_times[k - 1])) ==
            doctest::Approx(p.threshold).epsilon(1e-9));
    auto q = lebesgue_partition(mon, n, 0.5);
    CHECK(q.stop_times == p.stop_times);
  }
  auto p6 = lebesgue_partition(mon, 6, 0.5);
  CHECK(verify_fineness(p6, w, std::ldexp(1.0, -6)).fine);
}

TEST_CASE("crossing counts roughly quadruple per level") {
  auto w = brownian(22, 0, 100000).column(0);
  SampledPath mon[] = {w};
  auto seq = partition_sequence(mon, 3, 7, 0.5);
  for (std::size_t k = 1; k < seq.size(); ++k) {
    double ratio = double(crossing_count(seq[k])) / double(crossing_count(seq[k - 1]));
    CHECK(ratio >= 3.0);
    CHECK(ratio <= 5.0);
  }
}

TEST_CASE("verify_fineness") {
  auto w = brownian(23, 0, 100000).column(0);
  auto coarse = explicit_partition({0.0}, 0.0, 1.0);
  auto r = verify_fineness(coarse, w, std::ldexp(1.0, -10));
  CHECK_FALSE(r.fine);
  CHECK(r.max_oscillation > 0.1);
  CHECK(verify_fineness(coarse, constant(2.0), 0.0).fine);
  auto tent = SampledPath::build({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  auto two = explicit_partition({0.0, 0.5}, 0.0, 1.0);
  auto t = verify_fineness(two, tent, 0.5);
  CHECK_FALSE(t.fine);
  CHECK(t.max_oscillation == 1.0);
}

TEST_CASE("partition errors and caps") {
  CHECK(code_of([] { lebesgue_partition(std::span<const SampledPath>(), 3, 0.5); }) == ErrorCode::EmptyMonitorSet);
  SampledPath mismatched[] = {line(0.0, 1.0), line(0.0, 1.0, 4, 0.0, 2.0)};
  CHECK(code_of([&] { lebesgue_partition(mismatched, 3, 0.5); }) == ErrorCode::DomainMismatch);
  SampledPath mon[] = {line(0.0, 1.0)};
  CHECK(code_of([&] { lebesgue_partition(mon, 3, 0.0); }) == ErrorCode::BadParameter);
  auto capped = lebesgue_partition(mon, 5, 0.5, 3);
  CHECK(crossing_count(capped) == 3);
  CHECK_FALSE(capped.exhausted);
  CHECK(code_of([] { explicit_partition({0.5, 0.2}, 0.0, 1.0); }) == ErrorCode::NonMonotoneTimes);
}
