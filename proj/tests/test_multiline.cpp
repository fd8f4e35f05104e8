#include <doctest.h>

#include <random>

#include "mtasep/bigint.hpp"
#include "mtasep/core.hpp"
#include "mtasep/error.hpp"
#include "mtasep/multiline.hpp"

using namespace mtasep;

TEST_CASE("associate_line hand example") {
  // Upper class-1 particle at site 3 binds the lower particle at site 3; the
  // one at site 2 stays free and becomes class 2.
  const LabeledLine upper{{0, 0, 0, 1}, 1};
  const auto lower = associate_line(upper, Row{0, 0, 1, 1});
  CHECK(lower.level == 2);
  CHECK(lower.labels == std::vector<int>{0, 0, 2, 1});
}

TEST_CASE("associate_line wraps around the ring") {
  const LabeledLine upper{{1, 0, 0, 0}, 1};
  const auto lower = associate_line(upper, Row{0, 0, 1, 0});
  CHECK(lower.labels == std::vector<int>{0, 0, 1, 0});
}

TEST_CASE("associate_line serves higher priority first") {
  // Class 1 at site 2 grabs site 1 before class 2 at site 3 looks left.
  const LabeledLine upper{{0, 0, 1, 2}, 2};
  const auto lower = associate_line(upper, Row{1, 1, 0, 0});
  CHECK(lower.labels == std::vector<int>{2, 1, 0, 0});
}

TEST_CASE("associate_line errors") {
  CHECK_THROWS_AS(associate_line(LabeledLine{{1, 1}, 1}, Row{1, 0}), InputError);
  CHECK_THROWS_AS(associate_line(LabeledLine{{1, 0}, 1}, Row{1, 0, 0}), InputError);
}

TEST_CASE("label_multiline") {
  const auto ml = parse_multiline("0001\n0011\n");
  CHECK(render(label_multiline(ml)) == "0021");
  CHECK_THROWS_AS(parse_multiline("0101\n0100\n").validate(), InputError);
  CHECK_THROWS_AS(parse_multiline("01x\n"), InputError);
  CHECK(render(ml) == "0001\n0011\n");
}

TEST_CASE("labeling commutes with rotation") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const Sector s{7, {1, 2, 1}};
    const auto ml = sample_multiline(s, rng());
    const auto labeled = label_multiline(ml);
    for (int k = 1; k < 7; ++k) {
      MultilineConfig rotated;
      for (const auto& row : ml.rows) {
        Row r(row.size());
        for (std::size_t i = 0; i < row.size(); ++i) r[i] = row[(i + k) % row.size()];
        rotated.rows.push_back(r);
      }
      CHECK(label_multiline(rotated) == rotate(labeled, k));
    }
  }
}

TEST_CASE("sample_multiline populations") {
  const auto ml = sample_multiline(Sector{6, {1, 2, 1}}, 5);
  REQUIRE(ml.lines() == 3);
  const std::vector<int> expected{1, 3, 4};
  for (int k = 0; k < 3; ++k)
    CHECK(std::count(ml.rows[k].begin(), ml.rows[k].end(), 1) == expected[k]);
  CHECK(label_multiline(ml).species() == 3);
}

TEST_CASE("golden ancestor counts") {
  CHECK(count_ancestors(parse_config("0210")) == 3);
  CHECK(count_ancestors(parse_config("0211021")) == 6);
  CHECK(count_ancestors(parse_config("2103")) == 9);
  CHECK(count_ancestors(parse_config("0101")) == 1);
}

TEST_CASE("ancestor counts sum to the multiline total") {
  // Every top-row choice with fixed bottom positions labels to exactly one
  // configuration with those positions.
  const Sector s{6, {1, 1, 2}};
  std::map<std::vector<int>, BigInt> sums;
  for (const auto& c : s.configurations()) {
    std::vector<int> occupied;
    for (int i = 0; i < 6; ++i) occupied.push_back(c[i] > 0);
    sums[occupied] += count_ancestors(c);
  }
  const BigInt expected = binomial(6, 1) * binomial(6, 2);
  for (const auto& [positions, total] : sums) CHECK(total == expected);
}

TEST_CASE("enumeration bound") {
  CHECK_THROWS_AS(count_ancestors(parse_config("321000000"), 10), BoundExceeded);
}

TEST_CASE("empirical distribution is deterministic") {
  const Sector s{4, {1, 1}};
  const auto a = empirical_distribution(s, 200000, 3, 1);
  const auto b = empirical_distribution(s, 200000, 3, 4);
  CHECK(a.counts == b.counts);
  std::uint64_t total = 0;
  for (const auto& [c, n] : a.counts) total += n;
  CHECK(total == 200000);
  CHECK(a.frequency(parse_config("0210")) == doctest::Approx(0.125).epsilon(0.02));
}
