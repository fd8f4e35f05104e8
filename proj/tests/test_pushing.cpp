#include <doctest.h>

#include <random>

#include "mtasep/core.hpp"
#include "mtasep/error.hpp"
#include "mtasep/pushing.hpp"

using namespace mtasep;

namespace {

std::vector<std::string> names(const AncestorSet& set) {
  std::vector<std::string> out;
  for (const auto& c : set) out.push_back(render(c));
  return out;
}

}  // namespace

TEST_CASE("omega golden values") {
  CHECK(omega_push("10") == 2);
  CHECK(omega_push("110") == 3);
  CHECK(omega_push("1010") == 5);
  CHECK(omega_reduce("10") == 2);
  CHECK(omega_reduce("110") == 3);
  CHECK(omega_reduce("1010") == 5);
  CHECK(omega_push("") == 1);
  CHECK(omega_reduce("0011") == 1);
  CHECK(omega_push("0011") == 1);
}

TEST_CASE("omega by closure equals omega by reduction") {
  for (int len = 0; len <= 12; ++len)
    for (int mask = 0; mask < (1 << len); ++mask) {
      std::string b;
      for (int i = 0; i < len; ++i) b += (mask >> i & 1) ? '1' : '0';
      REQUIRE_MESSAGE(omega_push(b) == omega_reduce(b), b);
    }
}

TEST_CASE("omega splitting relation") {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 500; ++trial) {
    const int len = 2 + static_cast<int>(rng() % 9);
    std::string b;
    for (int i = 0; i < len; ++i) b += (rng() & 1) ? '1' : '0';
    const auto pos = b.find("10");
    if (pos == std::string::npos) continue;
    const std::string head = b.substr(0, pos), tail = b.substr(pos + 2);
    CHECK(omega_push(b) == omega_push(head + "1" + tail) + omega_push(head + "0" + tail));
  }
}

TEST_CASE("omega rejects non-binary input") {
  CHECK_THROWS_AS(omega_push("102"), InputError);
  CHECK_THROWS_AS(omega_reduce("1a"), InputError);
}

TEST_CASE("two species weights") {
  CHECK(two_species_weight(parse_config("0210")) == 3);
  CHECK(two_species_weight(parse_config("0211021")) == 6);
  CHECK_THROWS_AS(two_species_weight(parse_config("0110")), InputError);
  CHECK_THROWS_AS(two_species_weight(parse_config("2103")), InputError);
}

TEST_CASE("ancestors of 2103") {
  const auto stages = ancestor_stages(parse_config("2103"));
  REQUIRE(stages.size() == 3);
  CHECK(names(stages[0]) == std::vector<std::string>{"2013", "2103"});
  CHECK(names(stages.back()) == std::vector<std::string>{"0120", "0210", "2010", "2100"});
  for (const auto& a : stages.back()) CHECK(a.species() == 2);
  CHECK(names(ancestors(parse_config("2103"))) == names(stages.back()));
}

TEST_CASE("ancestors require a top-class particle") {
  CHECK_THROWS_AS(ancestors(parse_config("0110")), InputError);
  CHECK_THROWS_AS(ancestors(parse_config("0210", 3)), InputError);
}

TEST_CASE("recursive weights") {
  CHECK(weight_recursive(parse_config("0210")) == 3);
  CHECK(weight_recursive(parse_config("0211021")) == 6);
  CHECK(weight_recursive(parse_config("2103")) == 9);
  CHECK(weight_recursive(parse_config("0101")) == 1);
  CHECK(weight_recursive(parse_config("0000")) == 1);
}

TEST_CASE("recursion agrees with the two-species product formula") {
  AncestorWeigher weigher;
  for (int length = 2; length <= 7; ++length)
    for (const auto& sector : sectors_with_all_classes(length, 2))
      for (const auto& c : sector.configurations())
        REQUIRE_MESSAGE(weigher.weight(c) == two_species_weight(c), render(c));
}

TEST_CASE("recursive weight is rotation invariant") {
  AncestorWeigher weigher;
  for (const auto& c : Sector{6, {1, 1, 2}}.configurations())
    for (long k = 1; k < 6; ++k) CHECK(weight_recursive(rotate(c, k)) == weigher.weight(c));
}
