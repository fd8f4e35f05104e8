#include <doctest.h>

#include "mtasep/error.hpp"
#include "mtasep/oracle.hpp"
#include "mtasep/tensor.hpp"

using namespace mtasep;

TEST_CASE("generator columns sum to zero") {
  const auto gen = build_generator(Sector{5, {1, 2}});
  CHECK(gen.size() == 30);
  for (const auto& col : gen.columns) {
    long sum = 0;
    for (auto [row, rate] : col) sum += rate;
    CHECK(sum == 0);
  }
}

TEST_CASE("stationary vector of (4, (1,1))") {
  const auto gen = build_generator(Sector{4, {1, 1}});
  const auto p = stationary(gen);
  CHECK_FALSE(p.frozen);
  CHECK(is_balanced(gen, p));
  CHECK(p.at(parse_config("0210")) == Rational(1, 8));
  CHECK(p.at(parse_config("0012")) == Rational(1, 24));
  CHECK_THROWS_AS(p.at(parse_config("0110")), InputError);
}

TEST_CASE("single-species sectors are uniform") {
  const auto gen = build_generator(Sector{6, {3}});
  const auto p = stationary(gen);
  for (const auto& x : p.probabilities) CHECK(x == Rational(1, 20));
}

TEST_CASE("frozen sectors") {
  const auto full = stationary(build_generator(Sector{3, {3}}));
  CHECK(full.frozen);
  CHECK(full.probabilities == std::vector<Rational>{Rational(1)});
  const auto one = stationary(build_generator(Sector{1, {1}}));
  CHECK(one.frozen);
}

TEST_CASE("oracle bound") {
  CHECK_THROWS_AS(build_generator(Sector{8, {2, 2, 2}}, 1000), BoundExceeded);
}

TEST_CASE("four-way comparison") {
  for (const Sector& s : {Sector{4, {1, 1}}, Sector{7, {3, 2}}, Sector{5, {1, 1, 1}},
                          Sector{4, {1, 0, 1}}, Sector{5, {0, 2}}, Sector{6, {1, 1, 1, 1}}}) {
    const auto rep = compare_all(s);
    INFO(rep.first_mismatch.value_or(""));
    CHECK(rep.pass());
    CHECK(rep.rows.size() == static_cast<std::size_t>(s.size().get_ui()));
  }
}

TEST_CASE("comparison json") {
  const auto j = compare_all(Sector{3, {1, 1}}).to_json();
  CHECK(j["pass"] == true);
  CHECK(j["states"] == 6);
  CHECK(j["rows"][0]["tensor_weight"].is_string());
}

TEST_CASE("multiline is skipped above its bound") {
  const auto rep = compare_all(Sector{5, {1, 1, 1}}, {kDefaultMaxStates, 1});
  CHECK(rep.pass());
  CHECK_FALSE(rep.rows.front().multiline_weight.has_value());
}
