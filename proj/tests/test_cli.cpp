#include <doctest.h>

#include <cstdlib>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"

using namespace mtasep;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("weight by each method") {
  for (const std::string method : {"trace", "ancestors", "multiline"}) {
    const auto r = run({"weight", "--config", "2103", "--method", method, "--json"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j["result"]["weight"] == "9");
    CHECK(j["result"]["method"] == method);
  }
}

TEST_CASE("prob prints the unreduced and reduced forms") {
  const auto r = run({"prob", "--config", "2103"});
  CHECK(r.code == 0);
  CHECK(r.out.find("9/96") != std::string::npos);
  CHECK(r.out.find("3/32") != std::string::npos);
}

TEST_CASE("table csv") {
  const auto r = run({"table", "--l", "4", "--p", "1,1", "--csv"});
  CHECK(r.code == 0);
  CHECK(r.out.rfind("config,weight,probability\n0012,1,1/24\n", 0) == 0);
  CHECK(r.out.find("sum,24,1") != std::string::npos);
}

TEST_CASE("json is deterministic") {
  const std::vector<std::string> args{"oracle", "--l", "4", "--p", "1,1", "--compare", "--json"};
  CHECK(run(args).out == run(args).out);
  CHECK(nlohmann::json::parse(run(args).out)["result"]["pass"] == true);
}

TEST_CASE("verify") {
  CHECK(run({"verify", "--what", "quadratic", "--d", "6"}).code == 0);
  CHECK(run({"verify", "--what", "hats", "--n", "3", "--d", "6"}).code == 0);
  CHECK(run({"verify", "--what", "stationarity", "--n", "3", "--l", "5"}).code == 0);
  CHECK(run({"verify", "--what", "nothing"}).code == cli::kInputError);
}

TEST_CASE("sample") {
  const auto r = run({"sample", "--l", "4", "--p", "1,1", "--n", "100000", "--seed", "3", "--json"});
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["seed"] == 3);
  CHECK(j["result"]["rows"].size() == 12);
}

TEST_CASE("ancestors and ansatz") {
  const auto a = run({"ancestors", "--config", "2103", "--stages", "--json"});
  CHECK(a.code == 0);
  const auto j = nlohmann::json::parse(a.out);
  CHECK(j["result"]["ancestors"] == std::vector<std::string>{"0120", "0210", "2010", "2100"});
  CHECK(j["result"]["stages"][0] == std::vector<std::string>{"2013", "2103"});
  const auto x = nlohmann::json::parse(run({"ansatz", "--n", "3", "--json"}).out);
  CHECK(x["result"]["X"][3] == nlohmann::json::parse(R"([["A","A","E"]])"));
}

TEST_CASE("exit codes") {
  CHECK(run({"weight", "--config", "2x03"}).code == cli::kInputError);
  CHECK(run({"weight"}).code == cli::kInputError);
  CHECK(run({"bogus"}).code == cli::kInputError);
  CHECK(run({"weight", "--config", "2103", "--method", "magic"}).code == cli::kInputError);
  CHECK(run({"oracle", "--l", "8", "--p", "2,2,2", "--max-states", "10"}).code ==
        cli::kResourceBound);
  CHECK(run({"weight", "--config", "321000000", "--method", "multiline", "--max-states", "5"})
            .code == cli::kResourceBound);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("max-states from the environment") {
  ::setenv("MTASEP_MAX_STATES", "10", 1);
  CHECK(run({"oracle", "--l", "6", "--p", "2,2"}).code == cli::kResourceBound);
  CHECK(run({"oracle", "--l", "6", "--p", "2,2", "--max-states", "100"}).code == 0);
  ::setenv("MTASEP_MAX_STATES", "junk", 1);
  CHECK(run({"oracle", "--l", "4", "--p", "1,1"}).code == cli::kInputError);
  ::unsetenv("MTASEP_MAX_STATES");
}
