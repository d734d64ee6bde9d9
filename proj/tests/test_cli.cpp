#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "hecke/cli/cli.hpp"
#include "hecke/eigen/eigen.hpp"
#include "hecke/error.hpp"
#include "hecke/exact/poly.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code;
  std::vector<json> records;
  std::string text, err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  Result r;
  r.code = hecke::cli::run(args, out, err);
  r.text = out.str();
  r.err = err.str();
  std::istringstream in(r.text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] == '{') r.records.push_back(json::parse(line));
  return r;
}

std::string temp_path(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

}  // namespace

TEST_CASE("decompose") {
  auto r = run({"decompose", "--level", "1", "--p", "2"});
  CHECK(r.code == 0);
  REQUIRE(r.records.size() == 3);
  for (const auto& c : r.records) {
    CHECK(c["kind"] == "coset");
    CHECK(c["coeff"] == "1");
  }
  r = run({"decompose", "--level", "1", "--p", "2", "--m", "2"});
  CHECK(r.code == 0);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0]["matrix"] == json::parse(R"([["2","0"],["0","2"]])"));
  // T_p^(1) for n = 3 has p^2 + p + 1 cosets
  CHECK(run({"decompose", "--p", "3", "--n", "3"}).records.size() == 13);
  CHECK(run({"decompose", "--level", "3", "--p", "2", "--group", "gamma1"}).records.size() == 3);
  CHECK(run({"decompose", "--delta", "1,0,0,6"}).records.size() == 12);
}

TEST_CASE("errors are structured records with exit codes") {
  auto r = run({"decompose", "--level", "4", "--p", "2"});
  CHECK(r.code == 3);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0] == json{{"kind", "error"}, {"code", 3}, {"message", "determinant not prime to level"}});
  CHECK(r.err.find("determinant not prime to level") != std::string::npos);

  CHECK(run({"decompose", "--level", "0", "--p", "2"}).code == 2);
  CHECK(run({"decompose", "--p", "two"}).code == 2);
  CHECK(run({"no-such-command"}).code == 2);
  CHECK(run({"decompose"}).code == 2);
  CHECK(run({"hecke-matrix", "--module", "sym:x", "--p", "2"}).code == 2);
  CHECK(run({"hecke-matrix", "--module", "sym:2:0:F6", "--p", "2"}).code == 2);
  CHECK(run({"eigensystems", "--labels", "X2"}).code == 2);
  CHECK(run({"hecke-matrix", "--level", "3", "--p", "3"}).code == 3);
  CHECK(run({"--help"}).code == 0);
  const auto e = run({"decompose", "--n", "4", "--p", "2"});
  CHECK(e.code == 2);
  CHECK(e.records.at(0)["code"] == 2);
}

TEST_CASE("hecke-matrix example") {
  const auto r = run({"hecke-matrix", "--level", "1", "--module", "sym:10:0:Q", "--p", "2"});
  REQUIRE(r.code == 0);
  REQUIRE(r.records.size() == 1);
  const json& m = r.records[0];
  CHECK(m["kind"] == "hecke-matrix");
  CHECK(m["dim"] == 3);
  // rebuild the polynomial from the record and divide by (x + 24)^2
  const auto H = hecke::cohom::HeckeMatrix::from_json(m);
  const auto Q = hecke::exact::Ring::rationals();
  const auto f = hecke::exact::Poly::from_ints(Q, {24, 1});
  CHECK((hecke::exact::char_poly(H.matrix) % (f * f)).is_zero());
  CHECK(m["char_poly"] == hecke::exact::char_poly(H.matrix).to_string());
}

TEST_CASE("eigensystems") {
  auto r = run({"eigensystems", "--level", "1", "--module", "sym:0"});
  CHECK(r.code == 0);
  REQUIRE(r.records.size() == 1);
  CHECK(r.records[0]["dim"] == 0);
  CHECK(r.records[0]["systems"].empty());
  r = run({"eigensystems", "--level", "11", "--labels", "2,3"});
  CHECK(r.code == 0);
  CHECK(r.records[0]["dim"] == 3);
  CHECK(r.records[0]["systems"].size() == 2);
}

TEST_CASE("reduce flagship") {
  const std::vector<std::string> args = {"reduce", "--ell", "5", "--source-level", "5", "--module", "sym:10:0:F5", "--labels", "2,3,7"};
  const auto r = run(args);
  CHECK(r.code == 0);
  REQUIRE(r.records.size() == 5);
  for (size_t i = 0; i < 4; ++i) {
    CHECK(r.records[i]["kind"] == "reduction-certificate");
    CHECK(r.records[i]["verified"] == true);
    CHECK(hecke::eigen::verify_certificate(r.records[i]));
  }
  CHECK(r.records[4]["kind"] == "reduce-summary");
  CHECK(r.records[4]["witnessed"] == 4);
  // byte-identical output, also with more threads and another seed
  CHECK(run(args).text == r.text);
  auto more = args;
  more.insert(more.end(), {"--jobs", "2", "--seed", "99"});
  CHECK(run(more).text == r.text);
  CHECK(run({"reduce", "--ell", "5", "--source-level", "5", "--module", "sym:10:0:Q"}).code == 2);
}

TEST_CASE("check commands") {
  auto r = run({"degree-check"});
  CHECK(r.code == 0);
  CHECK(r.records.size() == 20);
  r = run({"series-check"});
  CHECK(r.code == 0);
  CHECK(r.records.size() == 4);
  r = run({"rep-check"});
  CHECK(r.code == 0);
  CHECK(r.records.size() == 3);
  for (const auto& x : r.records) CHECK(x["pass"] == true);
}

TEST_CASE("config files") {
  const std::string path = temp_path("hecke_cli_config.json");
  {
    std::ofstream f(path);
    f << json{{"command", "decompose"}, {"level", 1}, {"p", 3}}.dump();
  }
  auto r = run({"--config", path});
  CHECK(r.code == 0);
  CHECK(r.records.size() == 4);
  // flags override the file
  r = run({"--config", path, "decompose", "--p", "2"});
  CHECK(r.records.size() == 3);
  {
    std::ofstream f(path);
    f << json{{"command", "decompose"}, {"p", 3}, {"colour", "red"}}.dump();
  }
  r = run({"--config", path});
  CHECK(r.code == 2);
  CHECK(r.records.at(0)["message"].get<std::string>().find("colour") != std::string::npos);
  {
    std::ofstream f(path);
    f << "{not json";
  }
  CHECK(run({"--config", path}).code == 2);
  {
    std::ofstream f(path);
    f << json{{"command", "eigensystems"}, {"level", 11}, {"labels", {2, "T3"}}}.dump();
  }
  r = run({"--config", path});
  CHECK(r.code == 0);
  CHECK(r.records.at(0)["labels"] == json{"T2", "T3"});
  std::filesystem::remove(path);
}

TEST_CASE("output file") {
  const std::string path = temp_path("hecke_cli_out.jsonl");
  const auto r = run({"--output", path, "decompose", "--p", "2"});
  CHECK(r.code == 0);
  CHECK(r.text.empty());
  std::ifstream in(path);
  std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(all == run({"decompose", "--p", "2"}).text);
  std::filesystem::remove(path);
}

TEST_CASE("schema validator") {
  using hecke::cli::validate;
  const json s = json::parse(R"({"type":"object","required":["a"],"additionalProperties":false,
    "properties":{"a":{"type":"integer","minimum":1,"maximum":3},"b":{"type":"array","items":{"type":"string"},"maxItems":2},
    "c":{"type":["string","object"]},"d":{"enum":["x","y"]}}})");
  CHECK_NOTHROW(validate(json{{"a", 2}, {"b", {"p"}}, {"c", json::object()}, {"d", "y"}}, s));
  CHECK_THROWS_AS(validate(json{{"b", json::array()}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 4}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 0}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1.5}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1}, {"b", {"p", "q", "r"}}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1}, {"b", {1}}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1}, {"c", 3}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1}, {"d", "z"}}, s), hecke::ValidationError);
  CHECK_THROWS_AS(validate(json{{"a", 1}, {"e", 1}}, s), hecke::ValidationError);
  CHECK(hecke::cli::config_schema()["title"] == "JobConfig");
}

TEST_CASE("seed from the environment") {
  CHECK(hecke::cli::effective_seed(5) == 5);
  setenv("HECKE_ENGINE_SEED", "17", 1);
  CHECK(hecke::cli::effective_seed(5) == 17);
  // results do not depend on it
  const auto r = run({"rep-check"});
  CHECK(r.code == 0);
  setenv("HECKE_ENGINE_SEED", "oops", 1);
  CHECK_THROWS_AS(hecke::cli::effective_seed(5), hecke::ValidationError);
  CHECK(run({"rep-check"}).code == 2);
  unsetenv("HECKE_ENGINE_SEED");
  CHECK(run({"rep-check"}).text == r.text);
}

TEST_CASE("selftest") {
  const auto r = run({"selftest"});
  CHECK(r.code == 0);
  CHECK(r.text.find("FAIL") == std::string::npos);
  CHECK(r.text.find("selftest: 12/12 passed") != std::string::npos);
}
