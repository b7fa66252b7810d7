#include <catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "f2aut/cli.hpp"

using namespace f2aut;
using report::Json;

namespace {

struct Result {
  int status;
  std::string out;
  std::string err;
};

Result call(std::vector<std::string> args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

Json json_of(std::vector<std::string> args) {
  args.push_back("--json");
  const Result r = call(args);
  INFO(r.err);
  REQUIRE(r.status != 1);
  return Json::parse(r.out);
}

std::string without_timing(Json j) {
  if (j.contains("stats")) j["stats"].erase("elapsed_ms");
  return j.dump();
}

}  // namespace

TEST_CASE("cli examples", "[cli]") {
  Json j = json_of({"positivity", "abAB"});
  CHECK(j["answer"] == false);
  CHECK(j["command"] == "positivity");

  const Result r = call({"bte", "aabAB", "a", "--json"});
  CHECK(r.status == 0);
  j = Json::parse(r.out);
  CHECK(j["answer"] == true);
  CHECK(parse_rational(j["bounds"]["min"].get<std::string>()) == ExactRational(1));
  CHECK(parse_rational(j["bounds"]["max"].get<std::string>()) == ExactRational(5));

  j = json_of({"fixgroup", "aa"});
  CHECK(j["answer"] == "no");
  CHECK(j["escaped_fixed_word"] == "a");
}

TEST_CASE("cli exit codes", "[cli]") {
  CHECK(call({"positivity", "ab"}).status == 0);
  CHECK(call({"fixgroup", "ab", "--delta-step-cap", "2"}).status == 2);
  CHECK(call({"positivity", "ax"}).status == 1);
  CHECK(call({"bte", "aA", "b"}).status == 1);
  CHECK(call({"positivity", "ab", "--frobnicate"}).status == 1);
  CHECK(call({"positivity"}).status == 1);
  CHECK(call({}).status == 1);
  CHECK(call({"positivity", "ab", "--workers", "0"}).status == 1);
  CHECK(call({"fixgroup", "a", "--verify", "2"}).status == 1);
  CHECK(call({"--help"}).status == 0);

  const Result bad = call({"positivity", "abx", "--json"});
  CHECK(bad.status == 1);
  CHECK(Json::parse(bad.out).contains("error"));
  CHECK(bad.err.find("index 2") != std::string::npos);
}

TEST_CASE("cli flags may come before the subcommand", "[cli]") {
  const Json j = json_of({"--max-chain-len", "2", "positivity", "abAB"});
  CHECK(j["stats"]["max_chain_len"] == 2);
}

TEST_CASE("cli json schema", "[cli]") {
  Json j = json_of({"positivity", "AB"});
  for (const char* key : {"command", "input", "answer", "witness", "stats"}) CHECK(j.contains(key));
  CHECK(j["stats"].contains("elapsed_ms"));
  CHECK(j["witness"]["chain"]["polarity"] == "C1");

  j = json_of({"bte", "a", "b"});
  CHECK(j["failing_condition"]["step"] == "s");
  CHECK(j["failing_condition"]["k"] == 2);
  CHECK(j["failing_condition"]["u_lengths"] == Json::array({3, 4}));
  CHECK_FALSE(j.contains("bounds"));

  j = json_of({"fixgroup", "ab", "--delta-step-cap", "2"});
  CHECK(j["answer"] == "inconclusive");
  CHECK(j.contains("truncated_at"));
  CHECK(j["stats"]["delta_step_cap"] == 2);
}

TEST_CASE("cli json values round-trip through the parsers", "[cli]") {
  Json j = json_of({"positivity", "aBab"});
  REQUIRE(j["answer"] == true);
  const Chain chain = parse_chain(j["witness"]["chain"]["steps"].get<std::string>());
  const Automorphism beta = parse_automorphism(j["witness"]["w1_map"].get<std::string>());
  const Word image = parse_word(j["witness"]["positive_image"].get<std::string>());
  CHECK(compose(beta, chain.automorphism()).apply_cyclic(CyclicWord(parse_word("aBab"))) == CyclicWord(image));
  CHECK(parse_word(j["input"]["word"].get<std::string>()).str() == "aBab");

  j = json_of({"fixgroup", "ab"});
  REQUIRE(j["answer"] == "yes");
  const Automorphism psi = parse_automorphism(j["witness"]["automorphism"].get<std::string>());
  CHECK(psi(parse_word("ab")).str() == "ab");
  for (const auto& g : j["input"]["generators"]) CHECK(parse_word(g.get<std::string>()).str() == g);

  j = json_of({"apply", "a -> ab; b -> b", "aab"});
  CHECK(j["answer"] == "ababb");
  CHECK(parse_automorphism(j["map"].get<std::string>()) == named(Named::sigma));
  CHECK(json_of({"apply", "sigma", "aab"})["answer"] == "ababb");
  CHECK(json_of({"apply", "st", "a"})["answer"] == "aba");
  CHECK(json_of({"apply", "id", "1"})["answer"] == "1");
}

TEST_CASE("cli enumerate", "[cli]") {
  const Json j = json_of({"enumerate", "2", "a", "--polarity", "C1"});
  REQUIRE(j["answer"].size() == 7);
  CHECK(j["answer"][4]["chain"]["steps"] == "st");
  CHECK(j["answer"][4]["images"][0] == "aab");
  CHECK(call({"enumerate", "21", "a"}).status == 1);
  CHECK(call({"enumerate", "2", "a", "--polarity", "C3"}).status == 1);
}

TEST_CASE("cli verify", "[cli]") {
  Json j = json_of({"positivity", "abAB", "--verify", "4"});
  CHECK(j["verify"]["oracle"] == "no_within_depth");
  CHECK(j["verify"]["abelian_obstruction"] == true);
  CHECK(j["verify"]["consistent"] == true);
  j = json_of({"bte", "aab", "BAA", "--verify", "3"});
  CHECK(j["verify"]["min"] == "1/1");
  CHECK(j["verify"]["within_bounds"] == true);
}

TEST_CASE("cli output does not depend on workers", "[cli]") {
  for (std::vector<std::string> args : std::vector<std::vector<std::string>>{
           {"positivity", "abAB"}, {"bte", "ab", "aB"}, {"fixgroup", "aa"}, {"fixgroup", "ab"}}) {
    const std::string one = without_timing(json_of(args));
    args.insert(args.end(), {"--workers", "4"});
    CHECK(without_timing(json_of(args)) == one);
  }
}

TEST_CASE("cli batch mode", "[cli]") {
  const std::string path = "cli_batch_test.txt";
  {
    std::ofstream f(path);
    f << "# comment\n\npositivity ab\napply \"a -> ab; b -> b\" a\nfixgroup ab --delta-step-cap 2\n";
  }
  Result r = call({"--batch", path});
  CHECK(r.status == 2);
  std::istringstream lines(r.out);
  std::vector<Json> rows;
  for (std::string line; std::getline(lines, line);) rows.push_back(Json::parse(line));
  REQUIRE(rows.size() == 3);
  CHECK(rows[0]["answer"] == true);
  CHECK(rows[1]["answer"] == "ab");
  CHECK(rows[2]["answer"] == "inconclusive");

  {
    std::ofstream f(path);
    f << "positivity ab\npositivity a$\nbogus\n";
  }
  r = call({"--batch", path});
  CHECK(r.status == 1);
  std::remove(path.c_str());
  CHECK(call({"--batch", "does-not-exist.txt"}).status == 1);
}

TEST_CASE("split_line", "[cli]") {
  CHECK(cli::detail::split_line("a  \"b c\" d") == std::vector<std::string>{"a", "b c", "d"});
  CHECK(cli::detail::split_line("x \"\"") == std::vector<std::string>{"x", ""});
}
