#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ltk/cli.hpp"
#include "ltk/json_io.hpp"

using namespace ltk;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "ltk");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string temp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("ltk_cli_" + name)).string();
}

void write(const std::string& path, const std::string& text) {
  std::ofstream(path, std::ios::binary) << text;
}

}  // namespace

TEST_CASE("theorem exit codes") {
  auto r = run({"theorem", "[T]p1 -> p1", "--quiet"});
  CHECK(r.code == 0);
  CHECK(r.out.empty());
  CHECK(run({"theorem", "p1 -> [T]p1", "--quiet"}).code == 1);
  r = run({"theorem", "p1 -> [E]p1", "--format", "json"});
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j.at("verdict") == "not-theorem");
  CHECK(j.contains("countermodel"));
  CHECK(j.contains("witness"));
}

TEST_CASE("admissible") {
  CHECK(run({"admissible", "x1 / x1", "-q"}).code == 0);
  auto r = run({"admissible", "x1 | ~x1 / x1", "--format", "json"});
  CHECK(r.code == 1);
  const json j = json::parse(r.out);
  CHECK(j.at("verdict") == "not-admissible");
  CHECK(j.at("theta_count") == 1024);
}

TEST_CASE("nf json") {
  auto r = run({"nf", "x1 / x1", "--format", "json"});
  REQUIRE(r.code == 0);
  const json j = json::parse(r.out);
  CHECK(j.at("m") == 1);
  CHECK(j.at("count") == 8);
  CHECK(j.at("thetas").size() == 8);
  r = run({"nf", "x1 / x1", "--format", "json", "--max-thetas", "4"});
  CHECK_FALSE(json::parse(r.out).contains("thetas"));
}

TEST_CASE("witness round trip") {
  for (std::string rule : {"x1 | ~x1 / x1", "<E>x1 / x1", "[T]x1 -> x1 / x1 | [T]~x1"}) {
    auto r = run({"admissible", rule, "--format", "json"});
    REQUIRE(r.code == 1);
    const std::string path = temp_path("witness.json");
    write(path, r.out);
    CHECK_MESSAGE(run({"check-witness", rule, path}).code == 0, rule);
    CHECK_MESSAGE(run({"check-witness", rule, "@" + path, "--cond5", "frame"}).code != 2, rule);

    // flip the failing world's label to some other theta
    json j = json::parse(r.out).at("witness");
    const std::string fw = std::to_string(j.at("failing_world").get<WorldId>());
    j["labeling"][fw] = 0;
    write(path, j.dump());
    CHECK_MESSAGE(run({"check-witness", rule, path}).code == 1, rule);
    std::remove(path.c_str());
  }
}

TEST_CASE("jobs do not change output") {
  for (std::string rule : {"<E>x1 / x1", "<A1>x1 & <A1>~x1 / [E]x1", "x1 -> [T]x2 / x2"}) {
    const auto a = run({"admissible", rule, "--format", "json", "--jobs", "1"});
    const auto b = run({"admissible", rule, "--format", "json", "--jobs", "4"});
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("bounds overrides") {
  const json j = json::parse(run({"admissible", "<E>x1 / x1", "--format", "json", "--max-d", "0",
                                  "--max-cluster", "1", "--max-tail", "2"})
                                 .out);
  CHECK(j.at("bounds").at("max_d") == 0);
  CHECK(j.at("bounds").at("max_cluster_size") == 1);
  CHECK(j.at("bounds").at("max_tail_len") == 2);
  CHECK(run({"admissible", "x1 / x1", "--max-tail", "1"}).code == 2);
}

TEST_CASE("charmodel and mc") {
  const std::string path = temp_path("cm.json");
  auto r = run({"charmodel", "build", "--vars", "1", "--max-cluster", "2", "--depth", "3", "--out", path,
                "--format", "json"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out).at("layer_counts") == json::array({8, 56, 448}));
  CHECK(run({"mc", path, "[T]p1 -> p1", "-q"}).code == 0);
  r = run({"mc", path, "[T]p1", "--world", "0", "--format", "json"});
  CHECK(r.code != 2);
  const json j = json::parse(r.out);
  CHECK(j.at("holds_at").size() + j.at("refuted_at").size() == 896);
  CHECK(run({"mc", path, "p2"}).code == 2);
  std::remove(path.c_str());
}

TEST_CASE("oracle commands") {
  CHECK(run({"oracle", "refute", "p1 -> [T]p1", "-q"}).code == 1);
  CHECK(run({"oracle", "refute", "[T]p1 -> p1", "-q"}).code == 0);
  CHECK(run({"oracle", "admissible", "x1 | ~x1 / x1", "-q"}).code == 1);
  CHECK(run({"oracle", "equivalid", "--random", "5", "--seed", "7", "-q"}).code == 0);
  CHECK(run({"oracle", "equivalid", "x1 / [E]x1", "-q"}).code == 0);
}

TEST_CASE("errors") {
  auto r = run({"admissible", "x1 /"});
  CHECK(r.code == 2);
  CHECK(r.err.rfind("error: ", 0) == 0);
  CHECK(run({}).code == 2);
  CHECK(run({"nope"}).code == 2);
  CHECK(run({"mc", "/nonexistent.json", "p1"}).code == 2);
  CHECK(run({"theorem", "[A2]p1"}).code == 2);
  CHECK(run({"theorem", "[A2]p1", "--agents", "2", "-q"}).code == 1);
}
