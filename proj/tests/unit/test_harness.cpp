#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "gmcwalk/harness.hpp"

using namespace gmcwalk;
using namespace gmcwalk::harness;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("gmcwalk_test_harness_" + name);
  std::filesystem::remove_all(dir);
  return dir;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = Config::parse(
      "top = 1\n"
      "# comment\n"
      "[alpha]\n"
      "x = 2.5   # trailing\n"
      "list = 1, 2,3\n"
      "\n"
      "[beta]\n"
      "name = walk\n");
  CHECK(c.has_section(""));
  CHECK(c.has_section("alpha"));
  CHECK_FALSE(c.has_section("gamma"));
  CHECK(c.section("alpha").at("x") == "2.5");
  ExperimentConfig e("alpha", 3, c.section("alpha"));
  CHECK(e.number("x") == 2.5);
  CHECK(e.integers("list") == std::vector<std::int64_t>{1, 2, 3});
  CHECK(e.number_or("absent", 7.0) == 7.0);
  CHECK(ExperimentConfig("beta", 3, c.section("beta")).text("name") == "walk");
  CHECK_THROWS_AS(Config::parse("[open\n"), ConfigError);
  CHECK_THROWS_AS(Config::parse("no equals sign\n"), ConfigError);
}

TEST_CASE("missing and malformed keys name the key") {
  ExperimentConfig e("demo", 1, {{"x", "abc"}});
  CHECK_THROWS_WITH_AS(e.number("y"), doctest::Contains("'y'"), ConfigError);
  CHECK_THROWS_WITH_AS(e.number("x"), doctest::Contains("'x'"), ConfigError);
  CHECK_THROWS_AS(e.integer("x"), ConfigError);
}

TEST_CASE("canonical text and hash ignore layout") {
  const auto a = Config::parse("[s]\nb = 2\na = 1\n");
  const auto b = Config::parse("# c\n[s]\na=1\n\nb =   2\n");
  CHECK(a.canonical() == b.canonical());
  CHECK(fnv1a(a.canonical()) == fnv1a(b.canonical()));
  CHECK(fnv1a("") == 0xcbf29ce484222325ULL);
  CHECK(fnv1a("a") == 0xaf63dc4c8601ec8cULL);
}

TEST_CASE("every experiment has a default section") {
  const auto c = Config::defaults();
  for (const auto& [name, fn] : registry()) CHECK_MESSAGE(c.has_section(name), name);
  CHECK(find_experiment("composition").has_value());
  CHECK(find_experiment("exp_composition").has_value());
  CHECK_FALSE(find_experiment("nope").has_value());
}

TEST_CASE("runs are byte-identical for a fixed seed") {
  const auto cfg = Config::defaults();
  for (const std::string exp : {"composition", "counterexample", "moment_scaling"}) {
    const auto d1 = scratch(exp + "_1");
    const auto d2 = scratch(exp + "_2");
    RunOptions o;
    o.experiment = exp;
    o.seed = 11;
    o.out_dir = d1;
    run(cfg, o);
    o.out_dir = d2;
    run(cfg, o);
    std::size_t files = 0;
    for (const auto& entry : std::filesystem::recursive_directory_iterator(d1)) {
      if (!entry.is_regular_file()) continue;
      const auto rel = std::filesystem::relative(entry.path(), d1);
      CHECK_MESSAGE(slurp(entry.path()) == slurp(d2 / rel), rel.string());
      ++files;
    }
    CHECK(files >= 3);
    std::filesystem::remove_all(d1);
    std::filesystem::remove_all(d2);
  }
}

TEST_CASE("seed changes Monte Carlo output") {
  const auto cfg = Config::defaults();
  RunOptions o;
  o.experiment = "moment_scaling";
  o.out_dir = scratch("seed_a");
  o.seed = 1;
  const auto a = run(cfg, o);
  o.out_dir = scratch("seed_b");
  o.seed = 2;
  const auto b = run(cfg, o);
  CHECK(summary_json(a.results, a.config_hash) != summary_json(b.results, b.config_hash));
}

TEST_CASE("parallel_for covers every index once") {
  for (int threads : {1, 3}) {
    std::vector<int> hits(101, 0);
    parallel_for(hits.size(), threads, [&](std::size_t i) { hits[i] += 1; });
    for (int h : hits) CHECK(h == 1);
  }
}

TEST_CASE("csv uses round-trip precision") {
  const auto dir = scratch("csv");
  std::filesystem::create_directories(dir);
  write_csv({"t", {"a", "b"}, {{0.1, 1.0 / 3.0}}}, dir / "t.csv");
  std::istringstream in(slurp(dir / "t.csv"));
  std::string header, row;
  std::getline(in, header);
  std::getline(in, row);
  CHECK(header == "a,b");
  const auto comma = row.find(',');
  CHECK(std::stod(row.substr(0, comma)) == 0.1);
  CHECK(std::stod(row.substr(comma + 1)) == 1.0 / 3.0);
  std::filesystem::remove_all(dir);
}
