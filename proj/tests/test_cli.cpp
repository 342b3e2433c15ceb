#include <cstdio>
#include <fstream>
#include <sstream>

#include <doctest.h>

#include "lampwalk/cli.hpp"
#include "lampwalk/error.hpp"
#include "lampwalk/sampling.hpp"

using namespace lampwalk;
using namespace lampwalk::cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) v.push_back(l);
  return v;
}

Record last_record(const std::string& text) { return parse_record(lines(text).back()); }

}  // namespace

TEST_CASE("records round-trip") {
  Record r("walk");
  r.add("config_hash", "00ff").add("seed", std::int64_t{42}).add("speed", 0.1).add("distance", 7);
  r.add("direction", "a\"b\\c");
  r.add("stable_prefix", "");
  const std::string line = serialize(r);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(line.rfind("{\"kind\":\"walk\",\"version\":\"1.0.0\"", 0) == 0);
  const Record back = parse_record(line);
  CHECK(back == r);
  CHECK(serialize(back) == line);
}

TEST_CASE("doubles keep every bit") {
  TestRng rng(67);
  std::uniform_real_distribution<double> uni(-1e6, 1e6);
  for (int i = 0; i < 2000; ++i) {
    const double x = i % 3 ? uni(rng) : std::ldexp(uni(rng), -40);
    Record r("aggregate");
    r.add("speed_mean", x);
    const Record back = parse_record(serialize(r));
    REQUIRE(std::get<double>(back.at("speed_mean")) == x);
  }
  CHECK(format_double(2.0) == "2.0");
  CHECK(format_double(1e300).find('e') != std::string::npos);
}

TEST_CASE("schemas are enforced") {
  CHECK_THROWS_AS(Record("nonsense"), InvalidInput);
  Record r("metric");
  CHECK_THROWS_AS(r.add("speed", 1.0), InvalidInput);
  r.add("distance", "3");
  CHECK_THROWS_AS(r.add("distance", "4"), InvalidInput);
  CHECK_THROWS_AS(parse_record("{\"kind\":\"metric\",\"version\":\"1.0.0\",\"extra\":1}"), InvalidInput);
  CHECK_THROWS_AS(parse_record("{\"version\":\"1.0.0\",\"kind\":\"metric\"}"), InvalidInput);
  CHECK_THROWS_AS(parse_record("not json"), InvalidInput);
  for (auto kind : {"config", "walk", "aggregate", "metric", "equivariance", "check"}) {
    const auto& keys = record_schema(kind);
    REQUIRE(keys.size() >= 2);
    CHECK(keys[0] == "kind");
    CHECK(keys[1] == "version");
  }
}

TEST_CASE("config parsing and validation") {
  ExperimentConfig cfg;
  apply_config_json(cfg, R"js({"family":"lattice","rank":3,"measure":"drift(1/3,0,0)","steps":500,"seed":9})js");
  CHECK(cfg.group == GroupSpec::lattice(3));
  CHECK(cfg.steps == 500);
  validate(cfg);
  CHECK(config_drift(cfg) == std::vector<Rational>{Rational(1, 3), Rational(0), Rational(0)});
  CHECK(cfg.partition_scheme() == PartitionScheme::Hyperplane);
  CHECK_THROWS_AS(apply_config_json(cfg, R"js({"colour":"red"})js"), InvalidInput);
  CHECK_THROWS_AS(apply_config_json(cfg, R"js({"steps":"many"})js"), InvalidInput);

  ExperimentConfig big;
  big.steps = kMaxSteps + 1;
  CHECK_THROWS_AS(validate(big), CapExceeded);
  ExperimentConfig deep;
  deep.depth = kMaxDepth + 1;
  CHECK_THROWS_AS(validate(deep), CapExceeded);
  ExperimentConfig bad_c;
  bad_c.c = Rational(-1);
  CHECK_THROWS_AS(validate(bad_c), InvalidInput);

  ExperimentConfig atoms;
  atoms.measure = "atoms({e}@a:1/2;{}@A:1/2)";
  const auto mu = build_measure(atoms);
  CHECK(mu.atoms().size() == 2);
  atoms.measure = "atoms({e}@a:1/2;{}@A:1/3)";
  CHECK_THROWS_AS(build_measure(atoms), InvalidInput);

  const GroupSpec f2 = GroupSpec::free(2);
  const auto g = parse_lamp_element(f2, 3, "{e a=2}@ab");
  CHECK(g.pos == parse_element(f2, "ab"));
  CHECK(g.config.at(parse_element(f2, "a")) == 2);
  CHECK(g.config.at(BaseElement()) == 1);
  CHECK(parse_lamps(GroupSpec::lattice(2), 2, "(1,0) (0,-1)").size() == 2);
}

TEST_CASE("config hash tracks the configuration") {
  ExperimentConfig a, b;
  CHECK(config_hash(a) == config_hash(b));
  b.seed = 1;
  CHECK(config_hash(a) != config_hash(b));
  CHECK(hex_hash(config_hash(a)).size() == 16);
}

TEST_CASE("metric command") {
  auto r = run({"metric", "--lamps", "e", "--pos", "e"});
  REQUIRE(r.code == kOk);
  CHECK(std::get<std::string>(last_record(r.out).at("distance")) == "1");
  r = run({"metric", "--lamps", "a", "--pos", "e", "--bfs"});
  REQUIRE(r.code == kOk);
  auto rec = last_record(r.out);
  CHECK(std::get<std::string>(rec.at("distance")) == "3");
  CHECK(std::get<bool>(rec.at("bfs_agrees")));
  r = run({"metric", "--lamps", "", "--pos", "aba"});
  CHECK(std::get<std::string>(last_record(r.out).at("distance")) == "3");
  r = run({"metric", "--lamps", "e", "--pos", "e", "--c", "5/2"});
  CHECK(std::get<std::string>(last_record(r.out).at("distance")) == "5/2");
  CHECK(run({"metric", "--pos", "xyz"}).code == kInvalidInput);
  CHECK(run({"metric", "--pos", "aaaaaaaaa", "--bfs"}).code == kCapExceeded);
}

TEST_CASE("simulate command") {
  const std::vector<std::string> args{"simulate", "--steps", "2000", "--walks", "6", "--seed", "42", "--measure",
                                      "srw+lamp", "--depth", "2"};
  auto with_threads = [&](const char* t) {
    auto a = args;
    a.push_back("--threads");
    a.push_back(t);
    return run(a);
  };
  const auto one = with_threads("1");
  REQUIRE(one.code == kOk);
  const auto many = with_threads("4");
  CHECK(one.out == many.out);
  CHECK(with_threads("1").out == one.out);
  const auto ls = lines(one.out);
  REQUIRE(ls.size() == 8);
  CHECK(parse_record(ls.front()).kind() == "config");
  for (std::size_t i = 1; i <= 6; ++i) CHECK(parse_record(ls[i]).kind() == "walk");
  const auto agg = parse_record(ls.back());
  CHECK(agg.kind() == "aggregate");
  for (const auto& l : ls) CHECK(serialize(parse_record(l)) == l);
  CHECK(std::get<std::string>(agg.at("config_hash")) == std::get<std::string>(parse_record(ls.front()).at("config_hash")));

  CHECK(run({"simulate", "--steps", "0"}).code == kInvalidInput);
  CHECK(run({"simulate", "--steps", "99999999"}).code == kCapExceeded);
  CHECK(run({"simulate", "--measure", "bogus"}).code == kInvalidInput);
  CHECK(run({"simulate", "--bogus-flag"}).code == kInvalidInput);
}

TEST_CASE("simulate reads a config file and flags override it") {
  const std::string path = "lampwalk_test_config.json";
  {
    std::ofstream f(path);
    f << R"js({"family":"lattice","rank":3,"measure":"drift+lamp(1/4,0,0)","steps":300,"walks":2,"seed":5})js";
  }
  const auto a = run({"simulate", "--config", path, "--threads", "1"});
  REQUIRE(a.code == kOk);
  const auto cfg = parse_record(lines(a.out).front());
  CHECK(std::get<std::int64_t>(cfg.at("steps")) == 300);
  CHECK(std::get<std::string>(cfg.at("family")) == "lattice");
  const auto b = run({"simulate", "--config", path, "--steps", "400", "--threads", "1"});
  CHECK(std::get<std::int64_t>(parse_record(lines(b.out).front()).at("steps")) == 400);
  std::remove(path.c_str());
  CHECK(run({"simulate", "--config", "/nonexistent/x.json"}).code == kInvalidInput);
}

TEST_CASE("strip command") {
  const auto r = run({"strip", "--u", "a.a", "--v", "A.A", "--n-max", "10", "--trials", "5", "--threads", "1"});
  REQUIRE(r.code == kOk);
  const auto ls = lines(r.out);
  REQUIRE(ls.size() >= 12);
  CHECK(ls[0] == "n,count_base,count_G,log_count_G_over_n");
  for (int n = 0; n <= 10; ++n) {
    const auto& row = ls[static_cast<std::size_t>(n) + 1];
    const std::string prefix = std::to_string(n) + "," + std::to_string(2 * n + 1) + ",";
    CHECK(row.rfind(prefix, 0) == 0);
  }
  const auto eq = parse_record(ls.back());
  CHECK(eq.kind() == "equivariance");
  CHECK(std::get<std::int64_t>(eq.at("strip_mismatches")) == 0);
  CHECK(std::get<std::int64_t>(eq.at("count_violations")) == 0);

  const auto lat = run({"strip", "--family", "lattice", "--rank", "3", "--measure", "drift(1/3,0,0)", "--n-max", "3",
                        "--trials", "2", "--threads", "1"});
  REQUIRE(lat.code == kOk);
  const auto ll = lines(lat.out);
  for (int n = 0; n <= 3; ++n) {
    const std::int64_t size = GroupSpec::lattice(3).ball_size(n);
    CHECK(ll[static_cast<std::size_t>(n) + 1].rfind(std::to_string(n) + "," + std::to_string(size) + ",", 0) == 0);
  }
  CHECK(run({"strip", "--u", "a.a", "--v", "a.a"}).code == kInvalidInput);
}

TEST_CASE("verify command") {
  const auto r = run({"verify", "--threads", "1"});
  CHECK(r.code == kOk);
  for (const auto& l : lines(r.out)) {
    const auto rec = parse_record(l);
    if (rec.kind() == "check") CHECK_MESSAGE(std::get<bool>(rec.at("ok")), l);
  }
}

TEST_CASE("help and unknown commands") {
  CHECK(run({"--help"}).code == kOk);
  CHECK(run({"frobnicate"}).code == kInvalidInput);
  CHECK(run({}).code == kInvalidInput);
}
