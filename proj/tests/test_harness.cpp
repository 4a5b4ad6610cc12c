#include "weaknet/harness/suites.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using namespace weaknet;
using namespace weaknet::harness;

namespace {

std::string small(const std::string& suite, const std::string& extra = "") {
  return "suite = " + suite + "\nseed = 11\ncount = 6\n" + extra;
}

std::string dump_all(const std::vector<Record>& rs) {
  std::string out;
  for (const auto& r : rs) out += r.body.dump() + "\n";
  return out;
}

std::filesystem::path scratch(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / "weaknet_harness_test";
  std::filesystem::create_directories(dir);
  return dir / name;
}

void put(const std::filesystem::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::string get(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(WEAKNET_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// A ccx instance whose terms spike without bound at one point of a spoke.
Json spiking_instance() {
  const Suite& s = find_suite("ccx-claim");
  auto inst = s.generate(load_config(s, small("ccx-claim", "length = 20\n"))).front();
  auto& fs = inst["fs"];
  for (std::size_t n = 0; n < fs.size(); ++n) fs[n]["table"]["S0.1"] = std::to_string(100 * (n + 1)) + "/1";
  return inst;
}

}  // namespace

TEST(Config, DefaultsAndOverrides) {
  const Suite& s = find_suite("base");
  auto cfg = load_config(s, "# comment\n  seed = 42  \nradii = 1/2, 1/3\n");
  EXPECT_EQ(cfg.seed(), 42u);
  EXPECT_EQ(cfg.integer("queries"), 500);
  ASSERT_EQ(cfg.rationals("radii").size(), 2u);
  EXPECT_EQ(cfg.rationals("radii")[1], make_rational(1, 3));
}

TEST(Config, RejectsBadInput) {
  const Suite& s = find_suite("density");
  EXPECT_THROW(load_config(s, "colour = 3\n"), ConfigError);
  EXPECT_THROW(load_config(s, "count = 3\ncount = 4\n"), ConfigError);
  EXPECT_THROW(load_config(s, "count = three\n"), ConfigError);
  EXPECT_THROW(load_config(s, "count = -1\n"), ConfigError);
  EXPECT_THROW(load_config(s, "max_dim = 5\n"), ConfigError);
  EXPECT_THROW(load_config(s, "just words\n"), ConfigError);
  EXPECT_THROW(load_config(s, "suite = slices\n"), ConfigError);
  EXPECT_THROW(load_config(find_suite("base"), "radii = 1/2, 0\n"), ConfigError);
  EXPECT_THROW(find_suite("nonsense"), ConfigError);
}

TEST(Config, KindAliases) {
  EXPECT_EQ(find_suite("compact-in-nbhd").name, "cover");
  EXPECT_EQ(find_suite("weakly-convergent-sequence").name, "ccx-claim");
}

TEST(Serialize, RoundTrips) {
  Rng rng(5);
  for (int i = 0; i < 50; ++i) {
    auto coords = rng.distinct_indices(3, 4);
    auto v = rng.vector_on(coords, 16, Rational(2));
    EXPECT_EQ(io::decode_vector(io::encode(v)), v);
    auto f = rng.functional(coords, 3, 8);
    EXPECT_EQ(io::encode(io::decode_functional(io::encode(f))), io::encode(f));
    auto X = random_space(rng);
    EXPECT_EQ(io::encode(io::decode_space(io::encode(X))), io::encode(X));
    auto g = random_function(rng, X, Rational(2));
    EXPECT_EQ(io::decode_function(io::encode(g)), g);
  }
  EXPECT_EQ(io::encode(make_rational(-3, 6)).get<std::string>(), "-1/2");
  EXPECT_EQ(io::decode_rational(Json("4")), Rational(4));
  EXPECT_THROW(io::decode_rational(Json("1/0")), SchemaError);
  EXPECT_THROW(io::decode_rational(Json(3)), SchemaError);
}

TEST(Harness, EverySuiteGeneratesAndPasses) {
  for (const auto& [name, s] : suites()) {
    std::string extra;
    if (name == "discreteness") extra = "max_dim = 1\nannuli = 1\nhalf_spaces = 1\ngrid_den = 8\n";
    const std::string text = name == "discreteness" ? "suite = discreteness\nseed = 11\n" + extra : small(name, extra);
    auto cfg = load_config(s, text);
    auto insts = s.generate(cfg);
    ASSERT_FALSE(insts.empty()) << name;
    for (const auto& r : run_suite(s, cfg, insts)) EXPECT_TRUE(r.pass) << name << ": " << r.body.dump();
  }
}

TEST(Harness, ReportsAreDeterministicAcrossThreadCounts) {
  const Suite& s = find_suite("cover");
  auto one = load_config(s, small("cover", "threads = 1\n"));
  auto four = load_config(s, small("cover", "threads = 4\n"));
  auto a = s.generate(one), b = s.generate(four);
  ASSERT_EQ(a, b);
  EXPECT_EQ(dump_all(run_suite(s, one, a)), dump_all(run_suite(s, four, b)));
}

TEST(Harness, SeedsChangeInstances) {
  const Suite& s = find_suite("density");
  EXPECT_NE(s.generate(load_config(s, small("density"))), s.generate(load_config(s, "seed = 12\ncount = 6\n")));
}

TEST(Harness, FailureRecordsReplay) {
  const Suite& s = find_suite("ccx-claim");
  auto cfg = load_config(s, small("ccx-claim", "length = 20\n"));
  auto rec = verify_instance(s, cfg, spiking_instance());
  ASSERT_FALSE(rec.pass);
  EXPECT_EQ(rec.body["verdict"], "fail");
  ASSERT_TRUE(rec.body.contains("instance"));
  ASSERT_TRUE(rec.body["margins"].contains("evidence"));
  auto again = verify_instance(s, cfg, rec.body["instance"]);
  EXPECT_EQ(again.body.dump(), rec.body.dump());
}

TEST(Harness, InstanceOfAnotherKindIsASchemaError) {
  const Suite& d = find_suite("density");
  auto inst = d.generate(load_config(d, small("density"))).front();
  const Suite& c = find_suite("cover");
  EXPECT_THROW(verify_instance(c, load_config(c, small("cover")), inst), SchemaError);
  inst.erase("eps");
  EXPECT_THROW(verify_instance(d, load_config(d, small("density")), inst), SchemaError);
}

TEST(Harness, EmptyCountIsEmpty) {
  const Suite& s = find_suite("slices");
  auto cfg = load_config(s, "count = 0\n");
  EXPECT_TRUE(s.generate(cfg).empty());
  EXPECT_TRUE(run_suite(s, cfg, {}).empty());
}

TEST(Cli, ExitCodesAndByteIdenticalReports) {
  const auto conf = scratch("c.conf"), insts = scratch("c.jsonl"), r1 = scratch("r1"), r2 = scratch("r2");
  put(conf, small("csstar-point", "threads = 2\n"));
  ASSERT_EQ(run_cli("gen csstar-point --config " + conf.string() + " --out " + insts.string()), 0);
  ASSERT_EQ(run_cli("verify csstar-point --config " + conf.string() + " --instances " + insts.string() + " --report " + r1.string()), 0);
  ASSERT_EQ(run_cli("verify csstar-point --config " + conf.string() + " --instances " + insts.string() + " --report " + r2.string()), 0);
  EXPECT_EQ(get(r1), get(r2));
  EXPECT_FALSE(get(r1).empty());
  EXPECT_TRUE(std::filesystem::exists(r1.string() + ".timings"));

  put(scratch("bad.conf"), "count = lots\n");
  EXPECT_EQ(run_cli("gen density --config " + scratch("bad.conf").string() + " --out " + scratch("x").string()), 2);
  put(scratch("garbage.jsonl"), "{not json\n");
  EXPECT_EQ(run_cli("verify csstar-point --config " + conf.string() + " --instances " + scratch("garbage.jsonl").string() +
                    " --report " + scratch("x").string()),
            2);
  EXPECT_EQ(run_cli("frobnicate"), 2);

  const auto cc = scratch("ccx.conf"), bad = scratch("spike.jsonl"), rep = scratch("spike.report");
  put(cc, small("ccx-claim", "length = 20\n"));
  put(bad, spiking_instance().dump() + "\n");
  EXPECT_EQ(run_cli("verify ccx-claim --config " + cc.string() + " --instances " + bad.string() + " --report " + rep.string()), 1);
  auto first = Json::parse(get(rep).substr(0, get(rep).find('\n')));
  EXPECT_EQ(first["verdict"], "fail");
  EXPECT_TRUE(first.contains("instance"));
}
