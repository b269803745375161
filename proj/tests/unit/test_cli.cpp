#include <sys/wait.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>
#include <json.hpp>

#include "commands.hpp"
#include "job_config.hpp"
#include "output.hpp"

namespace solsurf::cli {
namespace {

namespace fs = std::filesystem;

struct RunResult {
  int code;
  std::string out;
  std::string err;
};

RunResult run_cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"solsurf"};
  argv.insert(argv.end(), args.begin(), args.end());
  std::ostringstream out, err;
  const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("solsurf_test_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), {}};
}

TEST(JobConfig, Parsers) {
  const GridSpec g = parse_grid("30x12");
  EXPECT_EQ(g.m, 30);
  EXPECT_EQ(g.n, 12);
  EXPECT_THROW(parse_grid("30"), ConfigError);
  EXPECT_THROW(parse_grid("0x5"), ConfigError);
  const auto r = parse_range("-pi/2,1");
  EXPECT_DOUBLE_EQ(r.first, -std::acos(0.0));
  EXPECT_EQ(r.second, 1.0);
  EXPECT_EQ(parse_range("0:2").second, 2.0);
  EXPECT_DOUBLE_EQ(parse_number("pi/3"), std::acos(0.5));
  EXPECT_THROW(parse_number("v+1"), ConfigError);
  EXPECT_EQ(parse_family("cylinder"), Family::kCylinder);
  EXPECT_THROW(parse_family("torus"), ConfigError);
}

TEST(JobConfig, JsonRoundTripIsIdempotent) {
  JobConfig c;
  c.family = Family::kGeneral;
  c.theta = 0.9;
  c.psi0 = 0.2;
  c.zeta = "0.5*v";
  c.grid = {20, 10};
  c.u_range = {{-0.2, 0.8}};
  c.sign = -1;
  c.format = Format::kCsv;
  const nlohmann::json j = c.to_json();
  const JobConfig back = JobConfig::from_json(j);
  EXPECT_EQ(back.to_json(), j);
  EXPECT_EQ(JobConfig::from_json(JobConfig().to_json()).to_json(), JobConfig().to_json());
}

TEST(JobConfig, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(JobConfig::from_json({{"famliy", "leaf"}}), ConfigError);
  EXPECT_THROW(JobConfig::from_json({{"grid", 7}}), ConfigError);
  JobConfig c;
  c.family = Family::kGeneral;
  c.theta = 2.0;
  EXPECT_THROW(c.validate(), ConfigError);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run_cli({"verify", "--family", "prop24", "--grid", "10x10", "--out", "-"}).code,
            kExitPass);
  EXPECT_EQ(run_cli({"verify", "--family", "prop24", "--grid", "10x10", "--perturb-z", "0.01",
                     "--out", "-"})
                .code,
            kExitFail);
  EXPECT_EQ(run_cli({"verify", "--family", "torus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"verify", "--grid", "ten"}).code, kExitUsage);
  EXPECT_EQ(run_cli({}).code, kExitUsage);
  EXPECT_EQ(run_cli({"generate", "--bogus"}).code, kExitUsage);
  EXPECT_EQ(run_cli({"--help"}).code, kExitPass);
  // A regular file where a directory is expected cannot be written through.
  const fs::path dir = scratch("io");
  std::ofstream(dir / "file") << "x";
  const std::string blocked = (dir / "file" / "x.obj").string();
  EXPECT_EQ(run_cli({"generate", "--family", "leaf", "--grid", "4x4", "--out", blocked.c_str()})
                .code,
            kExitIo);
  fs::remove_all(dir);
}

TEST(Cli, PerturbationFailsConstantAngle) {
  const RunResult r = run_cli({"verify", "--family", "prop24", "--grid", "20x20", "--perturb-z",
                               "0.01", "--out", "-"});
  EXPECT_NE(r.out.find("check constant_angle"), std::string::npos);
  std::smatch m;
  ASSERT_TRUE(std::regex_search(r.out, m, std::regex("check constant_angle max=(\\S+) .* FAIL")));
  EXPECT_GT(std::stod(m[1]), 1e-3);
  EXPECT_NE(r.out.find("result FAIL"), std::string::npos);
}

TEST(Cli, GenerateIsDeterministicAndWellFormed) {
  const fs::path dir = scratch("gen");
  const std::string a = (dir / "a.obj").string(), b = (dir / "b.obj").string();
  ASSERT_EQ(run_cli({"generate", "--family", "general", "--grid", "12x9", "--out", a.c_str()}).code,
            kExitPass);
  ASSERT_EQ(run_cli({"generate", "--family", "general", "--grid", "12x9", "--out", b.c_str()}).code,
            kExitPass);
  const std::string text = slurp(a);
  EXPECT_EQ(text, slurp(b));
  std::istringstream is(text);
  std::string line;
  int verts = 0, faces = 0;
  while (std::getline(is, line)) {
    if (line.rfind("v ", 0) == 0) {
      ++verts;
    } else if (line.rfind("f ", 0) == 0) {
      ++faces;
      std::istringstream ls(line.substr(2));
      int idx, count = 0;
      while (ls >> idx) {
        ++count;
        EXPECT_GE(idx, 1);
        EXPECT_LE(idx, 12 * 9);
      }
      EXPECT_EQ(count, 4);
    }
  }
  EXPECT_EQ(verts, 12 * 9);
  EXPECT_EQ(faces, 11 * 8);
  fs::remove_all(dir);
}

TEST(Cli, CsvHeaderAndRows) {
  const RunResult r = run_cli({"generate", "--family", "cylinder", "--profile", "umbilic",
                               "--grid", "5x3", "--format", "csv", "--out", "-"});
  ASSERT_EQ(r.code, kExitPass) << r.err;
  std::istringstream is(r.out);
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "u,v,x,y,z,theta,K,H");
  int rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, 15);
}

TEST(Cli, GoldenVerifyReport) {
  // Statuses and thresholds are pinned; residual values and locations are not.
  const RunResult r = run_cli({"verify", "--family", "prop24", "--theta", "pi/3", "--grid",
                               "50x50", "--out", "-"});
  ASSERT_EQ(r.code, kExitPass);
  const std::regex strip(" max=\\S+| at=\\([^)]*\\)");
  const std::string got = std::regex_replace(r.out, strip, "");
  EXPECT_EQ(got, slurp(fs::path(SOLSURF_TEST_DATA_DIR) / "prop24_pi3_50x50.golden"));
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const fs::path dir = scratch("cfg");
  const fs::path cfg = dir / "job.json";
  std::ofstream(cfg) << R"({"family": "cylinder", "profile": "quadratic", "grid": "8x4"})";
  const std::string c = cfg.string();
  const RunResult r = run_cli({"verify", "--config", c.c_str(), "--grid", "6x3", "--out", "-"});
  EXPECT_EQ(r.code, kExitPass) << r.out << r.err;
  EXPECT_NE(r.out.find("grid 6x3"), std::string::npos);
  std::ofstream(dir / "bad.json") << R"({"family": "cylinder", "colour": "red"})";
  const std::string bad = (dir / "bad.json").string();
  EXPECT_EQ(run_cli({"verify", "--config", bad.c_str()}).code, kExitUsage);
  fs::remove_all(dir);
}

TEST(Cli, FiguresHonourOutDirEnvironment) {
  const fs::path dir = scratch("fig");
  ASSERT_EQ(setenv("SOLSURF_OUT_DIR", dir.c_str(), 1), 0);
  const RunResult r = run_cli({"figures"});
  unsetenv("SOLSURF_OUT_DIR");
  ASSERT_EQ(r.code, kExitPass) << r.err;
  for (const char* item : {"b", "c", "d", "e"}) {
    EXPECT_TRUE(fs::exists(dir / (std::string("item_") + item + ".csv"))) << item;
    EXPECT_TRUE(fs::exists(dir / (std::string("item_") + item + ".obj"))) << item;
  }
  const auto meta = nlohmann::json::parse(slurp(dir / "figures.json"));
  ASSERT_EQ(meta["items"].size(), 4u);
  for (const auto& it : meta["items"]) {
    EXPECT_EQ(it["umbilical"].get<bool>(), it["item"] == "e") << it["item"];
    EXPECT_FALSE(it["totally_geodesic"].get<bool>());
  }
  fs::remove_all(dir);
}

TEST(Cli, BinaryExitStatus) {
  const std::string bin = SOLSURF_CLI_PATH;
  auto status = [](const std::string& cmd) {
    const int s = std::system((cmd + " > /dev/null 2>&1").c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
  };
  EXPECT_EQ(status(bin + " verify --family leaf --grid 5x5 --out -"), 0);
  EXPECT_EQ(status(bin + " verify --family prop24 --grid 5x5 --perturb-z 0.05 --out -"), 1);
  EXPECT_EQ(status(bin + " verify --family nope"), 2);
}

}  // namespace
}  // namespace solsurf::cli
