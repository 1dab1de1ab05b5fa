#include <gtest/gtest.h>

#include <array>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "sps/bench.hpp"
#include "sps/io.hpp"
#include "sps/states.hpp"
#include "test_util.hpp"

using namespace sps;
using testutil::TempDir;
namespace fs = std::filesystem;

namespace {

struct CliRun {
  int status = -1;
  std::string output;  // stdout and stderr together
};

CliRun sps_cli(const std::string& args, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + "\"" SPS_CLI_PATH "\" " + args + " 2>&1";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  std::size_t got;
  while ((got = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.output.append(buf.data(), got);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

std::string q(const fs::path& p) { return "\"" + p.string() + "\""; }

int count_lines(const std::string& text) { return static_cast<int>(std::count(text.begin(), text.end(), '\n')); }

}  // namespace

TEST(Cli, DimOneIsAnArgumentError) {
  TempDir tmp;
  const CliRun r = sps_cli("precompute --dim 1 --out " + q(tmp.path() / "c"));
  EXPECT_NE(r.status, 0);
  EXPECT_NE(r.output.find("--dim"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(tmp.path() / "c"));
}

TEST(Cli, PrecomputeReportsPayloadAndVerifiedRerun) {
  TempDir tmp;
  const CliRun a = sps_cli("precompute --dim 10 --out " + q(tmp.path() / "c"));
  ASSERT_EQ(a.status, 0) << a.output;
  EXPECT_NE(a.output.find("K payload 30400 bytes"), std::string::npos) << a.output;
  const CliRun b = sps_cli("precompute --dim 10 --out " + q(tmp.path() / "c"));
  EXPECT_NE(b.output.find("verified 20 records, nothing rewritten"), std::string::npos) << b.output;
}

TEST(Cli, CacheRootFromEnvironment) {
  TempDir tmp;
  const std::string env = "SPS_CACHE_ROOT=" + q(tmp.path());
  ASSERT_EQ(sps_cli("precompute --dim 4 --kind husimi", env).status, 0);
  EXPECT_TRUE(fs::exists(cache_dir_for(tmp.path(), 4, -1.0) / "manifest.json"));
  const CliRun r = sps_cli("compute --state mixed --dim 4 --kind husimi --method d --n 8 --format csv", env);
  EXPECT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(count_lines(r.output), 65);
  EXPECT_NE(sps_cli("compute --state mixed --dim 4 --method d --format csv").status, 0);
}

TEST(Cli, MethodDBinaryMatchesLibrary) {
  TempDir tmp;
  ASSERT_EQ(sps_cli("precompute --dim 10 --s -0.5 --out " + q(tmp.path() / "c")).status, 0);
  const CliRun r = sps_cli("compute --state random --param seed=5 --dim 10 --s -0.5 --n 20 --method d --cache " +
                        q(tmp.path() / "c") + " --out " + q(tmp.path() / "g.bin"));
  ASSERT_EQ(r.status, 0) << r.output;
  const GridFile f = read_grid_file(tmp.path() / "g.bin");
  EXPECT_EQ(f.method, MethodTag::method_d);
  EXPECT_EQ(f.n, 20);
  const auto dim = SpinDimension::from_dim(10);
  const PhaseSpaceGrid ref = sample_fft(fourier_coefficients_method_c(random_density(dim, 5), -0.5), 20);
  EXPECT_LT(testutil::max_abs(f.values - ref.values), 1e-12);
}

TEST(Cli, CorruptCacheFailsWithoutOutput) {
  TempDir tmp;
  ASSERT_EQ(sps_cli("precompute --dim 6 --out " + q(tmp.path() / "c")).status, 0);
  testutil::flip_byte(tmp.path() / "c" / "k_+00004.bin", 100);
  const CliRun r = sps_cli("compute --state ghz --dim 6 --method d --cache " + q(tmp.path() / "c") + " --out " +
                        q(tmp.path() / "g.bin"));
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.output.find("ell = 4"), std::string::npos) << r.output;
  EXPECT_FALSE(fs::exists(tmp.path() / "g.bin"));
}

TEST(Cli, InputFileMatchesNamedState) {
  TempDir tmp;
  const auto dim = SpinDimension::from_dim(5);
  {
    std::ofstream f(tmp.path() / "rho.csv");
    write_matrix_csv(f, random_density(dim, 9));
  }
  const CliRun a = sps_cli("compute --input " + q(tmp.path() / "rho.csv") + " --n 10 --format csv");
  const CliRun b = sps_cli("compute --state random --param seed=9 --dim 5 --n 10 --format csv");
  ASSERT_EQ(a.status, 0) << a.output;
  EXPECT_EQ(a.output, b.output);
  const CliRun bad = sps_cli("compute --input " + q(tmp.path() / "rho.csv") + " --dim 6 --format csv");
  EXPECT_EQ(bad.status, 2);
  EXPECT_NE(bad.output.find("does not match"), std::string::npos);
}

TEST(Cli, PointwiseMethodsAgreeWithFft) {
  const std::string base = "compute --state squeezed --param xi=0.4 --dim 4 --n 8 --format csv --method ";
  auto values = [](const std::string& csv) {
    std::istringstream in(csv);
    std::string line;
    std::getline(in, line);
    std::vector<double> v;
    double th, ph, re, im;
    while (std::getline(in, line) && std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &th, &ph, &re, &im) == 4) {
      v.push_back(re);
      v.push_back(im);
    }
    return v;
  };
  const auto c = values(sps_cli(base + "c").output);
  ASSERT_EQ(c.size(), 128u);
  for (const char* m : {"b", "direct"}) {
    const auto o = values(sps_cli(base + m).output);
    ASSERT_EQ(o.size(), c.size()) << m;
    for (std::size_t i = 0; i < c.size(); ++i) EXPECT_NEAR(o[i], c[i], 1e-11) << m;
  }
}

TEST(Cli, WindowAndErrors) {
  const CliRun w = sps_cli("compute --state dicke --param m=0.5 --dim 4 --n 8 --format csv --window 0.5,0,1");
  ASSERT_EQ(w.status, 0) << w.output;
  EXPECT_EQ(count_lines(w.output), 5);
  EXPECT_NE(sps_cli("compute --state dicke --param m=0.25 --dim 4 --format csv").status, 0);
  EXPECT_NE(sps_cli("compute --state mixed --dim 6 --n 7 --format csv").status, 0);
  EXPECT_NE(sps_cli("compute --state mixed --dim 6 --s 2 --format csv").status, 0);
  EXPECT_EQ(sps_cli("compute --state mixed --dim 6 --s 2 --allow-extended-s --n 12 --format csv").status, 0);
  EXPECT_NE(sps_cli("compute --state mixed --dim 6 --s 0 --kind husimi --format csv").status, 0);
  EXPECT_NE(sps_cli("compute --state mixed --dim 6").status, 0);  // binary needs --out
}

TEST(Cli, GradientWritesTwoFiles) {
  TempDir tmp;
  const CliRun r = sps_cli("deriv --state coherent --param theta=1 --dim 6 --n 12 --variable grad --out " +
                        q(tmp.path() / "g.bin"));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_EQ(read_grid_file(tmp.path() / "g_dtheta.bin").n, 12);
  EXPECT_EQ(read_grid_file(tmp.path() / "g_dphi.bin").n, 12);
}

TEST(Cli, BenchSkipsMissingCache) {
  TempDir tmp;
  const CliRun r = sps_cli("bench --dims 6,8 --methods CD --reps 1 --cache-root " + q(tmp.path()));
  ASSERT_EQ(r.status, 0) << r.output;
  EXPECT_NE(r.output.find("D,6,skipped"), std::string::npos) << r.output;
  EXPECT_NE(r.output.find("# slope C"), std::string::npos) << r.output;
  const CliRun p = sps_cli("bench --dims 6,8 --methods D --reps 1 --precompute --cache-root " + q(tmp.path()));
  EXPECT_NE(p.output.find("D,8,ok"), std::string::npos) << p.output;
}

TEST(Bench, LogLogSlope) {
  EXPECT_NEAR(loglog_slope({50, 100, 200, 400}, {1, 16, 256, 4096}), 4.0, 1e-12);
  EXPECT_NEAR(loglog_slope({2, 3}, {8, 27}), 3.0, 1e-12);
  EXPECT_EQ(cache_dir_for("/r", 10, -0.5), fs::path("/r/d10_s-0.5"));
}
