#include <gtest/gtest.h>

#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <fstream>

#include <json.hpp>

namespace {

struct CliRun {
  int code = -1;
  std::string out;
};

// stdout is captured, stderr discarded
CliRun gq3(const std::string& args) {
  const std::string cmd = std::string(GQ3_CLI) + " " + args + " 2>/dev/null";
  CliRun r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf;
  while (std::size_t got = fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), got);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string data(const std::string& name) { return std::string(GQ3_DATA) + "/" + name; }

nlohmann::json parsed(const CliRun& r) { return nlohmann::json::parse(r.out); }

}  // namespace

TEST(Cli, TruncateReports) {
  CliRun r = gq3("truncate " + data("tame3.pres"));
  ASSERT_EQ(r.code, 0);
  auto j = parsed(r);
  EXPECT_EQ(j["invariants"]["order"], "81");
  EXPECT_EQ(j["q"], 3);
  EXPECT_EQ(j["class_bound"], 5);

  CliRun f = gq3("--seed 5 truncate " + data("free2.pres"));
  ASSERT_EQ(f.code, 0);
  EXPECT_EQ(parsed(f)["invariants"]["order"], "32");
  EXPECT_EQ(parsed(f)["seed"], 5);

  EXPECT_EQ(gq3("truncate " + data("malformed.pres")).code, 2);
  EXPECT_EQ(gq3("truncate " + data("no_such_file.pres")).code, 2);
  EXPECT_EQ(gq3("truncate " + data("badq.pres")).code, 3);
  EXPECT_EQ(gq3("frobnicate").code, 2);
}

TEST(Cli, ReportsAreByteDeterministic) {
  for (const std::string& args : std::vector<std::string>{"truncate " + data("two_adic.pres"), "cohomology " + data("tame3.pres"),
                                 "kmilnor --field tame_local:13 --q 4"}) {
    EXPECT_EQ(gq3(args).out, gq3(args).out) << args;
  }
}

TEST(Cli, QOverride) {
  CliRun r = gq3("--q 2 truncate " + data("free3.pres"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parsed(r)["q"], 2);
  EXPECT_EQ(parsed(r)["invariants"]["order"], "32");
}

TEST(Cli, Reconstruct) {
  CliRun r = gq3("reconstruct " + data("tame3.pres"));
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parsed(r)["round_trip"], "equal");
  EXPECT_EQ(gq3("reconstruct " + data("mixed4.pres")).code, 3);

  const std::string path = ::testing::TempDir() + "gq3_cli_zero_cd.json";
  {
    std::ofstream f(path);
    f << R"({"q":2,"n":2,"h2_rank":0,"bockstein":[[],[]],"cup":[[]]})";
  }
  CliRun z = gq3("reconstruct --cd " + path);
  ASSERT_EQ(z.code, 0);
  EXPECT_EQ(parsed(z)["invariants"]["order"], "32");
  std::remove(path.c_str());
  EXPECT_EQ(gq3("reconstruct").code, 2);
}

TEST(Cli, Screen) {
  CliRun a = gq3("screen " + data("triple3.pres"));
  EXPECT_EQ(a.code, 1);
  EXPECT_EQ(parsed(a)["verdict"], "obstructed");
  CliRun b = gq3("screen " + data("cyclic_free2.pres"));
  EXPECT_EQ(b.code, 0);
  EXPECT_EQ(parsed(b)["verdict"], "no_obstruction_found");
  EXPECT_EQ(gq3("screen --cd 3 " + data("free3.pres")).code, 1);
  EXPECT_EQ(gq3("screen --cd 3 " + data("free2.pres")).code, 0);
  EXPECT_EQ(gq3("screen --cd 3 --torsion-free " + data("free2.pres")).code, 1);
  EXPECT_EQ(gq3("screen " + data("mixed4.pres")).code, 3);
}

TEST(Cli, EquivAndMorphism) {
  EXPECT_EQ(gq3("equiv " + data("triple3.pres")).code, 1);
  EXPECT_EQ(gq3("equiv " + data("tame3.pres")).code, 0);
  CliRun m = gq3("morphism " + data("tame3.pres") + " " + data("tame3.pres") + " --image x1 \"x2^4\"");
  ASSERT_EQ(m.code, 0);
  EXPECT_EQ(parsed(m)["b_iff_d"], true);
  EXPECT_EQ(gq3("morphism " + data("tame3.pres") + " " + data("tame3.pres") + " --image x2 x1").code, 3);
}

TEST(Cli, KMilnorAndGalois) {
  CliRun k = gq3("kmilnor --field tame_local:5 --q 2 --rmax 3");
  ASSERT_EQ(k.code, 0);
  EXPECT_EQ(parsed(k)["algebra"]["ranks"], nlohmann::json::parse("[2,1,0]"));
  CliRun f = gq3("kmilnor --field finite:7 --q 3 --rmax 2");
  ASSERT_EQ(f.code, 0);
  EXPECT_EQ(parsed(f)["algebra"]["ranks"], nlohmann::json::parse("[1,0]"));
  EXPECT_EQ(gq3("kmilnor --field tame_local:7 --q 4").code, 3);

  EXPECT_EQ(gq3("galois-check --field tame_local:5 " + data("tame5_q2.pres")).code, 0);
  EXPECT_EQ(gq3("galois-check --field two_adic " + data("two_adic.pres")).code, 0);
  EXPECT_EQ(gq3("galois-check --field tame_local:7 --map u:x1,t:x2 " + data("cyclic_free2.pres")).code, 1);
}
