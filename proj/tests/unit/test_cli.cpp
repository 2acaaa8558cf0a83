#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

const char* kTree = R"({"root":"a","vertices":[{"id":"a"},{"id":"b","parent":"a"},{"id":"c","parent":"b"}],
"edges":[{"a":"a","b":"b","c":1.0},{"a":"b","b":"c","c":1.0}]})";

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::path(::testing::TempDir()) /
           ("repel_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    std::ofstream(dir_ / "tree.json") << kTree;
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) const {
    const std::string cmd = std::string(REPEL_CLI_PATH) + " " + args + " >" + (dir_ / "stdout.txt").string() +
                            " 2>" + (dir_ / "stderr.txt").string();
    const int rc = std::system(cmd.c_str());
    return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  }
  std::string tree() const { return (dir_ / "tree.json").string(); }
  std::string out(const std::string& name) const { return (dir_ / name).string(); }
  static std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

}  // namespace

TEST_F(Cli, HelpAndParseErrors) {
  EXPECT_EQ(run("--help"), 0);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("triple --alpha 0.5 --u 1 --seed 1"), 2);
  EXPECT_EQ(run("triple --tree " + tree() + " --alpha -0.5 --u 1 --seed 1"), 2);
  EXPECT_EQ(run("verify --suite specfun"), 2);
  EXPECT_EQ(run("verify --suite bogus --seed 1"), 2);
  EXPECT_EQ(run("invert --tree " + tree() + " --lambda " + tree() + " --mode nope --seed 1"), 2);
  EXPECT_EQ(run("triple --tree " + out("missing.json") + " --alpha 0.5 --u 1 --seed 1"), 2);
}

TEST_F(Cli, TripleIsDeterministic) {
  const std::string base = "triple --tree " + tree() + " --alpha 0.5 --u 1 --reps 3 --seed 9 --out ";
  ASSERT_EQ(run(base + out("a")), 0);
  ASSERT_EQ(run(base + out("b")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "a" / "triples.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "a" / "triple_000000.json"));
  for (const auto& e : fs::directory_iterator(dir_ / "a"))
    EXPECT_EQ(slurp(e.path()), slurp(dir_ / "b" / e.path().filename())) << e.path();
}

TEST_F(Cli, InvertFromTriple) {
  ASSERT_EQ(run("triple --tree " + tree() + " --alpha 0.5 --u 1 --reps 1 --seed 4 --out " + out("t")), 0);
  const std::string tri = (dir_ / "t" / "triple_000000.json").string();
  ASSERT_EQ(run("invert --tree " + tree() + " --triple " + tri + " --alpha 0.5 --reps 5 --seed 4 --out " + out("i")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "i" / "runs.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "i" / "events.csv"));
  EXPECT_EQ(run("invert --tree " + tree() + " --triple " + tri + " --alpha 0.5 --mode mixture --reps 5 --seed 4"), 0);
  EXPECT_FALSE(slurp(dir_ / "stdout.txt").empty());
}

TEST_F(Cli, PercolationAndMesh) {
  EXPECT_EQ(run("percolation --tree " + tree() + " --alpha 0.5 --u 1 --reps 5 --seed 2 --out " + out("p")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "p" / "runs.csv"));
  EXPECT_EQ(run("percolation --tree " + tree() + " --alpha 1.5 --u 1 --reps 5 --seed 2"), 2);
  EXPECT_EQ(run("mesh --levels 2..4 --alpha 0 --reps 20 --seed 3 --out " + out("m")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "m" / "mesh_runs.csv"));
  EXPECT_TRUE(fs::exists(dir_ / "m" / "diagnostics.csv"));
}

TEST_F(Cli, VerifyAndSpecfun) {
  EXPECT_EQ(run("verify --suite specfun --seed 1 --out " + out("v")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "v" / "reports.csv"));
  EXPECT_EQ(run("specfun-table --out " + out("s")), 0);
  EXPECT_TRUE(fs::exists(dir_ / "s" / "specfun.csv"));
}
