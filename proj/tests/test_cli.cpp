#include "loclab/io.hpp"
#include "loclab/linearizable.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace loclab;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code = -1;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("loclab_cli_" + std::to_string(::getpid()) + "_" +
                                         ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string write(const std::string& name, const json& j) const {
    io::write_text_file(path(name), j.dump());
    return path(name);
  }

  Result run(const std::string& args) const {
    const std::string out = path("stdout.txt");
    const std::string cmd = std::string(LOCLAB_CLI_PATH) + " " + args + " > " + out + " 2>/dev/null";
    const int status = std::system(cmd.c_str());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
  }

  static std::string slurp(const std::string& file) {
    std::ifstream in(file, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  fs::path dir_;
};

Graph path3() { return Graph(3, {{0, 1}, {1, 2}}); }

}  // namespace

TEST_F(Cli, MissingSubcommandIsAUsageError) {
  EXPECT_EQ(run("").code, 2);
  EXPECT_EQ(run("lin").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST_F(Cli, UnknownSuiteIsAnInputError) { EXPECT_EQ(run("suite nonsense --out " + path("r")).code, 2); }

TEST_F(Cli, MissingFileIsAnInputError) { EXPECT_EQ(run("lin incidence --graph " + path("absent.json")).code, 2); }

TEST_F(Cli, IncidenceMatchesTheLibrary) {
  auto g = write("g.json", io::graph_to_json(path3()));
  auto r = run("lin incidence --graph " + g);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(io::parse(r.out), io::to_json(incidence_graph(path3())));
}

TEST_F(Cli, VerifyExitCodes) {
  auto ig = write("ig.json", io::to_json(incidence_graph(path3())));
  auto good = write("good.json", json{"M", "M", "A", "P"});
  auto bad = write("bad.json", json{"A", "A", "M", "M"});
  auto r = run("lin verify --incidence " + ig + " --labels " + good);
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.rfind("ok", 0), 0u);
  EXPECT_EQ(run("lin verify --incidence " + ig + " --labels " + bad).code, 1);
  auto j = run("--json lin verify --incidence " + ig + " --labels " + bad);
  EXPECT_EQ(j.code, 1);
  EXPECT_FALSE(io::parse(j.out)["ok"].get<bool>());
}

TEST_F(Cli, EncodeAndDecode) {
  auto ig = write("ig.json", io::to_json(incidence_graph(path3())));
  auto enc = run("lin encode --incidence " + ig + " --matched 3");
  ASSERT_EQ(enc.code, 0);
  EXPECT_EQ(io::edge_labels_from_json(io::parse(enc.out)), (EdgeLabels{"M", "M", "A", "P"}));
  io::write_text_file(path("lab.json"), enc.out);
  auto dec = run("lin decode --incidence " + ig + " --labels " + path("lab.json"));
  EXPECT_EQ(dec.code, 0);
}

TEST_F(Cli, LpOptimumIsExact) {
  auto g = write("k3.json", io::graph_to_json(Graph(3, {{0, 1}, {1, 2}, {2, 0}})));
  auto lp = run("lp matching --graph " + g);
  ASSERT_EQ(lp.code, 0);
  io::write_text_file(path("lp.json"), lp.out);
  auto opt = run("lp opt --lp " + path("lp.json"));
  ASSERT_EQ(opt.code, 0);
  EXPECT_NE(opt.out.find("3/2"), std::string::npos);
}

TEST_F(Cli, LiftBuildRunVerify) {
  auto ig = write("ig.json", io::to_json(incidence_graph(path3())));
  auto built = run("lift build --incidence " + ig + " --k 1 --dot " + path("pi.dot"));
  ASSERT_EQ(built.code, 0);
  EXPECT_EQ(io::parse(built.out)["n"], 9);
  EXPECT_EQ(slurp(path("pi.dot")).rfind("graph G {", 0), 0u);
  io::write_text_file(path("pi.json"), built.out);
  auto lifted = run("lift run --instance " + path("pi.json"));
  ASSERT_EQ(lifted.code, 0);
  io::write_text_file(path("labels.json"), lifted.out);
  EXPECT_EQ(run("lift verify --instance " + path("pi.json") + " --labels " + path("labels.json")).code, 0);
  auto back = run("lift pullback --instance " + path("pi.json") + " --labels " + path("labels.json"));
  EXPECT_EQ(back.code, 0);
  EXPECT_EQ(io::parse(back.out)["support"].size(), 1u);
}

TEST_F(Cli, SuiteReportIsDeterministic) {
  ASSERT_EQ(run("--seed 7 suite lift --out " + path("a")).code, 0);
  ASSERT_EQ(run("--seed 7 suite lift --out " + path("b")).code, 0);
  const auto a = slurp(path("a/report.json"));
  EXPECT_FALSE(a.empty());
  EXPECT_EQ(a, slurp(path("b/report.json")));
  EXPECT_EQ(slurp(path("a/report.txt")), slurp(path("b/report.txt")));
  EXPECT_TRUE(fs::exists(path("a/timings.json")));
  auto rep = io::parse(a);
  EXPECT_EQ(rep["environment"]["seed"], 7);
  EXPECT_EQ(rep["failed_checks"], 0);
}
