#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <algorithm>
#include <filesystem>

#include "mfc/io.hpp"
#include "mfc/lp.hpp"

namespace {

namespace fs = std::filesystem;

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("mfc_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  int run(const std::string& args) {
    const std::string cmd = std::string(MFCROUTE_EXE) + " " + args + " > " +
                            (dir_ / "stdout.txt").string() + " 2> " + (dir_ / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  }
  std::string out() const { return mfc::read_text(dir_ / "stdout.txt"); }
  std::string err() const { return mfc::read_text(dir_ / "stderr.txt"); }
  std::string p(const std::string& name) const { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(Cli, GenSolveWritesReports) {
  ASSERT_EQ(run("gen --profile rural_sparse --clients 6 --seed 4 -o " + p("r.json")), 0) << err();
  ASSERT_EQ(run("validate " + p("r.json")), 0) << out();
  ASSERT_EQ(run("solve " + p("r.json") + " --method alns --seed 1 --iterations 300 --restarts 2 -o " +
                p("sol.txt") + " --report-dir " + p("rep")),
            0)
      << err();
  EXPECT_NE(out().find("objective="), std::string::npos);
  for (const char* f : {"fleet.csv", "performance.csv", "costs.csv"})
    EXPECT_TRUE(fs::exists(dir_ / "rep" / f)) << f;
  EXPECT_FALSE(fs::exists(dir_ / "rep" / "timeline.csv"));

  ASSERT_EQ(run("report " + p("r.json") + " " + p("sol.txt") + " --out-dir " + p("rep2")), 0)
      << err();
  EXPECT_TRUE(fs::exists(dir_ / "rep2" / "timeline.csv"));
  EXPECT_EQ(mfc::read_text(dir_ / "rep" / "costs.csv"), mfc::read_text(dir_ / "rep2" / "costs.csv"));
}

TEST_F(Cli, ExactMethodsAgree) {
  ASSERT_EQ(run("gen --profile rural_sparse --clients 4 --seed 9 -o " + p("r.json")), 0);
  ASSERT_EQ(run("solve " + p("r.json") + " --method brute -o " + p("a.txt") + " --report-dir " +
                p("ra")),
            0)
      << err();
  ASSERT_EQ(run("solve " + p("r.json") + " --method bnb -o " + p("b.txt") + " --report-dir " +
                p("rb")),
            0)
      << err();
  EXPECT_NE(out().find("proven_optimal=true"), std::string::npos);
  EXPECT_EQ(mfc::read_text(dir_ / "a.txt"), mfc::read_text(dir_ / "b.txt"));
}

TEST_F(Cli, UnknownFlagExitsTwo) {
  EXPECT_EQ(run("solve --no-such-flag x.json"), 2);
  EXPECT_EQ(run(""), 2);
  EXPECT_EQ(run("solve " + p("x.json") + " --method simplex"), 2);
}

TEST_F(Cli, ValidateReportsIssues) {
  ASSERT_EQ(run("gen --profile urban_dense --seed 2 -o " + p("u.json")), 0);
  auto doc = mfc::json::parse(mfc::read_text(dir_ / "u.json"));
  doc["clients"][0]["window"] = {12.0, 11.0};
  mfc::write_text(dir_ / "bad.json", doc.dump());
  EXPECT_EQ(run("validate " + p("bad.json")), 1);
  EXPECT_NE(out().find("issue: code=client.window_order"), std::string::npos) << out();

  doc["clients"][0].erase("rho");
  mfc::write_text(dir_ / "bad.json", doc.dump());
  EXPECT_EQ(run("validate " + p("bad.json")), 1);
  EXPECT_NE(err().find("kind=schema"), std::string::npos) << err();
  EXPECT_NE(err().find("$.clients[0].rho"), std::string::npos) << err();
}

TEST_F(Cli, MissingFileIsAnError) {
  EXPECT_EQ(run("solve " + p("absent.json")), 1);
  EXPECT_NE(err().find("error: kind="), std::string::npos);
}

TEST_F(Cli, ReportRejectsForeignSolution) {
  ASSERT_EQ(run("gen --profile rural_sparse --clients 3 --seed 1 -o " + p("a.json")), 0);
  ASSERT_EQ(run("gen --profile rural_sparse --clients 3 --seed 2 -o " + p("b.json")), 0);
  ASSERT_EQ(run("solve " + p("a.json") + " --method bnb -o " + p("s.txt") + " --report-dir " +
                p("r")),
            0);
  EXPECT_EQ(run("report " + p("b.json") + " " + p("s.txt") + " --out-dir " + p("r")), 1);
  EXPECT_NE(err().find("kind=hash_mismatch"), std::string::npos);
}

TEST_F(Cli, ExportAndImport) {
  ASSERT_EQ(run("gen --profile rural_sparse --clients 3 --seed 5 -o " + p("r.json")), 0);
  ASSERT_EQ(run("export-lp " + p("r.json") + " --bigm tight --symmetry -o " + p("m.lp")), 0)
      << err();
  const std::string lp = mfc::read_text(dir_ / "m.lp");
  EXPECT_EQ(lp.rfind("\\ instance_hash ", 0), 0u);
  EXPECT_NE(lp.find("Subject To"), std::string::npos);
  const auto inst = mfc::load_instance(dir_ / "r.json");
  EXPECT_EQ(mfc::parse_model(lp), mfc::expected_summary(inst, mfc::make_bigm_policy(
                                                                  inst, mfc::BigMMode::tightened, true)));

  // Values for one vehicle visiting every client in id order.
  const auto slots = mfc::slot_table(inst);
  std::string values = mfc::lpnames::y(mfc::SlotId{4, 0}) + "=1\n";
  const std::size_t k = static_cast<std::size_t>(
      std::find(slots.begin(), slots.end(), mfc::SlotId{4, 0}) - slots.begin()) + 1;
  std::size_t prev = 0;
  for (std::size_t j = 1; j <= inst.num_clients(); ++j) {
    values += mfc::lpnames::x(prev, j, k) + "=1\n";
    prev = j;
  }
  values += mfc::lpnames::x(prev, 0, k) + "=1\n";
  mfc::write_text(dir_ / "v.txt", values);
  ASSERT_EQ(run("import-sol " + p("r.json") + " " + p("v.txt") + " -o " + p("s.txt")), 0) << err();
  EXPECT_NE(out().find("reevaluated_objective="), std::string::npos);
  const auto sf = mfc::load_solution(dir_ / "s.txt");
  ASSERT_EQ(sf.solution.routes.size(), 1u);
  EXPECT_EQ(sf.solution.routes[0].stops, (std::vector<int>{1, 2, 3}));
}

}  // namespace
