#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {
const std::string cli = LIE2_CLI;
const std::string data = LIE2_DATA_DIR;

fs::path fresh(const std::string& name) {
    auto p = fs::temp_directory_path() / ("lie2_cli_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

int run(const fs::path& out, const std::string& args) {
    std::string cmd = "\"" + cli + "\" --output-dir \"" + out.string() + "\" " + args + " > \"" + (out / "stdout.txt").string() + "\" 2>&1";
    int s = std::system(cmd.c_str());
    return WIFEXITED(s) ? WEXITSTATUS(s) : -1;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

nlohmann::json manifest(const fs::path& out) { return nlohmann::json::parse(slurp(out / "manifest.json")); }
}  // namespace

TEST(Cli, VerifyBuiltinAndFiles) {
    auto d = fresh("verify");
    EXPECT_EQ(run(d, "verify id_su2"), 0);
    EXPECT_EQ(manifest(d)["exit_code"], 0);
    EXPECT_EQ(run(d, "verify " + data + "/su2.json"), 0);
    EXPECT_EQ(run(d, "verify " + data + "/su2_corrupt.json"), 1);
    EXPECT_EQ(manifest(d)["exit_code"], 1);
}

TEST(Cli, BadInputsExitTwoWithManifest) {
    auto d = fresh("bad");
    EXPECT_EQ(run(d, "verify " + data + "/does_not_exist.json"), 2);
    EXPECT_TRUE(fs::exists(d / "manifest.json"));
    EXPECT_EQ(run(d, "verify " + data + "/malformed.json"), 2);
    EXPECT_NE(slurp(d / "stdout.txt").find("line 5"), std::string::npos);
    EXPECT_EQ(run(d, "simulate " + data + "/sim_bad_mode.json"), 2);
    EXPECT_NE(slurp(d / "stdout.txt").find("bulk2d"), std::string::npos);
    EXPECT_EQ(run(d, "lax id_sl2 --rmatrix dj --points 0"), 2);
    EXPECT_EQ(run(d, "flow id_sl2 --dt 0"), 2);
}

TEST(Cli, UnknownSubcommandIsParseError) {
    auto d = fresh("unknown");
    EXPECT_EQ(run(d, "frobnicate"), 2);
}

TEST(Cli, CybeAndLax) {
    auto d = fresh("lax");
    EXPECT_EQ(run(d, "cybe id_su2"), 1);
    EXPECT_EQ(run(d, "lax id_sl2 --rmatrix dj --points 20"), 0);
    EXPECT_TRUE(fs::exists(d / "manifest.json"));
    EXPECT_EQ(run(d, "lax id_sl2 --rmatrix dj --points 20 --hamiltonian " + data + "/ham_b1.json"), 1);
    EXPECT_EQ(run(d, "lax id_su2 --points 20"), 1);
}

TEST(Cli, FlowWritesTrajectoryAndDrift) {
    auto d = fresh("flow");
    EXPECT_EQ(run(d, "flow id_sl2 --rmatrix dj --p0 0.3,-0.2,0.5,0.1,0.4,-0.3 --dt 0.001 --steps 200 --stride 10"), 0);
    auto drift = slurp(d / "drift.csv");
    EXPECT_EQ(drift.substr(0, drift.find('\n')), "t,F_1,F_2,F_3,F_4,eig_drift");
    EXPECT_TRUE(fs::exists(d / "trajectory.csv"));
}

TEST(Cli, SimulateSmallIsFastAndDeterministic) {
    auto a = fresh("sim_a"), b = fresh("sim_b");
    auto t0 = std::chrono::steady_clock::now();
    EXPECT_EQ(run(a, "simulate " + data + "/sim_small.json"), 0);
    EXPECT_LT(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(), 1.0);
    EXPECT_EQ(run(b, "simulate " + data + "/sim_small.json"), 0);
    for (auto f : {"observables.csv", "tbar.csv", "state_initial.csv", "state_final.csv"}) {
        ASSERT_TRUE(fs::exists(a / f)) << f;
        EXPECT_EQ(slurp(a / f), slurp(b / f)) << f;
    }
    std::istringstream in(slurp(a / "observables.csv"));
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 12);
}

TEST(Cli, SimulateZeroStepsAndProject) {
    auto d = fresh("sim0");
    EXPECT_EQ(run(d, "simulate " + data + "/sim_small.json --steps 0"), 0);
    std::istringstream in(slurp(d / "observables.csv"));
    int lines = 0;
    for (std::string l; std::getline(in, l);) ++lines;
    EXPECT_EQ(lines, 2);
    auto p = fresh("proj");
    EXPECT_EQ(run(p, "project \"" + (d / "state_final.csv").string() + "\""), 0);
    EXPECT_TRUE(fs::exists(p / "project.json"));
}
