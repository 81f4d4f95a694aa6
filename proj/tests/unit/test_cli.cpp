#include "cli.hpp"

#include <json.hpp>
#include <gtest/gtest.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace {

struct Result {
    int code = 0;
    std::string out;
    std::string err;
    nlohmann::json json() const { return nlohmann::json::parse(out); }
    nlohmann::json error() const { return nlohmann::json::parse(err); }
};

Result cli(std::vector<std::string> args) {
    std::ostringstream out, err;
    Result r;
    r.code = rse::cli::run(args, out, err);
    r.out = out.str();
    r.err = err.str();
    return r;
}

}  // namespace

TEST(Cli, GroupInfoReportsInvariants) {
    Result r = cli({"group-info", "--group", "gl2:3"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto j = r.json();
    EXPECT_EQ(j["subcommand"], "group-info");
    EXPECT_EQ(j["version"], rse::cli::kVersion);
    EXPECT_TRUE(j.contains("wall_time_ms"));
    EXPECT_EQ(j["config"]["group"], "gl2:3");
    const auto& p = j["payload"];
    EXPECT_EQ(p["order"], 48);
    EXPECT_EQ(p["kappa"], 8);
    EXPECT_EQ(p["epsilon"], 6);
    EXPECT_EQ(p["iota"], 14);
    EXPECT_EQ(p["axioms_ok"], true);
}

TEST(Cli, ExactExpectation) {
    Result r = cli({"exact-expectation", "--group", "sym:3", "--k", "2", "--variant", "AAINV"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["payload"]["value"], "36/5");
    r = cli({"exact-expectation", "--group", "sym:3", "--k", "2", "--variant", "AA", "--method", "PAPER_CLOSED_FORM"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["payload"]["value"], "6/1");
    r = cli({"exact-expectation", "--group", "cyclic:6", "--k", "2", "--variant", "ACTION", "--h", "2"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["payload"]["value"], "24/5");
    r = cli({"exact-expectation", "--model", "free:2", "--radius", "2", "--k", "2", "--variant", "AA"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.json()["payload"]["value"], "76/17");
}

TEST(Cli, EnergyOfSidonSet) {
    Result r = cli({"energy", "--group", "cyclic:100", "--a", "0,1,3,7", "--histogram"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto p = r.json()["payload"];
    EXPECT_EQ(p["energy"], 28);
    EXPECT_EQ(p["image_size"], 10);
    EXPECT_EQ(p["histogram"].size(), 10u);
}

TEST(Cli, ExitCodes) {
    Result r = cli({});
    EXPECT_EQ(r.code, rse::cli::kUsage);
    r = cli({"energy", "--group", "cyclic:5"});
    EXPECT_EQ(r.code, rse::cli::kUsage);
    EXPECT_EQ(r.error()["error"]["exit_code"], rse::cli::kUsage);
    r = cli({"group-info", "--group", "cyclic:x"});
    EXPECT_EQ(r.code, rse::cli::kMalformedSpec);
    EXPECT_EQ(r.error()["error"]["kind"], "malformed_spec");
    r = cli({"brute-force", "--group", "cyclic:30", "--k", "10", "--cap-subsets", "1000"});
    EXPECT_EQ(r.code, rse::cli::kCapExceeded);
    r = cli({"exact-expectation", "--group", "cyclic:5", "--k", "9"});
    EXPECT_EQ(r.code, rse::cli::kDomain);
    r = cli({"mc-estimate", "--group", "cyclic:5", "--k", "2", "--threads", "0"});
    EXPECT_EQ(r.code, rse::cli::kUsage);
    r = cli({"thin-basis", "--n", "1000000000"});
    EXPECT_EQ(r.code, rse::cli::kDomain);
}

TEST(Cli, PayloadIndependentOfThreads) {
    std::vector<std::string> base = {"mc-estimate", "--group", "sym:5", "--k", "8", "--trials", "4000", "--seed", "5"};
    auto one = base, four = base;
    one.insert(one.end(), {"--threads", "1"});
    four.insert(four.end(), {"--threads", "4"});
    Result a = cli(one), b = cli(four);
    ASSERT_EQ(a.code, 0) << a.err;
    ASSERT_EQ(b.code, 0) << b.err;
    EXPECT_EQ(a.json()["payload"].dump(), b.json()["payload"].dump());
    EXPECT_EQ(a.json()["config"]["threads"], "1");
}

TEST(Cli, CsvAndOutFile) {
    Result r = cli({"ball-densities", "--model", "lattice:1", "--radius-max", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, r.out.find('\n')), "n,ball,cp_exact,cp,cp_estimate,cp_stderr,sq,iota,growth_ratio");
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 5);

    auto path = std::filesystem::temp_directory_path() / "rse_cli_test.json";
    r = cli({"power-cover", "--group", "sym:4", "--a", "0,6,9", "--out", path.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_TRUE(r.out.empty());
    std::ifstream f(path);
    auto j = nlohmann::json::parse(f);
    EXPECT_EQ(j["subcommand"], "power-cover");
    std::filesystem::remove(path);

    r = cli({"thin-basis", "--n", "4", "--format", "csv"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(r.out.substr(0, 10), "key,value\n");
}

TEST(Cli, ValidateBatteryPasses) {
    Result r = cli({"validate"});
    ASSERT_EQ(r.code, 0) << r.err;
    auto p = r.json()["payload"];
    EXPECT_EQ(p["failed"], 0);
    EXPECT_GT(p["passed"].get<int>(), 100);
}
