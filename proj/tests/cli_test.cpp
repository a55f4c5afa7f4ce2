#include "test_util.hpp"

#include <gtest/gtest.h>

#include <cstdlib>
#include <fstream>

using testutil::spit;

namespace {

const std::filesystem::path kWorkDir =
    std::filesystem::temp_directory_path() / "tabpipe_cli_test";

int runCli(const std::string& args) {
    const std::string cmd = std::string(TABPIPE_CLI_PATH) + " " + args + " > " +
                            (kWorkDir / "stdout.txt").string() + " 2> " +
                            (kWorkDir / "stderr.txt").string();
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

std::string lastStdout() { return testutil::slurp(kWorkDir / "stdout.txt"); }
std::string lastStderr() { return testutil::slurp(kWorkDir / "stderr.txt"); }

class CliTest : public ::testing::Test {
protected:
    void SetUp() override {
        std::filesystem::remove_all(kWorkDir);
        std::filesystem::create_directories(kWorkDir);
        spit(kWorkDir / "data.csv", "a,b\n1,x\n2,y\n3,z\n");
        spit(kWorkDir / "good.json", R"({"stages": [
            {"stageName": "read", "stageType": "inputCsv",
             "stageParam": {"path": ")" + (kWorkDir / "data.csv").string() + R"("}},
            {"stageType": "filter", "stageParam": {"expression": "a >= 2"}},
            {"stageType": "outputCsv", "stageParam": {"path": "out.csv"}}
        ]})");
        spit(kWorkDir / "bad_first.json", R"({"stages": [
            {"stageType": "edaFeatureTypes"}
        ]})");
        spit(kWorkDir / "bad_syntax.json", "{nope");
    }
};

} // namespace

TEST_F(CliTest, RunValidPipeline) {
    const int code =
        runCli("run " + (kWorkDir / "good.json").string() + " --output-dir " +
               (kWorkDir / "out").string());
    EXPECT_EQ(code, 0) << lastStderr();
    EXPECT_TRUE(std::filesystem::exists(kWorkDir / "out" / "out.csv"));
    const std::string log = lastStdout();
    EXPECT_NE(log.find("[0] read inputCsv"), std::string::npos);
    EXPECT_NE(log.find("out.csv"), std::string::npos);
    // two rows survive the filter
    const std::string out = testutil::slurp(kWorkDir / "out" / "out.csv");
    EXPECT_EQ(out, "a,b\n2,y\n3,z\n");
}

TEST_F(CliTest, ValidateGoodAndBad) {
    EXPECT_EQ(runCli("validate " + (kWorkDir / "good.json").string()), 0);
    EXPECT_NE(lastStdout().find("pipeline is valid"), std::string::npos);

    EXPECT_EQ(runCli("validate " + (kWorkDir / "bad_first.json").string()), 1);
    EXPECT_NE(lastStdout().find("input"), std::string::npos);
}

TEST_F(CliTest, RunRefusesInvalidPipeline) {
    EXPECT_EQ(runCli("run " + (kWorkDir / "bad_first.json").string()), 1);
}

TEST_F(CliTest, UsageAndParseErrorsExitTwo) {
    EXPECT_EQ(runCli(""), 2);
    EXPECT_EQ(runCli("run " + (kWorkDir / "missing.json").string()), 2);
    EXPECT_EQ(runCli("run " + (kWorkDir / "bad_syntax.json").string()), 2);
    EXPECT_EQ(runCli("frobnicate x.json"), 2);
}

TEST_F(CliTest, RuntimeFailureExitsOneWithStageContext) {
    spit(kWorkDir / "missing_file.json", R"({"stages": [
        {"stageType": "inputCsv", "stageParam": {"path": "/definitely/not/here.csv"}}
    ]})");
    EXPECT_EQ(runCli("run " + (kWorkDir / "missing_file.json").string()), 1);
    EXPECT_NE(lastStderr().find("stage 0"), std::string::npos);
}
