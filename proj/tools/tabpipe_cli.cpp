#include "tabpipe/pipeline.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPipelineError = 1;
constexpr int kExitUsageError = 2;

std::optional<std::string> readFile(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return std::nullopt;
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

tabpipe::LogLevel parseLogLevel(const std::string& s) {
    if (s == "error") return tabpipe::LogLevel::Error;
    if (s == "warn") return tabpipe::LogLevel::Warn;
    if (s == "info") return tabpipe::LogLevel::Info;
    if (s == "debug") return tabpipe::LogLevel::Debug;
    throw CLI::ValidationError("--log-level", "must be one of error|warn|info|debug");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"JSON-driven preprocessing and EDA pipelines over columnar frames"};
    app.require_subcommand(1);

    std::string pipelinePath;
    std::string outputDir = "./out";
    int64_t seed = 42;
    std::string logLevel = "info";

    CLI::App* runCmd = app.add_subcommand("run", "validate and execute a pipeline");
    runCmd->add_option("pipeline", pipelinePath, "pipeline JSON file")->required();
    runCmd->add_option("--output-dir", outputDir, "directory for artifacts (default ./out)");
    runCmd->add_option("--seed", seed, "global RNG seed (default 42)");
    runCmd->add_option("--log-level", logLevel, "error|warn|info|debug");

    CLI::App* validateCmd = app.add_subcommand("validate", "check a pipeline without running it");
    validateCmd->add_option("pipeline", pipelinePath, "pipeline JSON file")->required();
    validateCmd->add_option("--log-level", logLevel, "error|warn|info|debug");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitUsageError;
    }

    tabpipe::Logger log;
    try {
        log.setLevel(parseLogLevel(logLevel));
    } catch (const CLI::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitUsageError;
    }

    const auto text = readFile(pipelinePath);
    if (!text) {
        std::cerr << "cannot read pipeline file '" << pipelinePath << "'\n";
        return kExitUsageError;
    }

    tabpipe::PipelineSpec spec;
    try {
        spec = tabpipe::parsePipeline(*text);
    } catch (const tabpipe::Error& e) {
        std::cerr << "pipeline parse error: " << e.what() << "\n";
        return kExitUsageError;
    }

    const auto diagnostics = tabpipe::validatePipeline(spec);
    if (app.got_subcommand(validateCmd)) {
        for (const auto& w : spec.parseWarnings) std::cout << "warning: " << w << "\n";
        for (const auto& d : diagnostics) std::cout << d << "\n";
        std::cout << (diagnostics.empty() ? "pipeline is valid" : "pipeline has problems") << "\n";
        return diagnostics.empty() ? kExitOk : kExitPipelineError;
    }

    if (!diagnostics.empty()) {
        for (const auto& d : diagnostics) std::cerr << d << "\n";
        return kExitPipelineError;
    }

    tabpipe::ExecutionContext ctx;
    ctx.rngSeed = static_cast<uint64_t>(seed);
    ctx.outputDir = outputDir;
    ctx.log = log;
    try {
        tabpipe::runPipeline(spec, ctx);
    } catch (const tabpipe::Error& e) {
        std::cerr << e.what() << "\n";
        return kExitPipelineError;
    }
    return kExitOk;
}
