#pragma once

#include "tabpipe/frame.hpp"
#include "tabpipe/kmeans.hpp"
#include "tabpipe/log.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace tabpipe {

/// Mutable state threaded through a pipeline run: the current frame, the
/// named frame store, the seed, and where artifacts land.
struct ExecutionContext {
    std::optional<Frame> current;
    std::map<std::string, Frame> store;
    uint64_t rngSeed = 42;
    std::filesystem::path outputDir = "./out";
    Logger log;
    // set by addFeaturesVector, consumed by simpleCluster
    std::optional<FeatureMatrix> features;

    const Frame& currentFrame() const {
        if (!current) throw Error(ErrorCode::NoCurrentFrame, "no current frame; run an input stage first");
        return *current;
    }

    /// Artifact paths resolve against outputDir unless absolute.
    std::filesystem::path resolveOutput(const std::string& path) const {
        std::filesystem::path p(path);
        if (p.is_absolute()) return p;
        return outputDir / p;
    }
};

struct StageOutcome {
    size_t stageIndex = 0;
    std::string stageName;
    std::string stageType;
    size_t rowsBefore = 0;
    size_t rowsAfter = 0;
    double elapsedMs = 0.0;
    std::vector<std::string> artifacts;
};

} // namespace tabpipe
