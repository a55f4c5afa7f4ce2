#pragma once

#include "tabpipe/kmeans.hpp"
#include "tabpipe/plot.hpp"
#include "tabpipe/stage.hpp"
#include "tabpipe/stages_feature.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

namespace tabpipe::stages {

/// Assemble the feature matrix for clustering: numeric columns pass through,
/// string columns one-hot encode with categories in lexicographic order, rows
/// holding nulls in any source column are dropped (count logged).
inline FeatureMatrix buildFeatureMatrix(const Frame& f, const std::vector<std::string>& columns,
                                        bool applyMinMaxScaling, size_t* droppedOut = nullptr) {
    struct Encoder {
        const Column* column;
        std::vector<std::string> categories; // empty for numeric columns
    };
    std::vector<Encoder> encoders;
    FeatureMatrix m;

    for (const auto& name : columns) {
        const Column& c = f.column(name);
        if (isNumeric(c.dtype)) {
            encoders.push_back({&c, {}});
            m.featureNames.push_back(name);
        } else if (c.dtype == DType::Str) {
            std::set<std::string> cats;
            for (const auto& v : c.values)
                if (!isNull(v)) cats.insert(std::get<std::string>(v));
            Encoder e{&c, {cats.begin(), cats.end()}};
            for (const auto& cat : e.categories) m.featureNames.push_back(name + "=" + cat);
            encoders.push_back(std::move(e));
        } else {
            throw Error(ErrorCode::UnsupportedColumnType,
                        "column '" + name + "' is " + dtypeName(c.dtype) +
                            "; features must be numeric or string");
        }
    }
    m.d = m.featureNames.size();

    size_t dropped = 0;
    for (size_t r = 0; r < f.nrows(); ++r) {
        bool hasNull = false;
        for (const auto& e : encoders)
            if (isNull(e.column->values[r])) {
                hasNull = true;
                break;
            }
        if (hasNull) {
            ++dropped;
            continue;
        }
        for (const auto& e : encoders) {
            const Value& v = e.column->values[r];
            if (e.categories.empty()) {
                m.data.push_back(asDouble(v));
            } else {
                const std::string& s = std::get<std::string>(v);
                for (const auto& cat : e.categories) m.data.push_back(cat == s ? 1.0 : 0.0);
            }
        }
        m.sourceRowIds.push_back(r);
    }
    m.n = m.sourceRowIds.size();
    if (droppedOut) *droppedOut = dropped;
    if (m.n == 0) throw Error(ErrorCode::EmptyMatrix, "all rows were dropped for nulls");

    if (applyMinMaxScaling) {
        for (size_t j = 0; j < m.d; ++j) {
            double lo = m.data[j], hi = m.data[j];
            for (size_t i = 1; i < m.n; ++i) {
                lo = std::min(lo, m.at(i, j));
                hi = std::max(hi, m.at(i, j));
            }
            for (size_t i = 0; i < m.n; ++i) {
                double& cell = m.data[i * m.d + j];
                cell = hi == lo ? 0.0 : (cell - lo) / (hi - lo); // constant dims collapse to 0
            }
        }
    }
    return m;
}

inline void stageAddFeaturesVector(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    const auto columns = run.param.requireStringList("columns");
    const bool scale = run.param.optBool("applyMinMaxScaling", false);
    if (columns.empty()) throw Error(ErrorCode::BadParam, "columns must be non-empty");

    size_t dropped = 0;
    run.ctx.features = buildFeatureMatrix(f, columns, scale, &dropped);
    if (dropped)
        run.ctx.log.info("features vector: dropped " + std::to_string(dropped) +
                         " rows containing nulls");
    run.ctx.log.info("features vector: " + std::to_string(run.ctx.features->n) + " rows x " +
                     std::to_string(run.ctx.features->d) + " dims");
}

/// kMin < kMax scans the range and writes the cost curve plus the optimal-k
/// report (mean silhouette per k and the normalized-curve angle per interior
/// k). kMin == kMax fits once and appends the prediction column, Null for
/// rows that were dropped from the matrix.
inline void stageSimpleCluster(StageRun& run) {
    const Frame& f = run.ctx.currentFrame();
    if (!run.ctx.features)
        throw Error(ErrorCode::MissingFeaturesVector,
                    "simpleCluster requires a prior addFeaturesVector stage");
    const FeatureMatrix& m = *run.ctx.features;

    const std::string algorithm = run.param.optString("algorithm", "kmeans");
    if (algorithm != "kmeans" && algorithm != "bisecting")
        throw Error(ErrorCode::BadParam, "algorithm must be \"kmeans\" or \"bisecting\"");
    const int64_t kMin = run.param.requireInt("kMin");
    const int64_t kMax = run.param.requireInt("kMax");
    if (kMin < 1 || kMin > kMax)
        throw Error(ErrorCode::BadKRange,
                    "need 1 <= kMin <= kMax, got " + std::to_string(kMin) + ".." +
                        std::to_string(kMax));
    const uint64_t seed =
        static_cast<uint64_t>(run.param.optInt("seed", static_cast<int64_t>(run.ctx.rngSeed)));

    auto fit = [&](int k) {
        return algorithm == "kmeans" ? kmeansFit(m, k, seed) : bisectingKmeansFit(m, k, seed);
    };

    if (kMin == kMax) {
        const std::string predictColumn = run.param.optString("predictColumn", "prediction");
        const ClusterModel model = fit(static_cast<int>(kMin));
        Column out{predictColumn, DType::Int64, std::vector<Value>(f.nrows(), std::monostate{})};
        for (size_t i = 0; i < m.n; ++i)
            out.values[m.sourceRowIds[i]] = static_cast<int64_t>(model.assignments[i]);
        run.ctx.current = f.withColumn(std::move(out));
        run.ctx.log.info("clustering k=" + std::to_string(kMin) +
                         " cost=" + formatDouble(model.cost));
        return;
    }

    // scan mode
    std::vector<CostCurvePoint> curve;
    std::map<int, double> silhouettes;
    for (int64_t k = kMin; k <= kMax; ++k) {
        const ClusterModel model = fit(static_cast<int>(k));
        curve.push_back({static_cast<int>(k), model.cost});
        if (k >= 2) {
            auto [meanS, perPoint] = silhouetteScore(m, model.assignments);
            silhouettes[static_cast<int>(k)] = meanS;
        }
        run.ctx.log.info("scan k=" + std::to_string(k) + " cost=" + formatDouble(model.cost));
    }

    std::map<int, double> angles;
    std::optional<int> kOptAngle;
    if (curve.size() >= 3) {
        auto [kOpt, thetas] = shiOptimalK(curve);
        kOptAngle = kOpt;
        angles = std::move(thetas);
    }
    std::optional<int> kOptSilhouette;
    for (const auto& [k, s] : silhouettes)
        if (!kOptSilhouette || s > silhouettes[*kOptSilhouette]) kOptSilhouette = k;

    const std::string stageFile = sanitizeFilenamePart(run.name);
    const auto costsPath = run.param.has("costsOutPath")
                               ? run.ctx.resolveOutput(run.param.requireString("costsOutPath"))
                               : run.ctx.outputDir / (stageFile + "_costs.csv");
    std::ostringstream costs;
    costs << "k,cost\n";
    for (const auto& p : curve) costs << p.k << "," << formatDouble(p.cost) << "\n";
    plot::writeTextFile(costsPath, costs.str());
    run.addArtifact(costsPath);

    const auto reportPath = run.param.has("reportOutPath")
                                ? run.ctx.resolveOutput(run.param.requireString("reportOutPath"))
                                : run.ctx.outputDir / (stageFile + "_optimal_k.csv");
    std::ostringstream report;
    report << "k,cost,silhouette,angle_radians\n";
    for (const auto& p : curve) {
        report << p.k << "," << formatDouble(p.cost) << ",";
        if (auto it = silhouettes.find(p.k); it != silhouettes.end())
            report << formatDouble(it->second);
        report << ",";
        if (auto it = angles.find(p.k); it != angles.end()) report << formatDouble(it->second);
        report << "\n";
    }
    report << "K_opt_silhouette=" << (kOptSilhouette ? std::to_string(*kOptSilhouette) : "")
           << "\n";
    report << "K_opt_angle=" << (kOptAngle ? std::to_string(*kOptAngle) : "") << "\n";
    plot::writeTextFile(reportPath, report.str());
    run.addArtifact(reportPath);

    if (kOptSilhouette)
        run.ctx.log.info("K_opt (silhouette) = " + std::to_string(*kOptSilhouette));
    if (kOptAngle) run.ctx.log.info("K_opt (angle) = " + std::to_string(*kOptAngle));
}

inline void registerClusterStages(StageRegistry& reg) {
    reg["addFeaturesVector"] = StageDef{
        .type = "addFeaturesVector",
        .producesFeatures = true,
        .params = {{"columns", ParamType::StringList, true},
                   {"applyMinMaxScaling", ParamType::Bool, false}},
        .run = stageAddFeaturesVector};
    reg["simpleCluster"] = StageDef{
        .type = "simpleCluster",
        .requiresFeatures = true,
        .params = {{"algorithm", ParamType::String, false},
                   {"kMin", ParamType::Int, true},
                   {"kMax", ParamType::Int, true},
                   {"seed", ParamType::Int, false},
                   {"predictColumn", ParamType::String, false},
                   {"costsOutPath", ParamType::String, false},
                   {"reportOutPath", ParamType::String, false}},
        .run = stageSimpleCluster};
}

} // namespace tabpipe::stages
