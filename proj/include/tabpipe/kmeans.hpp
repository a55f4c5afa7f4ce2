#pragma once

#include "tabpipe/error.hpp"
#include "tabpipe/rng.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <string>
#include <vector>

namespace tabpipe {

/// Dense n x d matrix assembled from frame columns; one-hot categories are
/// expanded as "<col>=<category>". Rows with nulls in any source column are
/// dropped before assembly, sourceRowIds maps matrix rows back to frame rows.
struct FeatureMatrix {
    size_t n = 0;
    size_t d = 0;
    std::vector<double> data; // row-major
    std::vector<std::string> featureNames;
    std::vector<size_t> sourceRowIds;

    double at(size_t row, size_t col) const { return data[row * d + col]; }
    const double* rowPtr(size_t row) const { return data.data() + row * d; }
};

struct ClusterModel {
    int k = 0;
    std::vector<std::vector<double>> centers;
    std::vector<int> assignments;
    double cost = 0.0; // WSSSE
};

struct CostCurvePoint {
    int k;
    double cost;
};

namespace kmeans_detail {

inline double sqDist(const double* a, const double* b, size_t d) {
    double s = 0.0;
    for (size_t i = 0; i < d; ++i) {
        const double diff = a[i] - b[i];
        s += diff * diff;
    }
    return s;
}

inline double computeCost(const FeatureMatrix& m, const std::vector<std::vector<double>>& centers,
                          const std::vector<int>& assignments) {
    double cost = 0.0;
    for (size_t i = 0; i < m.n; ++i)
        cost += sqDist(m.rowPtr(i), centers[assignments[i]].data(), m.d);
    return cost;
}

// D^2 seeding over the point subset.
inline std::vector<std::vector<double>> kmeansPlusPlusSeeds(const FeatureMatrix& m,
                                                            const std::vector<size_t>& points,
                                                            int k, Rng& rng) {
    std::vector<std::vector<double>> centers;
    centers.reserve(k);
    const size_t first = points[rng.below(points.size())];
    centers.emplace_back(m.rowPtr(first), m.rowPtr(first) + m.d);

    std::vector<double> minDist(points.size(), std::numeric_limits<double>::max());
    while (static_cast<int>(centers.size()) < k) {
        double total = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            const double dNew = sqDist(m.rowPtr(points[i]), centers.back().data(), m.d);
            minDist[i] = std::min(minDist[i], dNew);
            total += minDist[i];
        }
        size_t chosen = 0;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double acc = 0.0;
            chosen = points.size() - 1;
            for (size_t i = 0; i < points.size(); ++i) {
                acc += minDist[i];
                if (acc >= target) {
                    chosen = i;
                    break;
                }
            }
        } else {
            // all remaining mass at existing centers: duplicate points
            chosen = rng.below(points.size());
        }
        centers.emplace_back(m.rowPtr(points[chosen]), m.rowPtr(points[chosen]) + m.d);
    }
    return centers;
}

struct LloydResult {
    std::vector<std::vector<double>> centers;
    std::vector<int> assignments; // indexed by position in `points`
    double cost = 0.0;
    std::vector<double> iterationCosts;
};

inline LloydResult lloyd(const FeatureMatrix& m, const std::vector<size_t>& points, int k,
                         Rng& rng, int maxIter, double tol) {
    LloydResult res;
    res.centers = kmeansPlusPlusSeeds(m, points, k, rng);
    res.assignments.assign(points.size(), 0);

    for (int iter = 0; iter < maxIter; ++iter) {
        // assignment step; ties to the lowest center index
        double cost = 0.0;
        for (size_t i = 0; i < points.size(); ++i) {
            double best = std::numeric_limits<double>::max();
            int bestC = 0;
            for (int c = 0; c < k; ++c) {
                const double dist = sqDist(m.rowPtr(points[i]), res.centers[c].data(), m.d);
                if (dist < best) {
                    best = dist;
                    bestC = c;
                }
            }
            res.assignments[i] = bestC;
            cost += best;
        }

        // empty-cluster repair: reseed at the point farthest from its center
        std::vector<size_t> sizes(k, 0);
        for (int a : res.assignments) ++sizes[a];
        for (int c = 0; c < k; ++c) {
            if (sizes[c] > 0) continue;
            double worst = -1.0;
            size_t worstIdx = 0;
            for (size_t i = 0; i < points.size(); ++i) {
                const double dist =
                    sqDist(m.rowPtr(points[i]), res.centers[res.assignments[i]].data(), m.d);
                if (dist > worst && sizes[res.assignments[i]] > 1) {
                    worst = dist;
                    worstIdx = i;
                }
            }
            --sizes[res.assignments[worstIdx]];
            res.assignments[worstIdx] = c;
            sizes[c] = 1;
            res.centers[c].assign(m.rowPtr(points[worstIdx]), m.rowPtr(points[worstIdx]) + m.d);
        }

        // update step
        std::vector<std::vector<double>> next(k, std::vector<double>(m.d, 0.0));
        std::vector<size_t> counts(k, 0);
        for (size_t i = 0; i < points.size(); ++i) {
            const double* p = m.rowPtr(points[i]);
            auto& ctr = next[res.assignments[i]];
            for (size_t j = 0; j < m.d; ++j) ctr[j] += p[j];
            ++counts[res.assignments[i]];
        }
        double shift = 0.0;
        for (int c = 0; c < k; ++c) {
            if (counts[c] == 0) {
                next[c] = res.centers[c];
                continue;
            }
            for (size_t j = 0; j < m.d; ++j) next[c][j] /= static_cast<double>(counts[c]);
            shift = std::max(shift, std::sqrt(sqDist(next[c].data(), res.centers[c].data(), m.d)));
        }
        res.centers = std::move(next);
        res.cost = cost;
        // cost against the pre-update centers; the sequence is non-increasing
        assert(res.iterationCosts.empty() ||
               cost <= res.iterationCosts.back() * (1.0 + 1e-12) + 1e-12);
        res.iterationCosts.push_back(cost);
        if (shift < tol) break;
    }

    // final assignment against the converged centers
    double cost = 0.0;
    for (size_t i = 0; i < points.size(); ++i) {
        double best = std::numeric_limits<double>::max();
        int bestC = 0;
        for (int c = 0; c < k; ++c) {
            const double dist = sqDist(m.rowPtr(points[i]), res.centers[c].data(), m.d);
            if (dist < best) {
                best = dist;
                bestC = c;
            }
        }
        res.assignments[i] = bestC;
        cost += best;
    }
    res.cost = cost;
    return res;
}

} // namespace kmeans_detail

/// k-means++ seeding with Lloyd iterations. Per-restart seeds are seed +
/// restart index; the lowest-cost restart wins, ties to the lower index.
/// iterationCostsOut, when given, receives the winning restart's per-iteration
/// cost sequence.
inline ClusterModel kmeansFit(const FeatureMatrix& m, int k, uint64_t seed, int maxIter = 100,
                              double tol = 1e-4, int restarts = 5,
                              std::vector<double>* iterationCostsOut = nullptr) {
    if (k < 1) throw Error(ErrorCode::BadKRange, "k must be >= 1");
    if (m.n < static_cast<size_t>(k))
        throw Error(ErrorCode::TooFewPoints,
                    std::to_string(m.n) + " points cannot form " + std::to_string(k) + " clusters");

    std::vector<size_t> all(m.n);
    for (size_t i = 0; i < m.n; ++i) all[i] = i;

    ClusterModel best;
    best.cost = std::numeric_limits<double>::max();
    for (int r = 0; r < restarts; ++r) {
        Rng rng(seed + static_cast<uint64_t>(r));
        auto res = kmeans_detail::lloyd(m, all, k, rng, maxIter, tol);
        if (res.cost < best.cost) {
            best.k = k;
            best.centers = std::move(res.centers);
            best.assignments = std::move(res.assignments);
            best.cost = res.cost;
            if (iterationCostsOut) *iterationCostsOut = std::move(res.iterationCosts);
        }
    }
    return best;
}

/// Start from one cluster and repeatedly 2-means-split the cluster with the
/// largest WSSSE until k clusters exist. Size-1 clusters are not divisible.
inline ClusterModel bisectingKmeansFit(const FeatureMatrix& m, int k, uint64_t seed,
                                       int maxIter = 100, double tol = 1e-4, int restarts = 5) {
    if (k < 1) throw Error(ErrorCode::BadKRange, "k must be >= 1");
    if (m.n < static_cast<size_t>(k))
        throw Error(ErrorCode::TooFewPoints,
                    std::to_string(m.n) + " points cannot form " + std::to_string(k) + " clusters");

    struct Node {
        std::vector<size_t> points;
        std::vector<double> center;
        double sse = 0.0;
    };

    auto makeNode = [&](std::vector<size_t> pts) {
        Node n;
        n.points = std::move(pts);
        n.center.assign(m.d, 0.0);
        for (size_t i : n.points)
            for (size_t j = 0; j < m.d; ++j) n.center[j] += m.at(i, j);
        for (size_t j = 0; j < m.d; ++j) n.center[j] /= static_cast<double>(n.points.size());
        n.sse = 0.0;
        for (size_t i : n.points) n.sse += kmeans_detail::sqDist(m.rowPtr(i), n.center.data(), m.d);
        return n;
    };

    std::vector<size_t> all(m.n);
    for (size_t i = 0; i < m.n; ++i) all[i] = i;
    std::vector<Node> clusters;
    clusters.push_back(makeNode(std::move(all)));

    uint64_t splitSeed = seed;
    while (static_cast<int>(clusters.size()) < k) {
        // pick the divisible cluster with the largest SSE (ties to lower index)
        int pick = -1;
        for (size_t c = 0; c < clusters.size(); ++c) {
            if (clusters[c].points.size() < 2) continue;
            if (pick < 0 || clusters[c].sse > clusters[pick].sse) pick = static_cast<int>(c);
        }
        if (pick < 0) break; // nothing divisible; n >= k guarantees this is unreachable

        Node victim = std::move(clusters[pick]);
        clusters.erase(clusters.begin() + pick);

        kmeans_detail::LloydResult bestSplit;
        bestSplit.cost = std::numeric_limits<double>::max();
        for (int r = 0; r < restarts; ++r) {
            Rng rng(splitSeed + static_cast<uint64_t>(r));
            auto res = kmeans_detail::lloyd(m, victim.points, 2, rng, maxIter, tol);
            if (res.cost < bestSplit.cost) bestSplit = std::move(res);
        }
        splitSeed += static_cast<uint64_t>(restarts);

        std::vector<size_t> left, right;
        for (size_t i = 0; i < victim.points.size(); ++i)
            (bestSplit.assignments[i] == 0 ? left : right).push_back(victim.points[i]);
        if (left.empty() || right.empty()) {
            // degenerate split (all points identical): peel off one point
            std::vector<size_t>& full = left.empty() ? right : left;
            std::vector<size_t>& open = left.empty() ? left : right;
            open.push_back(full.back());
            full.pop_back();
        }
        clusters.push_back(makeNode(std::move(left)));
        clusters.push_back(makeNode(std::move(right)));
    }

    ClusterModel model;
    model.k = static_cast<int>(clusters.size());
    model.assignments.assign(m.n, 0);
    model.cost = 0.0;
    for (size_t c = 0; c < clusters.size(); ++c) {
        model.centers.push_back(clusters[c].center);
        model.cost += clusters[c].sse;
        for (size_t i : clusters[c].points) model.assignments[i] = static_cast<int>(c);
    }
    return model;
}

/// Rousseeuw silhouette with plain Euclidean distance. a = mean intra-cluster
/// distance excluding self, b = min over other clusters of mean distance;
/// singleton clusters score 0, as does the 0/0 degenerate case.
inline std::pair<double, std::vector<double>> silhouetteScore(const FeatureMatrix& m,
                                                              const std::vector<int>& assignments) {
    if (assignments.size() != m.n)
        throw Error(ErrorCode::LengthMismatch, "assignment count != point count");
    std::map<int, size_t> sizes;
    for (int a : assignments) ++sizes[a];
    if (sizes.size() < 2)
        throw Error(ErrorCode::SingleCluster, "silhouette needs at least 2 clusters");

    // label -> dense position
    std::map<int, size_t> pos;
    for (const auto& [label, count] : sizes) pos.emplace(label, pos.size());
    const size_t k = sizes.size();

    std::vector<double> perPoint(m.n, 0.0);
    std::vector<double> sums(k);
    double total = 0.0;
    for (size_t i = 0; i < m.n; ++i) {
        std::fill(sums.begin(), sums.end(), 0.0);
        for (size_t j = 0; j < m.n; ++j) {
            if (j == i) continue;
            sums[pos[assignments[j]]] +=
                std::sqrt(kmeans_detail::sqDist(m.rowPtr(i), m.rowPtr(j), m.d));
        }
        const size_t own = pos[assignments[i]];
        const size_t ownSize = sizes[assignments[i]];
        if (ownSize <= 1) {
            perPoint[i] = 0.0;
            continue;
        }
        const double a = sums[own] / static_cast<double>(ownSize - 1);
        double b = std::numeric_limits<double>::max();
        for (const auto& [label, count] : sizes) {
            const size_t p = pos[label];
            if (p == own) continue;
            b = std::min(b, sums[p] / static_cast<double>(count));
        }
        const double denom = std::max(a, b);
        perPoint[i] = denom == 0.0 ? 0.0 : (b - a) / denom;
        total += perPoint[i];
    }
    return {total / static_cast<double>(m.n), perPoint};
}

/// Elbow detection via interior vertex angles on the min-max normalized
/// (k, cost) curve; theta = arccos of the angle between the two edge vectors,
/// capped at pi. The smallest angle wins, ties broken toward smaller k.
inline std::pair<int, std::map<int, double>> shiOptimalK(const std::vector<CostCurvePoint>& curve) {
    if (curve.size() < 3)
        throw Error(ErrorCode::TooFewPoints, "angle method needs at least 3 curve points");

    double kMin = curve.front().k, kMax = curve.front().k;
    double cMin = curve.front().cost, cMax = curve.front().cost;
    for (const auto& p : curve) {
        kMin = std::min(kMin, static_cast<double>(p.k));
        kMax = std::max(kMax, static_cast<double>(p.k));
        cMin = std::min(cMin, p.cost);
        cMax = std::max(cMax, p.cost);
    }
    const double kSpan = kMax > kMin ? kMax - kMin : 1.0;
    const double cSpan = cMax > cMin ? cMax - cMin : 1.0;

    std::vector<std::pair<double, double>> pts;
    pts.reserve(curve.size());
    for (const auto& p : curve)
        pts.emplace_back((p.k - kMin) / kSpan, (p.cost - cMin) / cSpan);

    std::map<int, double> angles;
    int bestK = curve[1].k;
    double bestAngle = std::numeric_limits<double>::max();
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const double v1x = pts[i - 1].first - pts[i].first;
        const double v1y = pts[i - 1].second - pts[i].second;
        const double v2x = pts[i + 1].first - pts[i].first;
        const double v2y = pts[i + 1].second - pts[i].second;
        const double n1 = std::sqrt(v1x * v1x + v1y * v1y);
        const double n2 = std::sqrt(v2x * v2x + v2y * v2y);
        double cosTheta = n1 == 0.0 || n2 == 0.0 ? -1.0 : (v1x * v2x + v1y * v2y) / (n1 * n2);
        cosTheta = std::clamp(cosTheta, -1.0, 1.0);
        const double theta = std::acos(cosTheta);
        angles[curve[i].k] = theta;
        if (theta < bestAngle) { // strict: ties stay at the smaller k
            bestAngle = theta;
            bestK = curve[i].k;
        }
    }
    return {bestK, angles};
}

} // namespace tabpipe
