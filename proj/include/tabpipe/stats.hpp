#pragma once

#include "tabpipe/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <vector>

namespace tabpipe::stats {

inline double mean(const std::vector<double>& xs) {
    double s = 0.0;
    for (double x : xs) s += x;
    return s / static_cast<double>(xs.size());
}

/// Sample standard deviation (n-1 denominator).
inline double sampleStddev(const std::vector<double>& xs) {
    const double m = mean(xs);
    double ss = 0.0;
    for (double x : xs) ss += (x - m) * (x - m);
    return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

struct Moments {
    size_t n = 0;
    double min = 0.0, max = 0.0, mean = 0.0;
    std::optional<double> stddev;   // sample, n-1; absent when n < 2
    std::optional<double> skewness; // g1 = m3 / m2^(3/2), population moments
    std::optional<double> kurtosis; // excess, g2 = m4 / m2^2 - 3, population moments
};

inline Moments computeMoments(const std::vector<double>& xs) {
    Moments out;
    out.n = xs.size();
    if (xs.empty()) return out;
    out.min = *std::min_element(xs.begin(), xs.end());
    out.max = *std::max_element(xs.begin(), xs.end());
    out.mean = mean(xs);
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : xs) {
        const double d = x - out.mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    const double n = static_cast<double>(xs.size());
    if (xs.size() >= 2) out.stddev = std::sqrt(m2 / (n - 1.0));
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (m2 > 0.0 && xs.size() >= 3) out.skewness = m3 / std::pow(m2, 1.5);
    if (m2 > 0.0 && xs.size() >= 4) out.kurtosis = m4 / (m2 * m2) - 3.0;
    return out;
}

/// Pearson r over the given (already pairwise-complete) samples.
inline double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size())
        throw Error(ErrorCode::LengthMismatch, "pearson inputs differ in length");
    if (x.size() < 2)
        throw Error(ErrorCode::InsufficientData, "pearson needs at least 2 paired observations");
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double dx = x[i] - mx, dy = y[i] - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(ErrorCode::ZeroVariance, "pearson input has zero variance");
    return sxy / std::sqrt(sxx * syy);
}

/// Quantile by linear interpolation at fractional index p*(n-1) over sorted
/// values.
inline double quantileSorted(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) throw Error(ErrorCode::InsufficientData, "quantile of empty sample");
    if (sorted.size() == 1) return sorted[0];
    const double idx = p * static_cast<double>(sorted.size() - 1);
    const size_t lo = static_cast<size_t>(std::floor(idx));
    const size_t hi = static_cast<size_t>(std::ceil(idx));
    const double frac = idx - static_cast<double>(lo);
    return sorted[lo] * (1.0 - frac) + sorted[hi] * frac;
}

struct BoxStats {
    double median = 0.0, q1 = 0.0, q3 = 0.0;
    double whiskerLow = 0.0, whiskerHigh = 0.0;
    std::vector<double> outliers;
};

/// Whiskers extend to the extreme values still inside the 1.5*IQR fences.
inline BoxStats computeBoxStats(std::vector<double> values) {
    if (values.empty()) throw Error(ErrorCode::InsufficientData, "box stats of empty sample");
    std::sort(values.begin(), values.end());
    BoxStats b;
    b.q1 = quantileSorted(values, 0.25);
    b.median = quantileSorted(values, 0.5);
    b.q3 = quantileSorted(values, 0.75);
    const double iqr = b.q3 - b.q1;
    const double loFence = b.q1 - 1.5 * iqr;
    const double hiFence = b.q3 + 1.5 * iqr;
    b.whiskerLow = b.q3;
    b.whiskerHigh = b.q1;
    bool any = false;
    for (double v : values) {
        if (v >= loFence && v <= hiFence) {
            if (!any) {
                b.whiskerLow = b.whiskerHigh = v;
                any = true;
            } else {
                b.whiskerLow = std::min(b.whiskerLow, v);
                b.whiskerHigh = std::max(b.whiskerHigh, v);
            }
        } else {
            b.outliers.push_back(v);
        }
    }
    return b;
}

} // namespace tabpipe::stats
