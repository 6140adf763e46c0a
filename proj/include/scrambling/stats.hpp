// stats.hpp - percentile bootstrap of the mean, percentiles and Spearman
// rank correlation.

#pragma once

#include "scrambling/core.hpp"
#include "scrambling/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace scrambling {

/// Linear interpolation between order statistics at position q * (n - 1),
/// so q = 0 and q = 1 return the minimum and maximum.
inline double percentile_sorted(std::span<const double> sorted, double q) {
    if (sorted.empty()) throw PreconditionError("percentile: empty input");
    if (!(q >= 0.0 && q <= 1.0)) throw PreconditionError("percentile: q must lie in [0, 1]");
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

inline double percentile(std::vector<double> values, double q) {
    std::sort(values.begin(), values.end());
    return percentile_sorted(values, q);
}

inline double mean(std::span<const double> v) {
    if (v.empty()) throw PreconditionError("mean: empty input");
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

struct BootstrapSummary {
    double mean = 0.0;
    double ci_low = 0.0;
    double ci_high = 0.0;
    double level = 0.95;
    int resamples = 1000;
    Seed seed = 0;
    bool degenerate = false;      // M == 1
    bool widened_to_mean = false; // percentile interval did not contain the sample mean
};

// Sorted means of `resamples` with-replacement resamples of `sample`.
inline std::vector<double> resampled_means(std::span<const double> sample, int resamples, Seed seed) {
    Engine eng = make_engine(seed);
    std::uniform_int_distribution<std::size_t> pick(0, sample.size() - 1);
    std::vector<double> means(static_cast<std::size_t>(resamples));
    for (auto& m : means) {
        double s = 0.0;
        for (std::size_t i = 0; i < sample.size(); ++i) s += sample[pick(eng)];
        m = s / static_cast<double>(sample.size());
    }
    std::sort(means.begin(), means.end());
    return means;
}

inline BootstrapSummary bootstrap_ci(std::span<const double> sample, int resamples = 1000, double level = 0.95,
                                     Seed seed = 0) {
    if (sample.empty()) throw PreconditionError("bootstrap_ci: empty sample");
    if (!(level > 0.0 && level < 1.0)) throw PreconditionError("bootstrap_ci: level must lie in (0, 1)");
    if (resamples < 1) throw PreconditionError("bootstrap_ci: resamples must be >= 1");
    for (double v : sample)
        if (!std::isfinite(v)) throw PreconditionError("bootstrap_ci: non-finite sample value");

    BootstrapSummary s;
    s.mean = mean(sample);
    s.level = level;
    s.resamples = resamples;
    s.seed = seed;
    if (sample.size() == 1) {
        s.ci_low = s.ci_high = s.mean;
        s.degenerate = true;
        return s;
    }
    const auto means = resampled_means(sample, resamples, seed);
    s.ci_low = percentile_sorted(means, 0.5 * (1.0 - level));
    s.ci_high = percentile_sorted(means, 0.5 * (1.0 + level));
    if (s.ci_low > s.mean || s.ci_high < s.mean) {
        s.ci_low = std::min(s.ci_low, s.mean);
        s.ci_high = std::max(s.ci_high, s.mean);
        s.widened_to_mean = true;
    }
    return s;
}

// 1-based ranks, ties share their average rank.
inline std::vector<double> average_ranks(std::span<const double> x) {
    std::vector<std::size_t> idx(x.size());
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    std::stable_sort(idx.begin(), idx.end(), [&](auto i, auto j) { return x[i] < x[j]; });
    std::vector<double> rank(x.size());
    for (std::size_t i = 0; i < idx.size();) {
        std::size_t j = i;
        while (j + 1 < idx.size() && x[idx[j + 1]] == x[idx[i]]) ++j;
        const double r = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t t = i; t <= j; ++t) rank[idx[t]] = r;
        i = j + 1;
    }
    return rank;
}

inline double pearson(std::span<const double> x, std::span<const double> y) {
    const double mx = mean(x), my = mean(y);
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0 || syy == 0.0) return 0.0;
    return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

inline double spearman(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size()) throw PreconditionError("spearman: length mismatch");
    if (x.size() < 3) throw PreconditionError("spearman: need at least 3 points");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    return pearson(rx, ry);
}

} // namespace scrambling
