#include "fast/normalize.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fast {

NormalizationStats NormalizationStats::leading(std::size_t d) const {
    NormalizationStats out;
    out.q_low.assign(q_low.begin(), q_low.begin() + static_cast<std::ptrdiff_t>(d));
    out.q_high.assign(q_high.begin(), q_high.begin() + static_cast<std::ptrdiff_t>(d));
    return out;
}

void validate_stats(const NormalizationStats& stats) {
    if (stats.q_low.size() != stats.q_high.size() || stats.q_low.empty()) {
        throw ConfigError("normalization stats must hold one low/high pair per dimension");
    }
    for (std::size_t i = 0; i < stats.dim(); ++i) {
        if (!std::isfinite(stats.q_low[i]) || !std::isfinite(stats.q_high[i]) ||
            stats.q_low[i] > stats.q_high[i]) {
            throw ConfigError("invalid normalization range for dimension " + std::to_string(i));
        }
    }
}

double sorted_quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) {
        throw EmptyCorpusError("quantile of an empty sample");
    }
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    if (frac == 0.0) {
        return sorted[lo];
    }
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

NormalizationStats fit_normalization(const ChunkCorpus& corpus) {
    const std::size_t dim = corpus.dim();
    std::size_t total = 0;
    for (const auto& c : corpus.chunks) {
        validate_chunk(c);
        total += c.horizon();
    }

    NormalizationStats stats;
    stats.q_low.resize(dim);
    stats.q_high.resize(dim);

    const auto n_dims = static_cast<std::ptrdiff_t>(dim);
#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t i = 0; i < n_dims; ++i) {
        const auto col = static_cast<std::size_t>(i);
        std::vector<double> pooled;
        pooled.reserve(total);
        for (const auto& c : corpus.chunks) {
            for (std::size_t t = 0; t < c.horizon(); ++t) {
                pooled.push_back(c.at(t, col));
            }
        }
        std::sort(pooled.begin(), pooled.end());
        stats.q_low[col] = sorted_quantile(pooled, kLowQuantile);
        stats.q_high[col] = sorted_quantile(pooled, kHighQuantile);
    }
    return stats;
}

namespace {

void check_dims(const ActionChunk& chunk, const NormalizationStats& stats) {
    if (chunk.dim() != stats.dim()) {
        throw DimMismatchError("chunk has " + std::to_string(chunk.dim()) +
                               " dimensions, normalization expects " +
                               std::to_string(stats.dim()));
    }
}

}  // namespace

ActionChunk apply_normalization(const ActionChunk& chunk, const NormalizationStats& stats) {
    check_dims(chunk, stats);
    const std::size_t dim = chunk.dim();
    std::vector<double> out(chunk.values().begin(), chunk.values().end());
    for (std::size_t t = 0; t < chunk.horizon(); ++t) {
        for (std::size_t i = 0; i < dim; ++i) {
            double& x = out[t * dim + i];
            if (stats.degenerate(i)) {
                x = 0.0;
            } else {
                x = 2.0 * (x - stats.q_low[i]) / (stats.q_high[i] - stats.q_low[i]) - 1.0;
            }
        }
    }
    return ActionChunk(chunk.horizon(), dim, std::move(out), chunk.frequency_hz());
}

ActionChunk invert_normalization(const ActionChunk& chunk, const NormalizationStats& stats) {
    check_dims(chunk, stats);
    const std::size_t dim = chunk.dim();
    std::vector<double> out(chunk.values().begin(), chunk.values().end());
    for (std::size_t t = 0; t < chunk.horizon(); ++t) {
        for (std::size_t i = 0; i < dim; ++i) {
            double& x = out[t * dim + i];
            if (stats.degenerate(i)) {
                x = stats.q_low[i];
            } else {
                x = (x + 1.0) * 0.5 * (stats.q_high[i] - stats.q_low[i]) + stats.q_low[i];
            }
        }
    }
    return ActionChunk(chunk.horizon(), dim, std::move(out), chunk.frequency_hz());
}

}  // namespace fast
