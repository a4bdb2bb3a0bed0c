#ifndef FAST_NORMALIZE_HPP
#define FAST_NORMALIZE_HPP

#include <cstddef>
#include <vector>

#include "fast/core.hpp"

namespace fast {

inline constexpr double kLowQuantile = 0.01;
inline constexpr double kHighQuantile = 0.99;

/// Per-dimension 1st / 99th percentiles; maps raw actions to [-1, 1].
struct NormalizationStats {
    std::vector<double> q_low;
    std::vector<double> q_high;

    std::size_t dim() const { return q_low.size(); }
    bool degenerate(std::size_t i) const { return q_high[i] == q_low[i]; }
    /// First `d` dimensions only (used when stripping universal padding).
    NormalizationStats leading(std::size_t d) const;
    friend bool operator==(const NormalizationStats&, const NormalizationStats&) = default;
};

/// Throws ConfigError if q_low > q_high anywhere or an entry is non-finite.
void validate_stats(const NormalizationStats& stats);

/// Linear-interpolation percentile on an already sorted sample (index p * (n - 1)).
double sorted_quantile(const std::vector<double>& sorted, double p);

/// Pools every value of each dimension across the corpus and takes its
/// 1st and 99th percentiles. Dimensions are sorted in parallel.
NormalizationStats fit_normalization(const ChunkCorpus& corpus);

/// 2 (x - lo) / (hi - lo) - 1 per dimension; no clipping. Constant dims map to 0.
ActionChunk apply_normalization(const ActionChunk& chunk, const NormalizationStats& stats);

/// Inverse of apply_normalization; constant dims map back to q_low.
ActionChunk invert_normalization(const ActionChunk& chunk, const NormalizationStats& stats);

}  // namespace fast

#endif  // FAST_NORMALIZE_HPP
