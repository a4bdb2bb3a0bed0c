#ifndef FAST_KERNELS_HPP
#define FAST_KERNELS_HPP

// Data-parallel inner loops. Each kernel has a serial reference version and an
// OpenMP version with identical results (bit-for-bit: the parallel versions
// only split independent rows/streams and reduce integers).

#include <cstddef>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <vector>

#include "fast/core.hpp"

namespace fast::kernels {

/// cos(pi (t + 1/2) k / H) for all k, t < H, stored k-major, plus the
/// orthonormal scale factors sqrt(1/H), sqrt(2/H).
class CosineTable {
public:
    explicit CosineTable(std::size_t horizon);

    std::size_t horizon() const { return horizon_; }
    const double& cos_at(std::size_t k, std::size_t t) const { return table_[k * horizon_ + t]; }
    double scale(std::size_t k) const { return k == 0 ? dc_scale_ : ac_scale_; }

private:
    std::size_t horizon_;
    double dc_scale_;
    double ac_scale_;
    std::vector<double> table_;
};

/// Shared, lazily built table for horizon H. Thread-safe; entries are never freed.
const CosineTable& cosine_table(std::size_t horizon);

struct PairStats {
    std::int64_t weighted = 0;  ///< sum of stream weights (fixed-point units)
    std::int64_t raw = 0;       ///< plain occurrence count
    friend bool operator==(const PairStats&, const PairStats&) = default;
};

/// Key packing two token ids: (left << 32) | right.
inline std::uint64_t pair_key(TokenId left, TokenId right) {
    return (static_cast<std::uint64_t>(left) << 32) | right;
}
inline TokenId pair_left(std::uint64_t key) { return static_cast<TokenId>(key >> 32); }
inline TokenId pair_right(std::uint64_t key) { return static_cast<TokenId>(key & 0xffffffffu); }

using PairCounts = std::unordered_map<std::uint64_t, PairStats>;

namespace serial {

/// Orthonormal DCT-II of each length-H row of `in` (rows * H values) into `out`.
void dct2_rows(const CosineTable& table, std::span<const double> in, std::span<double> out);
/// Orthonormal DCT-III (inverse of dct2_rows).
void dct3_rows(const CosineTable& table, std::span<const double> in, std::span<double> out);
/// Counts every adjacent pair (overlapping) in every stream.
PairCounts count_pairs(const std::vector<std::vector<TokenId>>& streams,
                       std::span<const std::int64_t> weights);

}  // namespace serial

namespace omp {

void dct2_rows(const CosineTable& table, std::span<const double> in, std::span<double> out);
void dct3_rows(const CosineTable& table, std::span<const double> in, std::span<double> out);
PairCounts count_pairs(const std::vector<std::vector<TokenId>>& streams,
                       std::span<const std::int64_t> weights);

}  // namespace omp

/// Number of worker threads the OpenMP kernels will use (1 without OpenMP).
int max_threads();

}  // namespace fast::kernels

#endif  // FAST_KERNELS_HPP
