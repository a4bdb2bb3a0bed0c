#include "kernels_detail.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

namespace fast::kernels {

CosineTable::CosineTable(std::size_t horizon)
    : horizon_(horizon),
      dc_scale_(std::sqrt(1.0 / static_cast<double>(horizon))),
      ac_scale_(std::sqrt(2.0 / static_cast<double>(horizon))),
      table_(horizon * horizon) {
    const double h = static_cast<double>(horizon);
    for (std::size_t k = 0; k < horizon; ++k) {
        for (std::size_t t = 0; t < horizon; ++t) {
            table_[k * horizon + t] =
                std::cos(std::numbers::pi * (static_cast<double>(t) + 0.5) *
                         static_cast<double>(k) / h);
        }
    }
}

const CosineTable& cosine_table(std::size_t horizon) {
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<CosineTable>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[horizon];
    if (!slot) {
        slot = std::make_unique<CosineTable>(horizon);
    }
    return *slot;
}

namespace detail {

void dct2_row(const CosineTable& table, const double* in, double* out) {
    const std::size_t n = table.horizon();
    for (std::size_t k = 0; k < n; ++k) {
        double acc = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            acc += in[t] * table.cos_at(k, t);
        }
        out[k] = table.scale(k) * acc;
    }
}

void dct3_row(const CosineTable& table, const double* in, double* out) {
    // k-outer so the table is read row by row; each out[t] still sums over
    // ascending k.
    const std::size_t n = table.horizon();
    std::fill(out, out + n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        const double w = table.scale(k) * in[k];
        const double* row = &table.cos_at(k, 0);
        for (std::size_t t = 0; t < n; ++t) {
            out[t] += w * row[t];
        }
    }
}

void count_stream(const std::vector<TokenId>& stream, std::int64_t weight, PairCounts& counts) {
    for (std::size_t p = 0; p + 1 < stream.size(); ++p) {
        auto& s = counts[pair_key(stream[p], stream[p + 1])];
        s.weighted += weight;
        s.raw += 1;
    }
}

}  // namespace detail

namespace serial {

void dct2_rows(const CosineTable& table, std::span<const double> in, std::span<double> out) {
    const std::size_t n = table.horizon();
    const std::size_t rows = n == 0 ? 0 : in.size() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        detail::dct2_row(table, in.data() + r * n, out.data() + r * n);
    }
}

void dct3_rows(const CosineTable& table, std::span<const double> in, std::span<double> out) {
    const std::size_t n = table.horizon();
    const std::size_t rows = n == 0 ? 0 : in.size() / n;
    for (std::size_t r = 0; r < rows; ++r) {
        detail::dct3_row(table, in.data() + r * n, out.data() + r * n);
    }
}

PairCounts count_pairs(const std::vector<std::vector<TokenId>>& streams,
                       std::span<const std::int64_t> weights) {
    PairCounts counts;
    for (std::size_t s = 0; s < streams.size(); ++s) {
        detail::count_stream(streams[s], weights[s], counts);
    }
    return counts;
}

}  // namespace serial

}  // namespace fast::kernels
