#ifndef FAST_SRC_KERNELS_DETAIL_HPP
#define FAST_SRC_KERNELS_DETAIL_HPP

#include "fast/kernels.hpp"

// Single-row / single-stream bodies shared by the serial and OpenMP kernels.
namespace fast::kernels::detail {

void dct2_row(const CosineTable& table, const double* in, double* out);
void dct3_row(const CosineTable& table, const double* in, double* out);
void count_stream(const std::vector<TokenId>& stream, std::int64_t weight, PairCounts& counts);

}  // namespace fast::kernels::detail

#endif  // FAST_SRC_KERNELS_DETAIL_HPP
