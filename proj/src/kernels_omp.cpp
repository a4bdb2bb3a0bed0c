#include "kernels_detail.hpp"

#ifdef FAST_HAVE_OPENMP
#include <omp.h>
#endif

namespace fast::kernels {

int max_threads() {
#ifdef FAST_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

namespace omp {

void dct2_rows(const CosineTable& table, std::span<const double> in, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(table.horizon());
    const std::ptrdiff_t rows = n == 0 ? 0 : static_cast<std::ptrdiff_t>(in.size()) / n;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        detail::dct2_row(table, in.data() + r * n, out.data() + r * n);
    }
}

void dct3_rows(const CosineTable& table, std::span<const double> in, std::span<double> out) {
    const auto n = static_cast<std::ptrdiff_t>(table.horizon());
    const std::ptrdiff_t rows = n == 0 ? 0 : static_cast<std::ptrdiff_t>(in.size()) / n;
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t r = 0; r < rows; ++r) {
        detail::dct3_row(table, in.data() + r * n, out.data() + r * n);
    }
}

PairCounts count_pairs(const std::vector<std::vector<TokenId>>& streams,
                       std::span<const std::int64_t> weights) {
    const int threads = max_threads();
    std::vector<PairCounts> partial(static_cast<std::size_t>(threads));
    const auto n_streams = static_cast<std::ptrdiff_t>(streams.size());

#pragma omp parallel num_threads(threads)
    {
#ifdef FAST_HAVE_OPENMP
        auto& local = partial[static_cast<std::size_t>(omp_get_thread_num())];
#else
        auto& local = partial[0];
#endif
#pragma omp for schedule(static)
        for (std::ptrdiff_t s = 0; s < n_streams; ++s) {
            const auto idx = static_cast<std::size_t>(s);
            detail::count_stream(streams[idx], weights[idx], local);
        }
    }

    // Integer sums: the reduction order does not affect the result.
    PairCounts counts = std::move(partial[0]);
    for (std::size_t p = 1; p < partial.size(); ++p) {
        for (const auto& [key, s] : partial[p]) {
            auto& dst = counts[key];
            dst.weighted += s.weighted;
            dst.raw += s.raw;
        }
    }
    return counts;
}

}  // namespace omp

}  // namespace fast::kernels
