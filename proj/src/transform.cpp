#include "fast/transform.hpp"

#include <string>

#include "fast/kernels.hpp"
#include "parallel_for.hpp"

namespace fast {

namespace {

// Below this many multiply-adds a single chunk is transformed on one thread.
constexpr std::size_t kParallelRowWork = std::size_t{1} << 20;

bool use_parallel_rows(std::size_t rows, std::size_t horizon) {
    return rows > 1 && rows * horizon * horizon >= kParallelRowWork;
}

}  // namespace

CoefficientMatrix dct_forward(const ActionChunk& chunk) {
    validate_chunk(chunk);
    const std::size_t h = chunk.horizon();
    const std::size_t d = chunk.dim();

    // Gather columns so each dimension is a contiguous time series.
    std::vector<double> series(d * h);
    for (std::size_t t = 0; t < h; ++t) {
        for (std::size_t i = 0; i < d; ++i) {
            series[i * h + t] = chunk.at(t, i);
        }
    }

    CoefficientMatrix out;
    out.dim = d;
    out.horizon = h;
    out.real.resize(d * h);
    const auto& table = kernels::cosine_table(h);
    if (use_parallel_rows(d, h)) {
        kernels::omp::dct2_rows(table, series, out.real);
    } else {
        kernels::serial::dct2_rows(table, series, out.real);
    }
    return out;
}

ActionChunk dct_inverse(const CoefficientMatrix& coeffs, std::size_t horizon,
                        double frequency_hz) {
    if (horizon == 0 || coeffs.horizon != horizon || coeffs.dim == 0 ||
        coeffs.real.size() != coeffs.dim * coeffs.horizon) {
        throw ShapeError("coefficient matrix " + std::to_string(coeffs.dim) + "x" +
                         std::to_string(coeffs.horizon) + " with " +
                         std::to_string(coeffs.real.size()) +
                         " values cannot be inverted to horizon " + std::to_string(horizon));
    }
    const std::size_t h = horizon;
    const std::size_t d = coeffs.dim;

    std::vector<double> series(d * h);
    const auto& table = kernels::cosine_table(h);
    if (use_parallel_rows(d, h)) {
        kernels::omp::dct3_rows(table, coeffs.real, series);
    } else {
        kernels::serial::dct3_rows(table, coeffs.real, series);
    }

    std::vector<double> values(h * d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t t = 0; t < h; ++t) {
            values[t * d + i] = series[i * h + t];
        }
    }
    if (frequency_hz <= 0.0) {
        frequency_hz = static_cast<double>(h);
    }
    return ActionChunk(h, d, std::move(values), frequency_hz);
}

std::vector<CoefficientMatrix> dct_forward_batch(std::span<const ActionChunk> chunks) {
    std::vector<CoefficientMatrix> out(chunks.size());
    detail::parallel_for(chunks.size(), [&](std::size_t i) { out[i] = dct_forward(chunks[i]); });
    return out;
}

}  // namespace fast
