#ifndef FAST_TRANSFORM_HPP
#define FAST_TRANSFORM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "fast/core.hpp"

namespace fast {

/// Orthonormal DCT-II of every action dimension independently. Row i of the
/// result holds the coefficients of column i of the chunk, k = 0 first.
CoefficientMatrix dct_forward(const ActionChunk& chunk);

/// Orthonormal DCT-III of every coefficient row; exact inverse of dct_forward.
/// Throws ShapeError if `horizon` does not match the coefficient rows.
ActionChunk dct_inverse(const CoefficientMatrix& coeffs, std::size_t horizon,
                        double frequency_hz = 0.0);

/// Batch forms: chunks are processed in parallel, results are order-preserving.
std::vector<CoefficientMatrix> dct_forward_batch(std::span<const ActionChunk> chunks);

}  // namespace fast

#endif  // FAST_TRANSFORM_HPP
