#ifndef FAST_COEFF_CODEC_HPP
#define FAST_COEFF_CODEC_HPP

#include <cstddef>
#include <cstdint>
#include <vector>

#include "fast/core.hpp"

namespace fast {

struct QuantizerConfig {
    double gamma = 10.0;    ///< rounding scale applied before rounding
    std::int32_t clamp = 127;  ///< |quantized| <= clamp

    /// Size of the offset symbol alphabet [0, 2 * clamp].
    std::size_t alphabet_size() const { return 2 * static_cast<std::size_t>(clamp) + 1; }
    friend bool operator==(const QuantizerConfig&, const QuantizerConfig&) = default;
};

/// Throws ConfigError unless gamma > 0 (finite) and clamp >= 1.
void validate_quantizer(const QuantizerConfig& cfg);

/// Flattened, offset quantized coefficients plus the (D, H) shape they came from.
struct SymbolStream {
    std::vector<TokenId> symbols;
    std::size_t dim = 0;
    std::size_t horizon = 0;

    friend bool operator==(const SymbolStream&, const SymbolStream&) = default;
};

/// quantized = clamp(round_half_away(gamma * real), -clamp, clamp).
CoefficientMatrix quantize(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg);

/// real = quantized / gamma.
CoefficientMatrix dequantize(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg);

/// Largest |round(gamma * c)| over the matrix.
std::int64_t max_quantized_magnitude(const CoefficientMatrix& coeffs, double gamma);

/// True when no coefficient would be clamped: |round(gamma * c)| <= clamp for all c.
bool within_clamp(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg);

/// Frequency-major interleave: for k in [0, H), for i in [0, D), emit
/// quantized(i, k) + clamp.
SymbolStream flatten_column_first(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg);

/// Inverse of flatten_column_first. Throws LengthMismatchError when the stream
/// length is not D * H, SymbolOutOfRangeError for symbols above 2 * clamp.
CoefficientMatrix unflatten(const SymbolStream& stream, const QuantizerConfig& cfg);

}  // namespace fast

#endif  // FAST_COEFF_CODEC_HPP
