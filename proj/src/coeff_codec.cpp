#include "fast/coeff_codec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace fast {

void validate_quantizer(const QuantizerConfig& cfg) {
    if (!std::isfinite(cfg.gamma) || cfg.gamma <= 0.0) {
        throw ConfigError("rounding scale gamma must be positive and finite");
    }
    if (cfg.clamp < 1) {
        throw ConfigError("coefficient clamp must be >= 1");
    }
}

namespace {

double scaled_round(double value, double gamma) {
    // std::round rounds halfway cases away from zero.
    return std::round(gamma * value);
}

}  // namespace

CoefficientMatrix quantize(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg) {
    validate_quantizer(cfg);
    CoefficientMatrix out = coeffs;
    const double limit = cfg.clamp;
    std::vector<std::int32_t> q(coeffs.real.size());
    for (std::size_t n = 0; n < q.size(); ++n) {
        q[n] = static_cast<std::int32_t>(
            std::clamp(scaled_round(coeffs.real[n], cfg.gamma), -limit, limit));
    }
    out.quantized = std::move(q);
    return out;
}

CoefficientMatrix dequantize(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg) {
    validate_quantizer(cfg);
    if (!coeffs.quantized) {
        throw ShapeError("dequantize needs quantized coefficients");
    }
    CoefficientMatrix out = coeffs;
    out.real.resize(coeffs.quantized->size());
    for (std::size_t n = 0; n < out.real.size(); ++n) {
        out.real[n] = static_cast<double>((*coeffs.quantized)[n]) / cfg.gamma;
    }
    return out;
}

std::int64_t max_quantized_magnitude(const CoefficientMatrix& coeffs, double gamma) {
    double top = 0.0;
    for (double c : coeffs.real) {
        top = std::max(top, std::abs(scaled_round(c, gamma)));
    }
    return static_cast<std::int64_t>(top);
}

bool within_clamp(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg) {
    const double limit = cfg.clamp;
    return std::all_of(coeffs.real.begin(), coeffs.real.end(), [&](double c) {
        return std::abs(scaled_round(c, cfg.gamma)) <= limit;
    });
}

SymbolStream flatten_column_first(const CoefficientMatrix& coeffs, const QuantizerConfig& cfg) {
    if (!coeffs.quantized || coeffs.quantized->size() != coeffs.dim * coeffs.horizon) {
        throw ShapeError("flatten needs a quantized D x H coefficient matrix");
    }
    SymbolStream out;
    out.dim = coeffs.dim;
    out.horizon = coeffs.horizon;
    out.symbols.reserve(coeffs.dim * coeffs.horizon);
    for (std::size_t k = 0; k < coeffs.horizon; ++k) {
        for (std::size_t i = 0; i < coeffs.dim; ++i) {
            const std::int32_t q = coeffs.quantized_at(i, k);
            if (q < -cfg.clamp || q > cfg.clamp) {
                throw SymbolOutOfRangeError("quantized coefficient " + std::to_string(q) +
                                            " outside clamp range");
            }
            out.symbols.push_back(static_cast<TokenId>(q + cfg.clamp));
        }
    }
    return out;
}

CoefficientMatrix unflatten(const SymbolStream& stream, const QuantizerConfig& cfg) {
    const std::size_t d = stream.dim;
    const std::size_t h = stream.horizon;
    if (stream.symbols.size() != d * h) {
        throw LengthMismatchError("symbol stream has " + std::to_string(stream.symbols.size()) +
                                  " symbols, shape (D=" + std::to_string(d) +
                                  ", H=" + std::to_string(h) + ") needs " +
                                  std::to_string(d * h));
    }
    const auto top = static_cast<TokenId>(2 * cfg.clamp);
    CoefficientMatrix out;
    out.dim = d;
    out.horizon = h;
    out.real.assign(d * h, 0.0);
    std::vector<std::int32_t> q(d * h);
    std::size_t n = 0;
    for (std::size_t k = 0; k < h; ++k) {
        for (std::size_t i = 0; i < d; ++i, ++n) {
            const TokenId s = stream.symbols[n];
            if (s > top) {
                throw SymbolOutOfRangeError("symbol " + std::to_string(s) +
                                            " above alphabet maximum " + std::to_string(top));
            }
            q[i * h + k] = static_cast<std::int32_t>(s) - cfg.clamp;
        }
    }
    out.quantized = std::move(q);
    return out;
}

}  // namespace fast
