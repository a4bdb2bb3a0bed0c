#include "fast/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <sstream>
#include <string>

#include "fast/transform.hpp"
#include "parallel_for.hpp"

namespace fast {

void validate_model(const TokenizerModel& model) {
    validate_stats(model.stats);
    validate_quantizer(model.quantizer);
    if (model.merges.base_size() != model.quantizer.alphabet_size()) {
        throw ConfigError("merge table base alphabet does not match the quantizer clamp");
    }
    if (model.universal()) {
        if (model.stats.dim() != model.pad_dim) {
            throw ConfigError("universal model stats must cover pad_dim dimensions");
        }
        if (model.default_shape.dim > model.pad_dim) {
            throw ConfigError("default shape exceeds pad_dim");
        }
    } else if (model.default_shape.dim != model.stats.dim()) {
        throw ConfigError("default shape dimension does not match normalization stats");
    }
    if (model.default_shape.horizon == 0 || model.default_shape.dim == 0) {
        throw ConfigError("default shape must be non-empty");
    }
}

namespace {

ChunkShape modal_shape(const std::vector<const ActionChunk*>& chunks) {
    std::map<ChunkShape, std::size_t> tally;
    for (const ActionChunk* c : chunks) {
        ++tally[c->shape()];
    }
    ChunkShape best{};
    std::size_t best_count = 0;
    // std::map iterates in ascending shape order, so ties keep the smallest shape.
    for (const auto& [shape, count] : tally) {
        if (count > best_count) {
            best = shape;
            best_count = count;
        }
    }
    return best;
}

CoefficientMatrix coefficients_for_layout(const ActionChunk& laid_out,
                                          const NormalizationStats& stats) {
    return dct_forward(apply_normalization(laid_out, stats));
}

SymbolStream symbols_for_layout(const ActionChunk& laid_out, const NormalizationStats& stats,
                                const QuantizerConfig& quantizer) {
    return flatten_column_first(quantize(coefficients_for_layout(laid_out, stats), quantizer),
                                quantizer);
}

// Shared tail of fast_fit / universal_fit: chunks are already padded to the
// stream layout, stats are fitted.
TokenizerModel fit_on_layout(const std::vector<ActionChunk>& chunks,
                             const std::vector<double>& weights, NormalizationStats stats,
                             const FitOptions& options) {
    std::vector<CoefficientMatrix> coeffs(chunks.size());
    detail::parallel_for(chunks.size(), [&](std::size_t i) {
        coeffs[i] = coefficients_for_layout(chunks[i], stats);
    });

    QuantizerConfig quantizer{options.gamma, options.clamp.value_or(kDefaultClamp)};
    validate_quantizer(quantizer);
    if (!options.clamp) {
        std::int64_t needed = kDefaultClamp;
        for (const auto& c : coeffs) {
            needed = std::max(needed, max_quantized_magnitude(c, options.gamma));
        }
        // The base alphabet 2 * clamp + 1 must fit in the vocabulary budget.
        const auto budget = static_cast<std::int64_t>(
            std::min<std::size_t>(options.max_vocab, std::numeric_limits<std::int32_t>::max()));
        const std::int64_t cap = std::max<std::int64_t>(kDefaultClamp, (budget - 1) / 2);
        quantizer.clamp = static_cast<std::int32_t>(std::min(needed, cap));
    }

    std::vector<SymbolStream> streams(chunks.size());
    detail::parallel_for(chunks.size(), [&](std::size_t i) {
        streams[i] = flatten_column_first(quantize(coeffs[i], quantizer), quantizer);
    });

    TokenizerModel model;
    model.merges = train_bpe(streams, quantizer.alphabet_size(), options.max_vocab, weights);
    model.stats = std::move(stats);
    model.quantizer = quantizer;
    model.metadata["max_vocab"] = std::to_string(options.max_vocab);
    return model;
}

std::string format_weight(double w) {
    std::ostringstream os;
    os.precision(17);
    os << w;
    return os.str();
}

}  // namespace

TokenizerModel fast_fit(const ChunkCorpus& corpus, const FitOptions& options) {
    if (corpus.empty()) {
        throw EmptyCorpusError("empty corpus");
    }
    validate_corpus(corpus);

    std::vector<const ActionChunk*> refs;
    for (const auto& c : corpus.chunks) {
        refs.push_back(&c);
    }
    std::vector<double> weights(corpus.size(), 1.0);
    TokenizerModel model =
        fit_on_layout(corpus.chunks, weights, fit_normalization(corpus), options);
    model.default_shape = modal_shape(refs);
    model.metadata["corpora"] = corpus.name;
    model.metadata["chunks"] = std::to_string(corpus.size());
    validate_model(model);
    return model;
}

ActionChunk pad_chunk(const ActionChunk& chunk, std::size_t pad_dim) {
    if (chunk.dim() > pad_dim) {
        throw DimTooLargeError("chunk has " + std::to_string(chunk.dim()) +
                               " dimensions, more than pad_dim " + std::to_string(pad_dim));
    }
    if (chunk.dim() == pad_dim) {
        return chunk;
    }
    std::vector<double> values(chunk.horizon() * pad_dim, 0.0);
    for (std::size_t t = 0; t < chunk.horizon(); ++t) {
        auto row = chunk.row(t);
        std::copy(row.begin(), row.end(), values.begin() + static_cast<std::ptrdiff_t>(t * pad_dim));
    }
    return ActionChunk(chunk.horizon(), pad_dim, std::move(values), chunk.frequency_hz());
}

TokenizerModel universal_fit(const std::vector<ChunkCorpus>& corpora, const FitOptions& options,
                             std::size_t pad_dim) {
    if (pad_dim == 0) {
        throw ConfigError("pad_dim must be positive");
    }
    ChunkCorpus pooled;
    pooled.name = "universal";
    std::vector<double> weights;
    std::vector<const ActionChunk*> originals;
    std::string names;
    std::string weight_list;
    for (const auto& corpus : corpora) {
        if (corpus.empty()) {
            continue;
        }
        validate_corpus(corpus);
        if (corpus.dim() > pad_dim) {
            throw DimTooLargeError("corpus '" + corpus.name + "' has " +
                                   std::to_string(corpus.dim()) +
                                   " dimensions, more than pad_dim " + std::to_string(pad_dim));
        }
        for (const auto& c : corpus.chunks) {
            pooled.chunks.push_back(pad_chunk(c, pad_dim));
            weights.push_back(corpus.weight);
            originals.push_back(&c);
        }
        names += (names.empty() ? "" : ",") + corpus.name;
        weight_list += (weight_list.empty() ? "" : ",") + format_weight(corpus.weight);
    }
    if (pooled.empty()) {
        throw EmptyCorpusError("empty corpus");
    }

    TokenizerModel model =
        fit_on_layout(pooled.chunks, weights, fit_normalization(pooled), options);
    model.pad_dim = pad_dim;
    model.default_shape = modal_shape(originals);
    model.metadata["corpora"] = names;
    model.metadata["corpus_weights"] = weight_list;
    model.metadata["chunks"] = std::to_string(pooled.size());
    validate_model(model);
    return model;
}

SymbolStream fast_symbols(const ActionChunk& chunk, const TokenizerModel& model) {
    validate_chunk(chunk);
    if (model.universal()) {
        return symbols_for_layout(pad_chunk(chunk, model.pad_dim), model.stats, model.quantizer);
    }
    if (chunk.dim() != model.stats.dim()) {
        throw DimMismatchError("chunk has " + std::to_string(chunk.dim()) +
                               " dimensions, model expects " +
                               std::to_string(model.stats.dim()));
    }
    return symbols_for_layout(chunk, model.stats, model.quantizer);
}

TokenSequence fast_encode(const ActionChunk& chunk, const TokenizerModel& model) {
    return bpe_encode(fast_symbols(chunk, model), model.merges);
}

std::vector<TokenSequence> fast_encode_batch(std::span<const ActionChunk> chunks,
                                             const TokenizerModel& model) {
    std::vector<TokenSequence> out(chunks.size());
    detail::parallel_for(chunks.size(),
                            [&](std::size_t i) { out[i] = fast_encode(chunks[i], model); });
    return out;
}

ActionChunk fast_decode(const TokenSequence& tokens, const TokenizerModel& model,
                        std::optional<ChunkShape> shape) {
    const ChunkShape target = shape.value_or(model.default_shape);
    if (target.horizon == 0 || target.dim == 0) {
        throw ShapeError("decode shape must have H >= 1 and D >= 1");
    }
    if (model.universal()) {
        if (target.dim > model.pad_dim) {
            throw DimTooLargeError("decode dimension " + std::to_string(target.dim) +
                                   " exceeds pad_dim " + std::to_string(model.pad_dim));
        }
    } else if (target.dim != model.stats.dim()) {
        throw DimMismatchError("decode dimension " + std::to_string(target.dim) +
                               " does not match model dimension " +
                               std::to_string(model.stats.dim()));
    }

    SymbolStream stream;
    stream.symbols = bpe_decode(tokens, model.merges);
    stream.dim = model.stream_dim();
    stream.horizon = target.horizon;
    const CoefficientMatrix coeffs =
        dequantize(unflatten(stream, model.quantizer), model.quantizer);
    const ActionChunk raw =
        invert_normalization(dct_inverse(coeffs, target.horizon), model.stats);
    if (raw.dim() == target.dim) {
        return raw;
    }

    std::vector<double> values;
    values.reserve(target.size());
    for (std::size_t t = 0; t < target.horizon; ++t) {
        auto row = raw.row(t).first(target.dim);
        values.insert(values.end(), row.begin(), row.end());
    }
    return ActionChunk(target.horizon, target.dim, std::move(values), raw.frequency_hz());
}

void validate_binning(const BinningConfig& cfg) {
    if (cfg.bins < 2) {
        throw ConfigError("binning needs at least 2 bins");
    }
}

std::size_t bin_index(double normalized, const BinningConfig& cfg) {
    const double n = static_cast<double>(cfg.bins);
    const double raw = std::floor((normalized + 1.0) / 2.0 * n);
    return static_cast<std::size_t>(std::clamp(raw, 0.0, n - 1.0));
}

double bin_center(std::size_t bin, const BinningConfig& cfg) {
    return 2.0 * (static_cast<double>(bin) + 0.5) / static_cast<double>(cfg.bins) - 1.0;
}

TokenSequence naive_encode(const ActionChunk& chunk, const NormalizationStats& stats,
                           const BinningConfig& cfg) {
    validate_binning(cfg);
    validate_chunk(chunk);
    const ActionChunk normalized = apply_normalization(chunk, stats);
    TokenSequence out;
    out.ids.reserve(normalized.values().size());
    // values() is row-major: timestep-major, then dimension.
    for (double x : normalized.values()) {
        out.ids.push_back(static_cast<TokenId>(bin_index(x, cfg)));
    }
    return out;
}

ActionChunk naive_decode(const TokenSequence& tokens, const NormalizationStats& stats,
                         const BinningConfig& cfg, ChunkShape shape) {
    validate_binning(cfg);
    if (tokens.size() != shape.size()) {
        throw LengthMismatchError("naive decode got " + std::to_string(tokens.size()) +
                                  " tokens for shape " + std::to_string(shape.horizon) + "x" +
                                  std::to_string(shape.dim));
    }
    std::vector<double> values;
    values.reserve(tokens.size());
    for (TokenId t : tokens.ids) {
        if (t >= cfg.bins) {
            throw TokenOutOfRangeError("bin " + std::to_string(t) + " outside " +
                                       std::to_string(cfg.bins) + " bins");
        }
        values.push_back(bin_center(t, cfg));
    }
    return invert_normalization(
        ActionChunk(shape.horizon, shape.dim, std::move(values),
                    static_cast<double>(shape.horizon)),
        stats);
}

std::size_t naive_token_count(double frequency_hz, std::size_t dim, double seconds) {
    return static_cast<std::size_t>(std::llround(frequency_hz * seconds)) * dim;
}

std::size_t naive_token_count(const ActionChunk& chunk) {
    return chunk.horizon() * chunk.dim();
}

std::size_t fast_token_count(const ActionChunk& chunk, const TokenizerModel& model) {
    return fast_encode(chunk, model).size();
}

double compression_ratio(double naive_count, double fast_count) {
    if (fast_count <= 0.0) {
        throw ConfigError("compression ratio needs a positive token count");
    }
    return naive_count / fast_count;
}

double compression_ratio(const ActionChunk& chunk, const TokenizerModel& model) {
    return compression_ratio(static_cast<double>(naive_token_count(chunk)),
                             static_cast<double>(fast_token_count(chunk, model)));
}

}  // namespace fast
