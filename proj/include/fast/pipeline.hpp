#ifndef FAST_PIPELINE_HPP
#define FAST_PIPELINE_HPP

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fast/bpe.hpp"
#include "fast/coeff_codec.hpp"
#include "fast/core.hpp"
#include "fast/normalize.hpp"

namespace fast {

inline constexpr int kModelFormatVersion = 1;
inline constexpr std::size_t kDefaultVocab = 1024;
inline constexpr double kDefaultGamma = 10.0;
inline constexpr std::size_t kDefaultPadDim = 32;

/**
 * A fitted FAST tokenizer: normalization stats, quantizer settings, the BPE
 * merge table and the chunk geometry used when decoding without an explicit
 * shape. `pad_dim` is non-zero for universal models, whose stats and token
 * streams are laid out over `pad_dim` dimensions.
 */
struct TokenizerModel {
    NormalizationStats stats;
    QuantizerConfig quantizer;
    MergeTable merges;
    ChunkShape default_shape;
    std::size_t pad_dim = 0;
    int format_version = kModelFormatVersion;
    std::map<std::string, std::string> metadata;

    std::size_t vocab_size() const { return merges.vocab_size(); }
    bool universal() const { return pad_dim != 0; }
    /// Number of dimensions in the token stream layout.
    std::size_t stream_dim() const { return stats.dim(); }
};

/// Throws ConfigError when the model's parts are mutually inconsistent.
void validate_model(const TokenizerModel& model);

inline constexpr std::int32_t kDefaultClamp = 127;

struct FitOptions {
    double gamma = kDefaultGamma;
    std::size_t max_vocab = kDefaultVocab;
    /// Quantized magnitude bound. nullopt sizes it to the fitting corpus: the
    /// smallest value >= kDefaultClamp that clamps no coefficient, capped so
    /// that the base alphabet 2 * clamp + 1 still fits in max_vocab.
    std::optional<std::int32_t> clamp = kDefaultClamp;
};

/// Fits normalization, transforms/quantizes/flattens every chunk and trains BPE.
TokenizerModel fast_fit(const ChunkCorpus& corpus, const FitOptions& options = {});

/// normalize -> DCT -> quantize -> column-first flatten -> BPE.
TokenSequence fast_encode(const ActionChunk& chunk, const TokenizerModel& model);

/// Inverse of fast_encode. `shape` overrides the model's default (H, D).
/// Throws LengthMismatchError if the tokens do not expand to H * D symbols.
ActionChunk fast_decode(const TokenSequence& tokens, const TokenizerModel& model,
                        std::optional<ChunkShape> shape = std::nullopt);

/// Order-preserving parallel batch forms.
std::vector<TokenSequence> fast_encode_batch(std::span<const ActionChunk> chunks,
                                             const TokenizerModel& model);

/// Pre-BPE symbol stream for a chunk (normalize, DCT, quantize, flatten).
SymbolStream fast_symbols(const ActionChunk& chunk, const TokenizerModel& model);

// ---------------------------------------------------------------------------
// Naive per-timestep binning baseline.
// ---------------------------------------------------------------------------

struct BinningConfig {
    std::size_t bins = 256;
};

void validate_binning(const BinningConfig& cfg);

/// Normalized value -> bin index, clamped to [0, N - 1].
std::size_t bin_index(double normalized, const BinningConfig& cfg);
/// Bin index -> normalized bin center.
double bin_center(std::size_t bin, const BinningConfig& cfg);

/// Timestep-major H * D bin indices of the normalized chunk.
TokenSequence naive_encode(const ActionChunk& chunk, const NormalizationStats& stats,
                           const BinningConfig& cfg = {});

ActionChunk naive_decode(const TokenSequence& tokens, const NormalizationStats& stats,
                         const BinningConfig& cfg, ChunkShape shape);

// ---------------------------------------------------------------------------
// Universal tokenizer.
// ---------------------------------------------------------------------------

/// Appends zero-valued dimensions up to pad_dim. Throws DimTooLargeError.
ActionChunk pad_chunk(const ActionChunk& chunk, std::size_t pad_dim);

/// Pads every chunk to pad_dim, pools all corpora for normalization and
/// trains BPE with each stream weighted by its corpus weight.
TokenizerModel universal_fit(const std::vector<ChunkCorpus>& corpora,
                             const FitOptions& options = {},
                             std::size_t pad_dim = kDefaultPadDim);

// ---------------------------------------------------------------------------
// Token accounting.
// ---------------------------------------------------------------------------

/// round(frequency_hz * seconds) * dim.
std::size_t naive_token_count(double frequency_hz, std::size_t dim, double seconds = 1.0);
std::size_t naive_token_count(const ActionChunk& chunk);
std::size_t fast_token_count(const ActionChunk& chunk, const TokenizerModel& model);
double compression_ratio(double naive_count, double fast_count);
double compression_ratio(const ActionChunk& chunk, const TokenizerModel& model);

}  // namespace fast

#endif  // FAST_PIPELINE_HPP
