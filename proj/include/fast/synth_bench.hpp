#ifndef FAST_SYNTH_BENCH_HPP
#define FAST_SYNTH_BENCH_HPP

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fast/core.hpp"
#include "fast/pipeline.hpp"

namespace fast {

/// Natural cubic spline through four evenly spaced knots at x = 0, 1/3, 2/3, 1.
struct SplineSpec {
    std::array<double, 4> control_points{};
    std::uint64_t seed = 0;
    std::size_t sampling_rate = 50;

    /// Control points drawn uniformly from [-1, 1] with a generator seeded by `seed`.
    static SplineSpec random(std::uint64_t seed, std::size_t sampling_rate);
};

/// Value of the natural cubic spline through `control_points` at x in [0, 1].
double eval_natural_spline(const std::array<double, 4>& control_points, double x);

/// Samples the spline at sampling_rate evenly spaced points over [0, 1]
/// (endpoints included). One dimension, frequency_hz = sampling_rate.
ActionChunk gen_spline_chunk(const SplineSpec& spec);

/// One spline per dimension, all sampled at the same rate.
ActionChunk gen_spline_chunk(std::span<const SplineSpec> per_dim);

struct SplineCorpusParams {
    std::size_t n_chunks = 1000;
    std::uint64_t seed = 0;
    std::size_t dim = 1;
};

/// Control-point seeds for a corpus; depend only on (n_chunks, seed, dim), so
/// corpora at different rates resample the same underlying signals.
std::vector<std::uint64_t> spline_seeds(const SplineCorpusParams& params);

ChunkCorpus gen_spline_corpus(const SplineCorpusParams& params, std::size_t sampling_rate);
inline ChunkCorpus gen_spline_corpus(std::size_t n_chunks, std::size_t sampling_rate,
                                     std::uint64_t seed) {
    return gen_spline_corpus(SplineCorpusParams{n_chunks, seed, 1}, sampling_rate);
}

// ---------------------------------------------------------------------------
// Evaluation
// ---------------------------------------------------------------------------

struct BenchRow {
    std::string tokenizer;        ///< "fast" or "naive"
    double axis_value = 0.0;      ///< gamma or sampling rate, 0 when not swept
    std::size_t chunks = 0;
    double mean_token_count = 0.0;
    double mean_naive_count = 0.0;
    double compression_ratio = 0.0;  ///< mean naive count / mean token count
    double mean_rms_error = 0.0;     ///< per-chunk RMS in normalized space, averaged
    double max_dim_rms_error = 0.0;  ///< worst per-dimension RMS over all chunks
    double mean_nonzero_symbols = 0.0;  ///< pre-BPE nonzero coefficients (fast only)
    std::size_t in_clamp_chunks = 0;    ///< chunks with no clamped coefficient (fast only)
    std::size_t vocab_size = 0;
};

struct BenchReport {
    std::string axis;  ///< "gamma", "rate" or "none"
    std::vector<BenchRow> rows;
};

struct NaiveTokenizer {
    NormalizationStats stats;
    BinningConfig binning;
};

BenchRow eval_tokenizer(const ChunkCorpus& corpus, const TokenizerModel& model);
BenchRow eval_tokenizer(const ChunkCorpus& corpus, const NaiveTokenizer& naive);

/// One fit + evaluation per gamma, rows in input order. `clamp` as in FitOptions.
BenchReport sweep_gamma(const ChunkCorpus& corpus, std::span<const double> gammas,
                        std::size_t max_vocab = kDefaultVocab,
                        std::optional<std::int32_t> clamp = kDefaultClamp);

/// Per rate: resample the same spline signals, fit FAST, evaluate FAST and the
/// naive baseline (rows alternate fast, naive per rate).
BenchReport sweep_rate(std::span<const std::size_t> rates, const SplineCorpusParams& params,
                       double gamma = kDefaultGamma, std::size_t max_vocab = kDefaultVocab,
                       std::optional<std::int32_t> clamp = kDefaultClamp);

}  // namespace fast

#endif  // FAST_SYNTH_BENCH_HPP
