#ifndef FAST_MODEL_IO_HPP
#define FAST_MODEL_IO_HPP

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "fast/core.hpp"
#include "fast/pipeline.hpp"
#include "fast/synth_bench.hpp"

namespace fast::io {

inline constexpr const char* kModelFormatName = "fast-action-tokenizer";

// ---------------------------------------------------------------------------
// Model files: pretty-printed JSON with a CRC-32 over the canonical payload.
// ---------------------------------------------------------------------------

std::string model_to_string(const TokenizerModel& model);
/// Throws FormatError (malformed / unknown version) or IntegrityError (checksum).
TokenizerModel model_from_string(const std::string& text);

void save_model(const TokenizerModel& model, const std::filesystem::path& path);
TokenizerModel load_model(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Corpus files: one JSON object per line,
//   {"actions": [[...], ...], "frequency_hz": 50, "label": "..."}
// ---------------------------------------------------------------------------

struct CorpusRecord {
    ActionChunk chunk;
    std::optional<std::string> label;
};

/// Parses every non-blank line; errors carry the 1-based line number.
std::vector<CorpusRecord> read_corpus_records(std::istream& in);
ChunkCorpus read_corpus(const std::filesystem::path& path);
std::string corpus_record_to_line(const ActionChunk& chunk,
                                  const std::optional<std::string>& label = std::nullopt);
void write_corpus(const ChunkCorpus& corpus, const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Token files: one JSON object per line,
//   {"tokens": [...], "horizon": H, "dim": D, "frequency_hz": f}
// horizon / dim / frequency_hz are optional on input.
// ---------------------------------------------------------------------------

struct TokenRecord {
    TokenSequence tokens;
    std::optional<ChunkShape> shape;
    std::optional<double> frequency_hz;
};

std::vector<TokenRecord> read_token_records(std::istream& in);
std::string token_record_to_line(const TokenRecord& record);

// ---------------------------------------------------------------------------
// Bench reports.
// ---------------------------------------------------------------------------

std::string report_to_table(const BenchReport& report);
std::string report_to_json(const BenchReport& report);

/// Writes via a temporary file in the same directory and renames it into
/// place, so readers never observe a partial file.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);
std::string read_file(const std::filesystem::path& path);

}  // namespace fast::io

#endif  // FAST_MODEL_IO_HPP
