#ifndef FAST_CORE_HPP
#define FAST_CORE_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace fast {

// ---------------------------------------------------------------------------
// Error taxonomy. Every failure raised by the library derives from Error so
// callers can catch one type; the subclasses name the contract that broke.
// ---------------------------------------------------------------------------

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ShapeError : public Error { using Error::Error; };
class NonFiniteError : public Error { using Error::Error; };
class EmptyCorpusError : public Error { using Error::Error; };
class DimMismatchError : public Error { using Error::Error; };
class DimTooLargeError : public Error { using Error::Error; };
class LengthMismatchError : public Error { using Error::Error; };
class SymbolOutOfRangeError : public Error { using Error::Error; };
class TokenOutOfRangeError : public Error { using Error::Error; };
class ConfigError : public Error { using Error::Error; };
/// Model or corpus file could not be parsed.
class FormatError : public Error { using Error::Error; };
/// Model file checksum did not validate.
class IntegrityError : public Error { using Error::Error; };

using TokenId = std::uint32_t;

/// (H, D) pair describing chunk geometry.
struct ChunkShape {
    std::size_t horizon = 0;
    std::size_t dim = 0;

    std::size_t size() const { return horizon * dim; }
    friend bool operator==(const ChunkShape&, const ChunkShape&) = default;
    friend auto operator<=>(const ChunkShape&, const ChunkShape&) = default;
};

/**
 * An H x D block of continuous actions: row t is the action at timestep t,
 * column i is action dimension i. Storage is row-major.
 *
 * Construction does not validate; call validate_chunk() (every pipeline entry
 * point does) to check the declared shape against the stored values.
 */
class ActionChunk {
public:
    ActionChunk() = default;
    ActionChunk(std::size_t horizon, std::size_t dim, std::vector<double> values,
                double frequency_hz);

    /// Builds a chunk from per-timestep rows. Throws ShapeError on ragged or empty input.
    static ActionChunk from_rows(const std::vector<std::vector<double>>& rows,
                                 double frequency_hz);

    std::size_t horizon() const { return horizon_; }
    std::size_t dim() const { return dim_; }
    ChunkShape shape() const { return {horizon_, dim_}; }
    double frequency_hz() const { return frequency_hz_; }

    double at(std::size_t t, std::size_t i) const { return values_[t * dim_ + i]; }
    std::span<const double> values() const { return values_; }
    std::span<const double> row(std::size_t t) const {
        return std::span<const double>(values_).subspan(t * dim_, dim_);
    }

    std::vector<std::vector<double>> to_rows() const;

private:
    std::size_t horizon_ = 0;
    std::size_t dim_ = 0;
    std::vector<double> values_;
    double frequency_hz_ = 0.0;
};

/// Throws ShapeError or NonFiniteError when the chunk invariants do not hold.
void validate_chunk(const ActionChunk& chunk);

/// A named collection of chunks sharing one action dimension.
struct ChunkCorpus {
    std::vector<ActionChunk> chunks;
    std::string name;
    double weight = 1.0;

    bool empty() const { return chunks.empty(); }
    std::size_t size() const { return chunks.size(); }
    /// Common action dimension. Throws EmptyCorpusError / DimMismatchError.
    std::size_t dim() const;
};

/// Checks every chunk and the shared-dimension / finite-weight invariants.
void validate_corpus(const ChunkCorpus& corpus);

struct TokenSequence {
    std::vector<TokenId> ids;

    std::size_t size() const { return ids.size(); }
    bool empty() const { return ids.empty(); }
    friend bool operator==(const TokenSequence&, const TokenSequence&) = default;
};

/**
 * Per-dimension DCT coefficients. Row i holds the H coefficients of action
 * dimension i (row-major, D x H), lowest frequency first.
 */
struct CoefficientMatrix {
    std::size_t dim = 0;
    std::size_t horizon = 0;
    std::vector<double> real;
    std::optional<std::vector<std::int32_t>> quantized;

    double real_at(std::size_t i, std::size_t k) const { return real[i * horizon + k]; }
    std::int32_t quantized_at(std::size_t i, std::size_t k) const {
        return (*quantized)[i * horizon + k];
    }
};

}  // namespace fast

#endif  // FAST_CORE_HPP
