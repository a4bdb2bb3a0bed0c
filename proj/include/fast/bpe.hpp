#ifndef FAST_BPE_HPP
#define FAST_BPE_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "fast/coeff_codec.hpp"
#include "fast/core.hpp"

namespace fast {

using MergePair = std::pair<TokenId, TokenId>;

/**
 * Ordered BPE merges over an integer base alphabet [0, base_size).
 * Merge r creates token id base_size + r. Immutable once built; construction
 * checks that every merge only references ids that already exist.
 */
class MergeTable {
public:
    MergeTable() = default;
    MergeTable(std::size_t base_size, std::vector<MergePair> merges);

    std::size_t base_size() const { return base_size_; }
    std::size_t vocab_size() const { return base_size_ + merges_.size(); }
    const std::vector<MergePair>& merges() const { return merges_; }

    /// Rank (merge index) of the pair, if it is a merge.
    std::optional<std::size_t> rank(TokenId left, TokenId right) const;
    /// Base symbols a token expands to.
    std::span<const TokenId> expansion(TokenId token) const;

    friend bool operator==(const MergeTable& a, const MergeTable& b) {
        return a.base_size_ == b.base_size_ && a.merges_ == b.merges_;
    }

private:
    std::size_t base_size_ = 0;
    std::vector<MergePair> merges_;
    std::unordered_map<std::uint64_t, std::size_t> ranks_;
    std::vector<std::size_t> expansion_offset_;
    std::vector<TokenId> expansion_data_;
};

/**
 * Greedy BPE training. Each round merges the adjacent pair with the largest
 * weighted count (overlapping occurrences counted), ties going to the
 * smallest (left, right). Stops at max_vocab or when no pair occurs at least
 * twice. Pairs never span stream boundaries.
 *
 * `weights` (optional, one per stream, non-negative) scale each stream's pair
 * counts; they are converted to fixed-point integers so counting is exact.
 */
MergeTable train_bpe(const std::vector<std::vector<TokenId>>& streams, std::size_t base_size,
                     std::size_t max_vocab, std::span<const double> weights = {});

MergeTable train_bpe(const std::vector<SymbolStream>& streams, std::size_t base_size,
                     std::size_t max_vocab, std::span<const double> weights = {});

/// Applies merges in training order, each exhaustively left to right.
TokenSequence bpe_encode(std::span<const TokenId> symbols, const MergeTable& table);
inline TokenSequence bpe_encode(const SymbolStream& stream, const MergeTable& table) {
    return bpe_encode(stream.symbols, table);
}

/// Expands tokens back to base symbols. Throws TokenOutOfRangeError.
std::vector<TokenId> bpe_decode(const TokenSequence& tokens, const MergeTable& table);

}  // namespace fast

#endif  // FAST_BPE_HPP
