#include "fast/bpe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <queue>
#include <set>
#include <string>

#include "fast/kernels.hpp"

namespace fast {

using kernels::pair_key;

MergeTable::MergeTable(std::size_t base_size, std::vector<MergePair> merges)
    : base_size_(base_size), merges_(std::move(merges)) {
    expansion_offset_.reserve(vocab_size() + 1);
    expansion_offset_.push_back(0);
    for (std::size_t s = 0; s < base_size_; ++s) {
        expansion_data_.push_back(static_cast<TokenId>(s));
        expansion_offset_.push_back(expansion_data_.size());
    }
    for (std::size_t r = 0; r < merges_.size(); ++r) {
        const auto [left, right] = merges_[r];
        const std::size_t id = base_size_ + r;
        if (left >= id || right >= id) {
            throw ConfigError("merge " + std::to_string(r) + " references token " +
                              std::to_string(std::max(left, right)) +
                              " that does not exist yet");
        }
        if (!ranks_.emplace(pair_key(left, right), r).second) {
            throw ConfigError("duplicate merge pair at rank " + std::to_string(r));
        }
        // Copy through indices: insert may reallocate expansion_data_.
        for (TokenId part : {left, right}) {
            const std::size_t begin = expansion_offset_[part];
            const std::size_t end = expansion_offset_[part + 1];
            for (std::size_t n = begin; n < end; ++n) {
                expansion_data_.push_back(expansion_data_[n]);
            }
        }
        expansion_offset_.push_back(expansion_data_.size());
    }
}

std::optional<std::size_t> MergeTable::rank(TokenId left, TokenId right) const {
    auto it = ranks_.find(pair_key(left, right));
    if (it == ranks_.end()) {
        return std::nullopt;
    }
    return it->second;
}

std::span<const TokenId> MergeTable::expansion(TokenId token) const {
    const std::size_t begin = expansion_offset_[token];
    const std::size_t end = expansion_offset_[token + 1];
    return std::span<const TokenId>(expansion_data_).subspan(begin, end - begin);
}

namespace {

constexpr std::int64_t kNoNode = -1;
constexpr double kWeightUnits = 1e9;

std::vector<std::int64_t> fixed_point_weights(std::size_t n_streams,
                                              std::span<const double> weights) {
    if (weights.empty()) {
        return std::vector<std::int64_t>(n_streams, 1);
    }
    if (weights.size() != n_streams) {
        throw ConfigError("expected one BPE weight per stream");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!std::isfinite(w) || w < 0.0) {
            throw ConfigError("BPE stream weights must be finite and non-negative");
        }
        total += w;
    }
    if (total <= 0.0) {
        throw ConfigError("BPE stream weights sum to zero");
    }
    std::vector<std::int64_t> units(n_streams);
    for (std::size_t s = 0; s < n_streams; ++s) {
        units[s] = std::llround(weights[s] / total * kWeightUnits);
    }
    return units;
}

// Candidate pairs ordered by weighted count (desc), then (left, right) asc.
struct Candidate {
    std::int64_t weighted;
    std::uint64_t key;

    bool operator<(const Candidate& o) const {
        if (weighted != o.weighted) {
            return weighted > o.weighted;
        }
        return key < o.key;
    }
};

class BpeTrainer {
public:
    BpeTrainer(const std::vector<std::vector<TokenId>>& streams,
               const std::vector<std::int64_t>& units, std::size_t base_size) {
        std::vector<std::vector<TokenId>> kept;
        std::vector<std::int64_t> kept_units;
        for (std::size_t s = 0; s < streams.size(); ++s) {
            for (TokenId sym : streams[s]) {
                if (sym >= base_size) {
                    throw SymbolOutOfRangeError("symbol " + std::to_string(sym) +
                                                " outside base alphabet of size " +
                                                std::to_string(base_size));
                }
            }
            if (units[s] > 0 && !streams[s].empty()) {
                kept.push_back(streams[s]);
                kept_units.push_back(units[s]);
            }
        }

        for (std::size_t s = 0; s < kept.size(); ++s) {
            const auto start = static_cast<std::int64_t>(sym_.size());
            const std::size_t len = kept[s].size();
            for (std::size_t p = 0; p < len; ++p) {
                sym_.push_back(kept[s][p]);
                weight_.push_back(kept_units[s]);
                prev_.push_back(p == 0 ? kNoNode : start + static_cast<std::int64_t>(p) - 1);
                next_.push_back(p + 1 == len ? kNoNode
                                             : start + static_cast<std::int64_t>(p) + 1);
            }
        }

        counts_ = kernels::omp::count_pairs(kept, kept_units);
        for (const auto& [key, stats] : counts_) {
            if (stats.raw >= 2) {
                queue_.insert({stats.weighted, key});
            }
        }
        for (std::size_t p = 0; p < sym_.size(); ++p) {
            if (next_[p] != kNoNode) {
                where_[pair_key(sym_[p], sym_[static_cast<std::size_t>(next_[p])])].push_back(
                    static_cast<std::int64_t>(p));
            }
        }
    }

    /// Performs the next merge; returns false when no pair occurs twice.
    bool step(TokenId new_id, MergePair& merged) {
        if (queue_.empty()) {
            return false;
        }
        const std::uint64_t key = queue_.begin()->key;
        const TokenId a = kernels::pair_left(key);
        const TokenId b = kernels::pair_right(key);
        merged = {a, b};

        std::vector<std::int64_t> positions = std::move(where_[key]);
        where_.erase(key);
        std::sort(positions.begin(), positions.end());
        positions.erase(std::unique(positions.begin(), positions.end()), positions.end());

        for (std::int64_t p : positions) {
            const auto pu = static_cast<std::size_t>(p);
            if (sym_[pu] != a || next_[pu] == kNoNode) {
                continue;
            }
            const auto q = static_cast<std::size_t>(next_[pu]);
            if (sym_[q] != b) {
                continue;
            }
            const std::int64_t x = prev_[pu];
            const std::int64_t y = next_[q];
            const std::int64_t w = weight_[pu];

            if (x != kNoNode) {
                adjust(pair_key(sym_[static_cast<std::size_t>(x)], a), -w, -1);
            }
            adjust(key, -w, -1);
            if (y != kNoNode) {
                adjust(pair_key(b, sym_[static_cast<std::size_t>(y)]), -w, -1);
            }

            sym_[pu] = new_id;
            sym_[q] = kDead;
            next_[pu] = y;
            if (y != kNoNode) {
                prev_[static_cast<std::size_t>(y)] = p;
            }

            if (x != kNoNode) {
                const std::uint64_t k = pair_key(sym_[static_cast<std::size_t>(x)], new_id);
                adjust(k, w, 1);
                where_[k].push_back(x);
            }
            if (y != kNoNode) {
                const std::uint64_t k = pair_key(new_id, sym_[static_cast<std::size_t>(y)]);
                adjust(k, w, 1);
                where_[k].push_back(p);
            }
        }
        return true;
    }

private:
    static constexpr TokenId kDead = ~TokenId{0};

    void adjust(std::uint64_t key, std::int64_t dw, std::int64_t dr) {
        auto& stats = counts_[key];
        if (stats.raw >= 2) {
            queue_.erase({stats.weighted, key});
        }
        stats.weighted += dw;
        stats.raw += dr;
        if (stats.raw >= 2) {
            queue_.insert({stats.weighted, key});
        } else if (stats.raw == 0) {
            counts_.erase(key);
        }
    }

    std::vector<TokenId> sym_;
    std::vector<std::int64_t> weight_;
    std::vector<std::int64_t> prev_;
    std::vector<std::int64_t> next_;
    kernels::PairCounts counts_;
    std::unordered_map<std::uint64_t, std::vector<std::int64_t>> where_;
    std::set<Candidate> queue_;
};

}  // namespace

MergeTable train_bpe(const std::vector<std::vector<TokenId>>& streams, std::size_t base_size,
                     std::size_t max_vocab, std::span<const double> weights) {
    if (streams.empty()) {
        throw EmptyCorpusError("empty corpus: no symbol streams to train BPE on");
    }
    if (base_size == 0 || max_vocab < base_size) {
        throw ConfigError("BPE vocabulary size " + std::to_string(max_vocab) +
                          " is smaller than the base alphabet " + std::to_string(base_size));
    }
    BpeTrainer trainer(streams, fixed_point_weights(streams.size(), weights), base_size);

    std::vector<MergePair> merges;
    while (base_size + merges.size() < max_vocab) {
        MergePair merged;
        if (!trainer.step(static_cast<TokenId>(base_size + merges.size()), merged)) {
            break;
        }
        merges.push_back(merged);
    }
    return MergeTable(base_size, std::move(merges));
}

MergeTable train_bpe(const std::vector<SymbolStream>& streams, std::size_t base_size,
                     std::size_t max_vocab, std::span<const double> weights) {
    std::vector<std::vector<TokenId>> raw;
    raw.reserve(streams.size());
    for (const auto& s : streams) {
        raw.push_back(s.symbols);
    }
    return train_bpe(raw, base_size, max_vocab, weights);
}

TokenSequence bpe_encode(std::span<const TokenId> symbols, const MergeTable& table) {
    const std::size_t n = symbols.size();
    for (TokenId s : symbols) {
        if (s >= table.base_size()) {
            throw SymbolOutOfRangeError("symbol " + std::to_string(s) +
                                        " outside base alphabet of size " +
                                        std::to_string(table.base_size()));
        }
    }
    if (table.merges().empty() || n < 2) {
        return TokenSequence{std::vector<TokenId>(symbols.begin(), symbols.end())};
    }

    std::vector<TokenId> sym(symbols.begin(), symbols.end());
    std::vector<std::int64_t> prev(n);
    std::vector<std::int64_t> next(n);
    for (std::size_t p = 0; p < n; ++p) {
        prev[p] = static_cast<std::int64_t>(p) - 1;
        next[p] = p + 1 < n ? static_cast<std::int64_t>(p) + 1 : kNoNode;
    }

    // (rank, position) min-heap. Merging rank r only creates pairs containing
    // the new token, whose ranks exceed r, so popping in (rank, position)
    // order applies each merge exhaustively left to right before the next.
    using Entry = std::pair<std::size_t, std::int64_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (auto r = table.rank(sym[p], sym[p + 1])) {
            heap.emplace(*r, static_cast<std::int64_t>(p));
        }
    }
    std::vector<bool> alive(n, true);

    while (!heap.empty()) {
        const auto [r, p] = heap.top();
        heap.pop();
        const auto pu = static_cast<std::size_t>(p);
        if (!alive[pu] || next[pu] == kNoNode) {
            continue;
        }
        const auto q = static_cast<std::size_t>(next[pu]);
        auto current = table.rank(sym[pu], sym[q]);
        if (!current || *current != r) {
            continue;
        }
        sym[pu] = static_cast<TokenId>(table.base_size() + r);
        alive[q] = false;
        next[pu] = next[q];
        if (next[q] != kNoNode) {
            prev[static_cast<std::size_t>(next[q])] = p;
        }
        if (prev[pu] != kNoNode) {
            const auto x = static_cast<std::size_t>(prev[pu]);
            if (auto rx = table.rank(sym[x], sym[pu])) {
                heap.emplace(*rx, prev[pu]);
            }
        }
        if (next[pu] != kNoNode) {
            if (auto ry = table.rank(sym[pu], sym[static_cast<std::size_t>(next[pu])])) {
                heap.emplace(*ry, p);
            }
        }
    }

    TokenSequence out;
    for (std::int64_t p = 0; p != kNoNode; p = next[static_cast<std::size_t>(p)]) {
        out.ids.push_back(sym[static_cast<std::size_t>(p)]);
    }
    return out;
}

std::vector<TokenId> bpe_decode(const TokenSequence& tokens, const MergeTable& table) {
    std::vector<TokenId> out;
    out.reserve(tokens.size() * 2);
    for (TokenId t : tokens.ids) {
        if (t >= table.vocab_size()) {
            throw TokenOutOfRangeError("token " + std::to_string(t) +
                                       " outside vocabulary of size " +
                                       std::to_string(table.vocab_size()));
        }
        auto e = table.expansion(t);
        out.insert(out.end(), e.begin(), e.end());
    }
    return out;
}

}  // namespace fast
