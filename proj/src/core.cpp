#include "fast/core.hpp"

#include <cmath>
#include <string>

namespace fast {

ActionChunk::ActionChunk(std::size_t horizon, std::size_t dim, std::vector<double> values,
                         double frequency_hz)
    : horizon_(horizon), dim_(dim), values_(std::move(values)), frequency_hz_(frequency_hz) {}

ActionChunk ActionChunk::from_rows(const std::vector<std::vector<double>>& rows,
                                   double frequency_hz) {
    if (rows.empty() || rows.front().empty()) {
        throw ShapeError("action chunk needs at least one timestep and one dimension");
    }
    const std::size_t dim = rows.front().size();
    std::vector<double> values;
    values.reserve(rows.size() * dim);
    for (std::size_t t = 0; t < rows.size(); ++t) {
        if (rows[t].size() != dim) {
            throw ShapeError("ragged action chunk: row " + std::to_string(t) + " has " +
                             std::to_string(rows[t].size()) + " values, expected " +
                             std::to_string(dim));
        }
        values.insert(values.end(), rows[t].begin(), rows[t].end());
    }
    return ActionChunk(rows.size(), dim, std::move(values), frequency_hz);
}

std::vector<std::vector<double>> ActionChunk::to_rows() const {
    std::vector<std::vector<double>> rows(horizon_);
    for (std::size_t t = 0; t < horizon_; ++t) {
        auto r = row(t);
        rows[t].assign(r.begin(), r.end());
    }
    return rows;
}

void validate_chunk(const ActionChunk& chunk) {
    if (chunk.horizon() == 0 || chunk.dim() == 0) {
        throw ShapeError("action chunk must have H >= 1 and D >= 1");
    }
    if (chunk.values().size() != chunk.horizon() * chunk.dim()) {
        throw ShapeError("action chunk declares " + std::to_string(chunk.horizon()) + "x" +
                         std::to_string(chunk.dim()) + " but holds " +
                         std::to_string(chunk.values().size()) + " values");
    }
    for (double v : chunk.values()) {
        if (!std::isfinite(v)) {
            throw NonFiniteError("action chunk contains a non-finite value");
        }
    }
    if (!std::isfinite(chunk.frequency_hz()) || chunk.frequency_hz() <= 0.0) {
        throw ShapeError("action chunk frequency must be positive and finite");
    }
}

std::size_t ChunkCorpus::dim() const {
    if (chunks.empty()) {
        throw EmptyCorpusError("empty corpus");
    }
    const std::size_t d = chunks.front().dim();
    for (const auto& c : chunks) {
        if (c.dim() != d) {
            throw DimMismatchError("corpus '" + name + "' mixes action dimensions " +
                                   std::to_string(d) + " and " + std::to_string(c.dim()));
        }
    }
    return d;
}

void validate_corpus(const ChunkCorpus& corpus) {
    if (!std::isfinite(corpus.weight) || corpus.weight < 0.0) {
        throw ConfigError("corpus weight must be finite and non-negative");
    }
    (void)corpus.dim();
    for (const auto& c : corpus.chunks) {
        validate_chunk(c);
    }
}

}  // namespace fast
