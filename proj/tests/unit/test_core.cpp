#include <cmath>
#include <limits>

#include "doctest.h"
#include "fast/core.hpp"

using namespace fast;

TEST_CASE("validate_chunk accepts a well formed 2x3 chunk") {
    ActionChunk c(2, 3, {1, 2, 3, 4, 5, 6}, 10.0);
    CHECK_NOTHROW(validate_chunk(c));
    CHECK(c.at(1, 2) == 6.0);
    CHECK(c.shape() == ChunkShape{2, 3});
}

TEST_CASE("declared horizon that disagrees with the data is a ShapeError") {
    ActionChunk c(3, 3, {1, 2, 3, 4, 5, 6}, 10.0);
    CHECK_THROWS_AS(validate_chunk(c), ShapeError);
    CHECK_THROWS_AS(validate_chunk(ActionChunk(0, 3, {}, 10.0)), ShapeError);
    CHECK_THROWS_AS(validate_chunk(ActionChunk(1, 0, {}, 10.0)), ShapeError);
}

TEST_CASE("non-finite entries are rejected") {
    ActionChunk nan(2, 3, {1, 2, std::nan(""), 4, 5, 6}, 10.0);
    CHECK_THROWS_AS(validate_chunk(nan), NonFiniteError);
    ActionChunk inf(1, 1, {std::numeric_limits<double>::infinity()}, 10.0);
    CHECK_THROWS_AS(validate_chunk(inf), NonFiniteError);
}

TEST_CASE("from_rows builds row-major storage and rejects ragged input") {
    auto c = ActionChunk::from_rows({{1, 2}, {3, 4}, {5, 6}}, 5.0);
    CHECK(c.horizon() == 3);
    CHECK(c.dim() == 2);
    CHECK(c.at(2, 0) == 5.0);
    CHECK(c.to_rows() == std::vector<std::vector<double>>{{1, 2}, {3, 4}, {5, 6}});
    CHECK_THROWS_AS(ActionChunk::from_rows({{1, 2}, {3}}, 5.0), ShapeError);
    CHECK_THROWS_AS(ActionChunk::from_rows({}, 5.0), ShapeError);
}

TEST_CASE("corpus dimension checks") {
    ChunkCorpus corpus;
    CHECK_THROWS_AS(corpus.dim(), EmptyCorpusError);
    corpus.chunks.push_back(ActionChunk(1, 2, {0, 0}, 1.0));
    CHECK(corpus.dim() == 2);
    corpus.chunks.push_back(ActionChunk(1, 3, {0, 0, 0}, 1.0));
    CHECK_THROWS_AS(corpus.dim(), DimMismatchError);
    CHECK_THROWS_AS(validate_corpus(corpus), DimMismatchError);
}

TEST_CASE("every library error derives from fast::Error") {
    CHECK_THROWS_AS(throw LengthMismatchError("x"), Error);
    CHECK_THROWS_AS(throw IntegrityError("x"), Error);
}
