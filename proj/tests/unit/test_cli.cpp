#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "fast/model_io.hpp"
#include "fast/synth_bench.hpp"
#include "json.hpp"
#include "test_util.hpp"

using namespace fast;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

struct TempDir {
    fs::path path;
    TempDir() {
        path = fs::temp_directory_path() /
               ("fast_cli_" + std::to_string(std::random_device{}()) + "_" +
                std::to_string(reinterpret_cast<std::uintptr_t>(this)));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::string write_spline_corpus(const TempDir& dir, const std::string& name,
                                std::size_t n, std::size_t rate, std::size_t dim,
                                std::uint64_t seed = 1) {
    const auto p = dir / name;
    io::write_corpus(gen_spline_corpus(SplineCorpusParams{n, seed, dim}, rate), p);
    return p;
}

}  // namespace

TEST_CASE("fit, encode and decode round trip") {
    TempDir dir;
    const auto corpus = write_spline_corpus(dir, "c.jsonl", 120, 20, 3);
    auto fit = run({"fit", corpus, "-o", dir / "m.json", "--vocab", "512"});
    REQUIRE(fit.code == 0);
    CHECK(fit.out.find("corpus chunks: 120") != std::string::npos);
    CHECK(fit.out.find("vocab size: ") != std::string::npos);
    CHECK(fit.out.find("mean tokens per chunk: ") != std::string::npos);

    const auto model = io::load_model(dir / "m.json");
    CHECK(io::model_to_string(model) == io::read_file(dir / "m.json"));

    auto enc = run({"encode", dir / "m.json", corpus, "-o", dir / "t.jsonl"});
    REQUIRE(enc.code == 0);
    std::ifstream tin(dir / "t.jsonl");
    auto records = io::read_token_records(tin);
    CHECK(records.size() == 120);

    auto dec = run({"decode", dir / "m.json", dir / "t.jsonl", "-o", dir / "d.jsonl"});
    REQUIRE(dec.code == 0);
    auto original = io::read_corpus(corpus);
    auto decoded = io::read_corpus(dir / "d.jsonl");
    REQUIRE(decoded.size() == original.size());
    for (std::size_t k = 0; k < original.size(); ++k) {
        CHECK(decoded.chunks[k].frequency_hz() == original.chunks[k].frequency_hz());
        auto a = apply_normalization(original.chunks[k], model.stats);
        auto b = apply_normalization(decoded.chunks[k], model.stats);
        for (double r : testutil::dim_rms(a, b)) CHECK(r <= 0.5 / model.quantizer.gamma);
    }
}

TEST_CASE("fit is deterministic on disk") {
    TempDir dir;
    const auto corpus = write_spline_corpus(dir, "c.jsonl", 80, 25, 2);
    REQUIRE(run({"fit", corpus, "-o", dir / "a.json"}).code == 0);
    REQUIRE(run({"fit", corpus, "-o", dir / "b.json"}).code == 0);
    CHECK(io::read_file(dir / "a.json") == io::read_file(dir / "b.json"));
}

TEST_CASE("fit error paths") {
    TempDir dir;
    { std::ofstream(dir / "empty.jsonl"); }
    auto r = run({"fit", dir / "empty.jsonl", "-o", dir / "m.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("empty corpus") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "m.json"));

    {
        std::ofstream bad(dir / "bad.jsonl");
        bad << R"({"actions": [[1, 2]], "frequency_hz": 1})" << "\n"
            << R"({"actions": [[1, 2, 3]], "frequency_hz": 1})" << "\n";
    }
    r = run({"fit", dir / "bad.jsonl", "-o", dir / "m.json"});
    CHECK(r.code == 2);
    CHECK_FALSE(r.err.empty());

    {
        std::ofstream bad(dir / "nan.jsonl");
        bad << R"({"actions": [[1, 2]], "frequency_hz": 1})" << "\n"
            << R"({"actions": [[1, "x"]], "frequency_hz": 1})" << "\n";
    }
    r = run({"fit", dir / "nan.jsonl", "-o", dir / "m.json"});
    CHECK(r.code == 2);
    CHECK(r.err.find("line 2") != std::string::npos);

    const auto c = write_spline_corpus(dir, "c.jsonl", 10, 10, 1);
    CHECK(run({"fit", c, c, "-o", dir / "m.json"}).code == 1);
    CHECK(run({"fit", c, "-o", dir / "m.json", "--clamp", "zero"}).code == 1);
    CHECK(run({"fit", c}).code == 1);
    CHECK(run({"frobnicate"}).code == 1);
    CHECK(run({"--help"}).code == 0);
}

TEST_CASE("automatic clamp from the command line") {
    TempDir dir;
    const auto c = write_spline_corpus(dir, "c.jsonl", 60, 50, 1);
    REQUIRE(run({"fit", c, "-o", dir / "m.json", "--gamma", "50", "--clamp", "auto"}).code == 0);
    CHECK(io::load_model(dir / "m.json").quantizer.clamp > 127);
}

TEST_CASE("universal fit over several corpora with weights") {
    TempDir dir;
    const auto a = write_spline_corpus(dir, "seven.jsonl", 40, 20, 7, 1);
    const auto b = write_spline_corpus(dir, "fourteen.jsonl", 40, 50, 14, 2);
    auto r = run({"fit", a, b, "--universal", "--weights", "0.75,0.25", "-o", dir / "u.json"});
    REQUIRE(r.code == 0);
    auto m = io::load_model(dir / "u.json");
    CHECK(m.pad_dim == 32);
    CHECK(m.metadata.at("corpora") == "seven,fourteen");
    CHECK(run({"fit", a, b, "--universal", "--weights", "1", "-o", dir / "x.json"}).code == 1);

    REQUIRE(run({"encode", dir / "u.json", b, "-o", dir / "t.jsonl"}).code == 0);
    REQUIRE(run({"decode", dir / "u.json", dir / "t.jsonl", "-o", dir / "d.jsonl"}).code == 0);
    CHECK(io::read_corpus(dir / "d.jsonl").chunks[0].shape() == ChunkShape{50, 14});
}

TEST_CASE("corrupt model gives a nonzero exit and no output") {
    TempDir dir;
    const auto c = write_spline_corpus(dir, "c.jsonl", 30, 20, 2);
    REQUIRE(run({"fit", c, "-o", dir / "m.json"}).code == 0);
    auto doc = nlohmann::json::parse(io::read_file(dir / "m.json"));
    doc["payload"]["quantizer"]["gamma"] = 3.0;
    io::write_file_atomic(dir / "bad.json", doc.dump(2));

    auto r = run({"encode", dir / "bad.json", c, "-o", dir / "t.jsonl"});
    CHECK(r.code == 2);
    CHECK(r.err.find("checksum") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "t.jsonl"));
}

TEST_CASE("encode names the offending record") {
    TempDir dir;
    const auto c = write_spline_corpus(dir, "c.jsonl", 30, 20, 2);
    REQUIRE(run({"fit", c, "-o", dir / "m.json"}).code == 0);
    {
        std::ofstream mixed(dir / "mixed.jsonl");
        mixed << R"({"actions": [[0, 0], [1, 1]], "frequency_hz": 2})" << "\n"
              << R"({"actions": [[0, 0, 0]], "frequency_hz": 1})" << "\n";
    }
    auto r = run({"encode", dir / "m.json", dir / "mixed.jsonl", "-o", dir / "t.jsonl"});
    CHECK(r.code == 2);
    CHECK(r.err.find("record 1") != std::string::npos);
    CHECK_FALSE(fs::exists(dir / "t.jsonl"));
}

TEST_CASE("decode reports bad records and honours --shape") {
    TempDir dir;
    const auto c = write_spline_corpus(dir, "c.jsonl", 40, 20, 2);
    REQUIRE(run({"fit", c, "-o", dir / "m.json"}).code == 0);
    const auto model = io::load_model(dir / "m.json");
    auto chunks = io::read_corpus(c).chunks;
    {
        std::ofstream t(dir / "t.jsonl");
        t << io::token_record_to_line({fast_encode(chunks[0], model), std::nullopt, 20.0}) << "\n";
        auto truncated = fast_encode(chunks[1], model);
        truncated.ids.pop_back();
        t << io::token_record_to_line({truncated, std::nullopt, std::nullopt}) << "\n";
        t << io::token_record_to_line({fast_encode(chunks[2], model), std::nullopt, 20.0}) << "\n";
    }
    auto r = run({"decode", dir / "m.json", dir / "t.jsonl", "-o", dir / "d.jsonl"});
    CHECK(r.code == 2);
    CHECK(r.err.find("record 1 failed") != std::string::npos);
    CHECK(r.err.find("record 0") == std::string::npos);
    CHECK(io::read_corpus(dir / "d.jsonl").size() == 2);

    // Chunks of another horizon decode only with an explicit shape.
    auto longer = gen_spline_corpus(SplineCorpusParams{3, 5, 2}, 30).chunks;
    {
        std::ofstream t(dir / "long.jsonl");
        for (const auto& ch : longer) {
            t << io::token_record_to_line({fast_encode(ch, model), std::nullopt, 30.0}) << "\n";
        }
    }
    CHECK(run({"decode", dir / "m.json", dir / "long.jsonl", "-o", dir / "x.jsonl"}).code == 2);
    r = run({"decode", dir / "m.json", dir / "long.jsonl", "-o", dir / "x.jsonl", "--shape",
             "30,2"});
    CHECK(r.code == 0);
    for (const auto& ch : io::read_corpus(dir / "x.jsonl").chunks) {
        CHECK(ch.shape() == ChunkShape{30, 2});
    }
    CHECK(run({"decode", dir / "m.json", dir / "long.jsonl", "-o", dir / "x.jsonl", "--shape",
               "30"}).code == 1);
}

TEST_CASE("bench reports naive counts for 1-second chunks") {
    TempDir dir;
    const auto bus = write_spline_corpus(dir, "bus.jsonl", 50, 20, 7);
    auto r = run({"bench", bus, "--baseline", "-o", dir / "r.json", "--table", dir / "r.tsv"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("naive tokens per 1-second chunk: 140") != std::string::npos);
    auto doc = nlohmann::json::parse(io::read_file(dir / "r.json"));
    REQUIRE(doc["rows"].size() == 2);
    CHECK(doc["rows"][1]["tokenizer"] == "naive");
    CHECK(doc["rows"][1]["mean_token_count"] == 140.0);
    CHECK(doc["rows"][0]["mean_token_count"].get<double>() <= 140.0);
    CHECK(io::read_file(dir / "r.tsv").rfind("none\ttokenizer", 0) == 0);

    const auto shirt = write_spline_corpus(dir, "shirt.jsonl", 20, 50, 14);
    r = run({"bench", shirt, "--baseline"});
    REQUIRE(r.code == 0);
    CHECK(r.out.find("naive tokens per 1-second chunk: 700") != std::string::npos);

    REQUIRE(run({"fit", shirt, "-o", dir / "m.json"}).code == 0);
    CHECK(run({"bench", shirt, "--model", dir / "m.json"}).code == 0);
}

TEST_CASE("sweeps") {
    TempDir dir;
    auto r = run({"sweep", "--gammas", "1,10,100", "--chunks", "100", "--seed", "3",
                  "-o", dir / "g.json"});
    REQUIRE(r.code == 0);
    auto doc = nlohmann::json::parse(io::read_file(dir / "g.json"));
    REQUIRE(doc["rows"].size() == 3);
    CHECK(doc["rows"][1]["mean_rms_error"] <= doc["rows"][0]["mean_rms_error"]);
    CHECK(doc["rows"][2]["mean_rms_error"] <= doc["rows"][1]["mean_rms_error"]);

    auto again = run({"sweep", "--gammas", "1,10,100", "--chunks", "100", "--seed", "3",
                      "-o", dir / "g2.json"});
    REQUIRE(again.code == 0);
    CHECK(io::read_file(dir / "g.json") == io::read_file(dir / "g2.json"));
    CHECK(again.out == r.out);

    r = run({"sweep", "--rates", "25,50,100,200,400,800", "--chunks", "60", "-o",
             dir / "r.json"});
    REQUIRE(r.code == 0);
    doc = nlohmann::json::parse(io::read_file(dir / "r.json"));
    REQUIRE(doc["rows"].size() == 12);
    const std::vector<double> rates{25, 50, 100, 200, 400, 800};
    for (std::size_t k = 0; k < rates.size(); ++k) {
        CHECK(doc["rows"][2 * k + 1]["mean_token_count"] == rates[k]);
    }

    const auto c = write_spline_corpus(dir, "c.jsonl", 50, 20, 2);
    CHECK(run({"sweep", "--corpus", c, "--gammas", "5,10", "--clamp", "auto"}).code == 0);
    CHECK(run({"sweep", "--corpus", c, "--rates", "25"}).code == 1);
    CHECK(run({"sweep", "--gammas", "1", "--rates", "25"}).code == 1);
    CHECK(run({"sweep"}).code == 1);
}
