#include "fast/model_io.hpp"

#include <zlib.h>

#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <unistd.h>

#include "json.hpp"

namespace fast::io {

using nlohmann::json;

namespace {

std::string crc32_hex(const std::string& bytes) {
    uLong crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(bytes.data()),
                static_cast<uInt>(bytes.size()));
    std::ostringstream os;
    os << "crc32:" << std::hex << std::setw(8) << std::setfill('0') << crc;
    return os.str();
}

json payload_of(const TokenizerModel& model) {
    json merges = json::array();
    for (const auto& [left, right] : model.merges.merges()) {
        merges.push_back({left, right});
    }
    json metadata = json::object();
    for (const auto& [k, v] : model.metadata) {
        metadata[k] = v;
    }
    return {
        {"quantizer", {{"gamma", model.quantizer.gamma}, {"clamp", model.quantizer.clamp}}},
        {"normalization", {{"q_low", model.stats.q_low}, {"q_high", model.stats.q_high}}},
        {"bpe",
         {{"base_size", model.merges.base_size()},
          {"vocab_size", model.merges.vocab_size()},
          {"merges", merges}}},
        {"default_shape",
         {{"horizon", model.default_shape.horizon}, {"dim", model.default_shape.dim}}},
        {"pad_dim", model.pad_dim},
        {"metadata", metadata},
    };
}

TokenizerModel model_of(const json& payload, int version) {
    TokenizerModel model;
    model.format_version = version;
    model.quantizer.gamma = payload.at("quantizer").at("gamma").get<double>();
    model.quantizer.clamp = payload.at("quantizer").at("clamp").get<std::int32_t>();
    model.stats.q_low = payload.at("normalization").at("q_low").get<std::vector<double>>();
    model.stats.q_high = payload.at("normalization").at("q_high").get<std::vector<double>>();

    const json& bpe = payload.at("bpe");
    std::vector<MergePair> merges;
    for (const auto& m : bpe.at("merges")) {
        if (!m.is_array() || m.size() != 2) {
            throw FormatError("model merge entries must be [left, right] pairs");
        }
        merges.emplace_back(m[0].get<TokenId>(), m[1].get<TokenId>());
    }
    model.merges = MergeTable(bpe.at("base_size").get<std::size_t>(), std::move(merges));
    if (model.merges.vocab_size() != bpe.at("vocab_size").get<std::size_t>()) {
        throw FormatError("model vocab_size disagrees with its merge list");
    }
    model.default_shape.horizon = payload.at("default_shape").at("horizon").get<std::size_t>();
    model.default_shape.dim = payload.at("default_shape").at("dim").get<std::size_t>();
    model.pad_dim = payload.at("pad_dim").get<std::size_t>();
    for (const auto& [k, v] : payload.at("metadata").items()) {
        model.metadata[k] = v.get<std::string>();
    }
    return model;
}

}  // namespace

std::string model_to_string(const TokenizerModel& model) {
    const json payload = payload_of(model);
    const json doc = {
        {"format", kModelFormatName},
        {"format_version", model.format_version},
        {"checksum", crc32_hex(payload.dump())},
        {"payload", payload},
    };
    return doc.dump(2) + "\n";
}

TokenizerModel model_from_string(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw FormatError(std::string("model file is not valid JSON: ") + e.what());
    }
    try {
        if (!doc.is_object() || doc.value("format", std::string{}) != kModelFormatName) {
            throw FormatError("not a FAST tokenizer model file");
        }
        const int version = doc.at("format_version").get<int>();
        if (version > kModelFormatVersion || version < 1) {
            throw FormatError("unsupported model format_version " + std::to_string(version) +
                              " (this build reads up to " +
                              std::to_string(kModelFormatVersion) + ")");
        }
        const json& payload = doc.at("payload");
        const std::string expected = doc.at("checksum").get<std::string>();
        if (crc32_hex(payload.dump()) != expected) {
            throw IntegrityError("model checksum mismatch: file is corrupt or was edited");
        }
        TokenizerModel model = model_of(payload, version);
        validate_model(model);
        return model;
    } catch (const json::exception& e) {
        throw FormatError(std::string("malformed model file: ") + e.what());
    } catch (const ConfigError& e) {
        throw FormatError(std::string("inconsistent model file: ") + e.what());
    }
}

void save_model(const TokenizerModel& model, const std::filesystem::path& path) {
    write_file_atomic(path, model_to_string(model));
}

TokenizerModel load_model(const std::filesystem::path& path) {
    return model_from_string(read_file(path));
}

std::vector<CorpusRecord> read_corpus_records(std::istream& in) {
    std::vector<CorpusRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = "line " + std::to_string(line_no) + ": ";
        try {
            const json rec = json::parse(line);
            const auto rows = rec.at("actions").get<std::vector<std::vector<double>>>();
            const double hz = rec.at("frequency_hz").get<double>();
            CorpusRecord out{ActionChunk::from_rows(rows, hz), std::nullopt};
            validate_chunk(out.chunk);
            if (rec.contains("label") && !rec.at("label").is_null()) {
                out.label = rec.at("label").get<std::string>();
            }
            records.push_back(std::move(out));
        } catch (const json::exception& e) {
            throw FormatError(where + e.what());
        } catch (const Error& e) {
            throw FormatError(where + e.what());
        }
    }
    return records;
}

ChunkCorpus read_corpus(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw FormatError("cannot open corpus file " + path.string());
    }
    ChunkCorpus corpus;
    corpus.name = path.stem().string();
    try {
        for (auto& rec : read_corpus_records(in)) {
            corpus.chunks.push_back(std::move(rec.chunk));
        }
    } catch (const FormatError& e) {
        throw FormatError(path.string() + ": " + e.what());
    }
    return corpus;
}

std::string corpus_record_to_line(const ActionChunk& chunk,
                                  const std::optional<std::string>& label) {
    json rec = {{"actions", chunk.to_rows()}, {"frequency_hz", chunk.frequency_hz()}};
    if (label) {
        rec["label"] = *label;
    }
    return rec.dump();
}

void write_corpus(const ChunkCorpus& corpus, const std::filesystem::path& path) {
    std::string out;
    for (const auto& c : corpus.chunks) {
        out += corpus_record_to_line(c) + "\n";
    }
    write_file_atomic(path, out);
}

std::vector<TokenRecord> read_token_records(std::istream& in) {
    std::vector<TokenRecord> records;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json rec = json::parse(line);
            TokenRecord out;
            const json& ids = rec.at("tokens");
            if (!ids.is_array()) {
                throw FormatError("\"tokens\" must be an array");
            }
            for (const auto& id : ids) {
                if (!id.is_number_unsigned() ||
                    id.get<std::uint64_t>() > std::numeric_limits<TokenId>::max()) {
                    throw FormatError("token ids must be non-negative 32-bit integers");
                }
                out.tokens.ids.push_back(id.get<TokenId>());
            }
            if (rec.contains("horizon") && rec.contains("dim")) {
                out.shape = ChunkShape{rec.at("horizon").get<std::size_t>(),
                                       rec.at("dim").get<std::size_t>()};
            }
            if (rec.contains("frequency_hz")) {
                out.frequency_hz = rec.at("frequency_hz").get<double>();
            }
            records.push_back(std::move(out));
        } catch (const json::exception& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        } catch (const FormatError& e) {
            throw FormatError("line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return records;
}

std::string token_record_to_line(const TokenRecord& record) {
    json rec = {{"tokens", record.tokens.ids}};
    if (record.shape) {
        rec["horizon"] = record.shape->horizon;
        rec["dim"] = record.shape->dim;
    }
    if (record.frequency_hz) {
        rec["frequency_hz"] = *record.frequency_hz;
    }
    return rec.dump();
}

std::string report_to_table(const BenchReport& report) {
    std::ostringstream os;
    os << report.axis
       << "\ttokenizer\tchunks\tvocab\tmean_tokens\tnaive_tokens\tcompression"
          "\tmean_rms\tmax_dim_rms\tnonzero_coeffs\tin_clamp\n";
    os << std::setprecision(6);
    for (const auto& r : report.rows) {
        os << r.axis_value << '\t' << r.tokenizer << '\t' << r.chunks << '\t' << r.vocab_size
           << '\t' << r.mean_token_count << '\t' << r.mean_naive_count << '\t'
           << r.compression_ratio << '\t' << r.mean_rms_error << '\t' << r.max_dim_rms_error
           << '\t' << r.mean_nonzero_symbols << '\t' << r.in_clamp_chunks << '\n';
    }
    return os.str();
}

std::string report_to_json(const BenchReport& report) {
    json rows = json::array();
    for (const auto& r : report.rows) {
        rows.push_back({
            {"tokenizer", r.tokenizer},
            {"axis_value", r.axis_value},
            {"chunks", r.chunks},
            {"vocab_size", r.vocab_size},
            {"mean_token_count", r.mean_token_count},
            {"mean_naive_count", r.mean_naive_count},
            {"compression_ratio", r.compression_ratio},
            {"mean_rms_error", r.mean_rms_error},
            {"max_dim_rms_error", r.max_dim_rms_error},
            {"mean_nonzero_symbols", r.mean_nonzero_symbols},
            {"in_clamp_chunks", r.in_clamp_chunks},
        });
    }
    return json{{"axis", report.axis}, {"rows", rows}}.dump(2) + "\n";
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw FormatError("cannot write " + tmp.string());
        }
        out << contents;
        out.flush();
        if (!out) {
            std::error_code ignored;
            std::filesystem::remove(tmp, ignored);
            throw FormatError("failed writing " + tmp.string());
        }
    }
    std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw FormatError("cannot open " + path.string());
    }
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

}  // namespace fast::io
