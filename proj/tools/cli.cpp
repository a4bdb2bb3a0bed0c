#include "cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "fast/model_io.hpp"
#include "fast/pipeline.hpp"
#include "fast/synth_bench.hpp"

namespace fast::cli {

namespace {

namespace fs = std::filesystem;

/// Bad flag combinations found after parsing.
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct FitArgs {
    std::vector<std::string> corpora;
    std::string out;
    double gamma = kDefaultGamma;
    std::size_t vocab = kDefaultVocab;
    std::string clamp = "127";
    bool universal = false;
    std::size_t pad_dim = kDefaultPadDim;
    std::vector<double> weights;
};

struct EncodeArgs {
    std::string model;
    std::string corpus;
    std::string out;
};

struct DecodeArgs {
    std::string model;
    std::string tokens;
    std::string out;
    std::vector<std::size_t> shape;
};

struct BenchArgs {
    std::string corpus;
    std::string model;
    std::string out;
    std::string table;
    bool baseline = false;
    double gamma = kDefaultGamma;
    std::size_t vocab = kDefaultVocab;
    std::size_t bins = 256;
};

struct SweepArgs {
    std::string corpus;
    std::vector<double> gammas;
    std::vector<std::size_t> rates;
    std::string out;
    std::string table;
    std::size_t chunks = 1000;
    std::uint64_t seed = 0;
    std::size_t dim = 1;
    std::size_t rate = 50;
    double gamma = kDefaultGamma;
    std::size_t vocab = kDefaultVocab;
    std::string clamp = "auto";
};

/// "auto" or a positive integer.
std::optional<std::int32_t> parse_clamp(const std::string& text) {
    if (text == "auto") {
        return std::nullopt;
    }
    std::size_t used = 0;
    long value = 0;
    try {
        value = std::stol(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != text.size() || value < 1 || value > (1L << 24)) {
        throw UsageError("--clamp must be 'auto' or an integer in [1, 16777216]");
    }
    return static_cast<std::int32_t>(value);
}

double mean_tokens(const std::vector<TokenSequence>& seqs) {
    double total = 0.0;
    for (const auto& s : seqs) {
        total += static_cast<double>(s.size());
    }
    return seqs.empty() ? 0.0 : total / static_cast<double>(seqs.size());
}

void emit_report(const BenchReport& report, const std::string& json_path,
                 const std::string& table_path, std::ostream& out) {
    const std::string table = io::report_to_table(report);
    out << table;
    if (!table_path.empty()) {
        io::write_file_atomic(table_path, table);
    }
    if (!json_path.empty()) {
        io::write_file_atomic(json_path, io::report_to_json(report));
    }
}

int cmd_fit(const FitArgs& a, std::ostream& out) {
    std::vector<ChunkCorpus> corpora;
    for (const auto& path : a.corpora) {
        corpora.push_back(io::read_corpus(path));
    }
    if (!a.weights.empty()) {
        if (a.weights.size() != corpora.size()) {
            throw UsageError("--weights needs one value per corpus file");
        }
        for (std::size_t i = 0; i < corpora.size(); ++i) {
            corpora[i].weight = a.weights[i];
        }
    }

    FitOptions options;
    options.gamma = a.gamma;
    options.max_vocab = a.vocab;
    options.clamp = parse_clamp(a.clamp);

    TokenizerModel model;
    std::vector<ActionChunk> all;
    if (a.universal) {
        model = universal_fit(corpora, options, a.pad_dim);
    } else {
        if (corpora.size() != 1) {
            throw UsageError("fitting several corpora requires --universal");
        }
        model = fast_fit(corpora.front(), options);
    }
    for (const auto& c : corpora) {
        all.insert(all.end(), c.chunks.begin(), c.chunks.end());
    }
    const auto tokens = fast_encode_batch(all, model);
    io::save_model(model, a.out);

    out << "corpus chunks: " << all.size() << "\n"
        << "vocab size: " << model.vocab_size() << " (base " << model.merges.base_size()
        << ", merges " << model.merges.merges().size() << ")\n"
        << "default shape: H=" << model.default_shape.horizon
        << " D=" << model.default_shape.dim << "\n"
        << "mean tokens per chunk: " << std::setprecision(6) << mean_tokens(tokens) << "\n"
        << "model written to " << a.out << "\n";
    return kOk;
}

int cmd_encode(const EncodeArgs& a, std::ostream& out) {
    const TokenizerModel model = io::load_model(a.model);
    const ChunkCorpus corpus = io::read_corpus(a.corpus);

    std::string lines;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const ActionChunk& chunk = corpus.chunks[i];
        io::TokenRecord rec;
        try {
            rec.tokens = fast_encode(chunk, model);
        } catch (const Error& e) {
            throw Error("record " + std::to_string(i) + ": " + e.what());
        }
        rec.shape = chunk.shape();
        rec.frequency_hz = chunk.frequency_hz();
        lines += io::token_record_to_line(rec) + "\n";
    }
    io::write_file_atomic(a.out, lines);
    out << "encoded " << corpus.size() << " records to " << a.out << "\n";
    return kOk;
}

int cmd_decode(const DecodeArgs& a, std::ostream& out, std::ostream& err) {
    const TokenizerModel model = io::load_model(a.model);
    std::optional<ChunkShape> override_shape;
    if (!a.shape.empty()) {
        if (a.shape.size() != 2) {
            throw UsageError("--shape expects H,D");
        }
        override_shape = ChunkShape{a.shape[0], a.shape[1]};
    }

    std::ifstream in(a.tokens);
    if (!in) {
        throw FormatError("cannot open token file " + a.tokens);
    }
    const auto records = io::read_token_records(in);

    std::string lines;
    std::size_t failed = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        const auto& rec = records[i];
        try {
            const std::optional<ChunkShape> shape = override_shape ? override_shape : rec.shape;
            const ActionChunk decoded = fast_decode(rec.tokens, model, shape);
            const ActionChunk chunk(decoded.horizon(), decoded.dim(),
                                    std::vector<double>(decoded.values().begin(),
                                                        decoded.values().end()),
                                    rec.frequency_hz.value_or(decoded.frequency_hz()));
            lines += io::corpus_record_to_line(chunk) + "\n";
        } catch (const Error& e) {
            ++failed;
            err << "record " << i << " failed: " << e.what() << "\n";
        }
    }
    io::write_file_atomic(a.out, lines);
    out << "decoded " << (records.size() - failed) << " of " << records.size()
        << " records to " << a.out << "\n";
    return failed == 0 ? kOk : kDataError;
}

int cmd_bench(const BenchArgs& a, std::ostream& out) {
    const ChunkCorpus corpus = io::read_corpus(a.corpus);
    if (corpus.empty()) {
        throw EmptyCorpusError("empty corpus");
    }
    TokenizerModel model;
    if (a.model.empty()) {
        FitOptions options;
        options.gamma = a.gamma;
        options.max_vocab = a.vocab;
        model = fast_fit(corpus, options);
    } else {
        model = io::load_model(a.model);
    }

    BenchReport report;
    report.axis = "none";
    report.rows.push_back(eval_tokenizer(corpus, model));
    if (a.baseline) {
        NaiveTokenizer naive{model.stats.leading(corpus.dim()), BinningConfig{a.bins}};
        report.rows.push_back(eval_tokenizer(corpus, naive));

        double per_second = 0.0;
        for (const auto& c : corpus.chunks) {
            per_second += static_cast<double>(naive_token_count(c.frequency_hz(), c.dim()));
        }
        out << "naive tokens per 1-second chunk: "
            << per_second / static_cast<double>(corpus.size()) << "\n";
    }
    emit_report(report, a.out, a.table, out);
    return kOk;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
    if (a.gammas.empty() == a.rates.empty()) {
        throw UsageError("sweep needs exactly one of --gammas or --rates");
    }
    const SplineCorpusParams params{a.chunks, a.seed, a.dim};
    BenchReport report;
    if (!a.gammas.empty()) {
        const ChunkCorpus corpus =
            a.corpus.empty() ? gen_spline_corpus(params, a.rate) : io::read_corpus(a.corpus);
        report = sweep_gamma(corpus, a.gammas, a.vocab, parse_clamp(a.clamp));
    } else {
        if (!a.corpus.empty()) {
            throw UsageError("--rates sweeps resample the synthetic spline corpus; drop --corpus");
        }
        report = sweep_rate(a.rates, params, a.gamma, a.vocab, parse_clamp(a.clamp));
    }
    emit_report(report, a.out, a.table, out);
    return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"FAST action tokenizer: fit, encode, decode and benchmark"};
    app.require_subcommand(1);

    FitArgs fit;
    auto* fit_cmd = app.add_subcommand("fit", "Fit a tokenizer on one or more corpus files");
    fit_cmd->add_option("corpus", fit.corpora, "Corpus file(s), newline-delimited JSON")
        ->required();
    fit_cmd->add_option("-o,--out", fit.out, "Output model path")->required();
    fit_cmd->add_option("--gamma", fit.gamma, "DCT rounding scale")->capture_default_str();
    fit_cmd->add_option("--vocab", fit.vocab, "BPE vocabulary size")->capture_default_str();
    fit_cmd->add_option("--clamp", fit.clamp,
                        "Quantized coefficient magnitude bound, or 'auto' to fit the corpus")
        ->capture_default_str();
    fit_cmd->add_flag("--universal", fit.universal, "Pad and pool all corpora");
    fit_cmd->add_option("--pad-dim", fit.pad_dim, "Universal padding width")
        ->capture_default_str();
    fit_cmd->add_option("--weights", fit.weights, "Per-corpus mixture weights")
        ->delimiter(',');

    EncodeArgs enc;
    auto* enc_cmd = app.add_subcommand("encode", "Encode a corpus into token arrays");
    enc_cmd->add_option("model", enc.model, "Model file")->required();
    enc_cmd->add_option("corpus", enc.corpus, "Corpus file")->required();
    enc_cmd->add_option("-o,--out", enc.out, "Output token file")->required();

    DecodeArgs dec;
    auto* dec_cmd = app.add_subcommand("decode", "Decode token arrays back to actions");
    dec_cmd->add_option("model", dec.model, "Model file")->required();
    dec_cmd->add_option("tokens", dec.tokens, "Token file")->required();
    dec_cmd->add_option("-o,--out", dec.out, "Output corpus file")->required();
    dec_cmd->add_option("--shape", dec.shape, "Chunk shape H,D applied to every record")
        ->delimiter(',');

    BenchArgs bench;
    auto* bench_cmd = app.add_subcommand("bench", "Token counts and reconstruction error");
    bench_cmd->add_option("corpus", bench.corpus, "Corpus file")->required();
    bench_cmd->add_option("--model", bench.model, "Model file (fit on the corpus if omitted)");
    bench_cmd->add_flag("--baseline", bench.baseline, "Include the naive binning tokenizer");
    bench_cmd->add_option("--gamma", bench.gamma, "Rounding scale when fitting")
        ->capture_default_str();
    bench_cmd->add_option("--vocab", bench.vocab, "Vocabulary size when fitting")
        ->capture_default_str();
    bench_cmd->add_option("--bins", bench.bins, "Naive bins")->capture_default_str();
    bench_cmd->add_option("-o,--out", bench.out, "JSON report path");
    bench_cmd->add_option("--table", bench.table, "Tab-separated report path");

    SweepArgs sweep;
    auto* sweep_cmd = app.add_subcommand("sweep", "Gamma or sampling-rate sweep");
    sweep_cmd->add_option("--corpus", sweep.corpus, "Corpus file for --gammas");
    sweep_cmd->add_option("--gammas", sweep.gammas, "Rounding scales")->delimiter(',');
    sweep_cmd->add_option("--rates", sweep.rates, "Spline sampling rates")->delimiter(',');
    sweep_cmd->add_option("--chunks", sweep.chunks, "Synthetic corpus size")
        ->capture_default_str();
    sweep_cmd->add_option("--seed", sweep.seed, "Synthetic corpus seed")->capture_default_str();
    sweep_cmd->add_option("--dim", sweep.dim, "Synthetic corpus dimension")
        ->capture_default_str();
    sweep_cmd->add_option("--rate", sweep.rate, "Synthetic rate for --gammas")
        ->capture_default_str();
    sweep_cmd->add_option("--gamma", sweep.gamma, "Rounding scale for --rates")
        ->capture_default_str();
    sweep_cmd->add_option("--vocab", sweep.vocab, "BPE vocabulary size")->capture_default_str();
    sweep_cmd->add_option("--clamp", sweep.clamp, "Coefficient bound, or 'auto'")
        ->capture_default_str();
    sweep_cmd->add_option("-o,--out", sweep.out, "JSON report path");
    sweep_cmd->add_option("--table", sweep.table, "Tab-separated report path");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kOk : kUsageError;
    }

    try {
        if (fit_cmd->parsed()) {
            return cmd_fit(fit, out);
        }
        if (enc_cmd->parsed()) {
            return cmd_encode(enc, out);
        }
        if (dec_cmd->parsed()) {
            return cmd_decode(dec, out, err);
        }
        if (bench_cmd->parsed()) {
            return cmd_bench(bench, out);
        }
        return cmd_sweep(sweep, out);
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsageError;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kDataError;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternalError;
    }
}

}  // namespace fast::cli
