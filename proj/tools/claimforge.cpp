#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "claimforge/config.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/error.hpp"
#include "claimforge/evaluation.hpp"
#include "claimforge/pipeline.hpp"
#include "claimforge/text.hpp"

namespace fs = std::filesystem;
using namespace claimforge;

namespace {

struct CommonOptions {
    std::string config_path;
    std::optional<std::string> scorer;
    std::optional<std::size_t> k;
    std::optional<double> threshold;
    bool trace = false;
    std::optional<std::size_t> workers;
    std::string out;
};

void add_common(CLI::App* cmd, CommonOptions& o)
{
    cmd->add_option("--config", o.config_path, "Flat key = value config file")->check(CLI::ExistingFile);
    cmd->add_option("--scorer", o.scorer, "Sentence scorer: lead, textrank, lsa or backend");
    cmd->add_option("--k", o.k, "Number of central sentences");
    cmd->add_option("--threshold", o.threshold, "Entailment threshold for redundancy removal");
    cmd->add_flag("--trace", o.trace, "Write a per-sentence debug trace");
    cmd->add_option("--workers", o.workers, "Documents processed concurrently");
    cmd->add_option("--out", o.out, "Output path");
}

auto resolve_config(CommonOptions const& o) -> PipelineConfig
{
    PipelineConfig config;
    if (!o.config_path.empty()) {
        config = load_config(o.config_path);
    }
    if (o.scorer) {
        config.scoring.scorer = extraction::parse_scorer(*o.scorer);
    }
    if (o.k) {
        config.scoring.k = *o.k;
    }
    if (o.threshold) {
        config.threshold = *o.threshold;
    }
    if (o.workers) {
        config.workers = *o.workers;
    }
    config.trace = config.trace || o.trace;
    config.validate();
    return config;
}

// Writes to `path`, or stdout when it is empty.
template <typename Fn>
void emit(std::string const& path, Fn&& write)
{
    if (path.empty()) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    if (auto parent = fs::path(path).parent_path(); !parent.empty()) {
        fs::create_directories(parent);
    }
    std::ofstream out(path);
    if (!out) {
        throw Error("cannot write " + path);
    }
    write(out);
}

auto looks_like_corpus(fs::path const& path) -> bool
{
    std::ifstream in(path);
    std::string line;
    while (std::getline(in, line)) {
        if (!text::trim(line).empty()) {
            auto j = nlohmann::json::parse(line, nullptr, false);
            return j.is_object() && j.contains("sentences");
        }
    }
    return false;
}

auto read_inputs(fs::path const& path) -> std::vector<corpus::AveritecRecord>
{
    if (path.extension() != ".txt") {
        return corpus::load_records(path);
    }
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read " + path.string());
    }
    std::vector<corpus::AveritecRecord> records;
    std::string line;
    while (std::getline(in, line)) {
        auto url = std::string(text::trim(line));
        if (url.empty() || url.front() == '#') {
            continue;
        }
        corpus::AveritecRecord r;
        r.id = "url-" + std::to_string(records.size());
        r.source_url = url;
        r.media_flags = corpus::infer_media_flags(url);
        r.needs_fetch = true;
        records.push_back(std::move(r));
    }
    return records;
}

auto ingest(fs::path const& input, PipelineConfig const& config) -> std::vector<corpus::ExtractionSample>
{
    auto records = read_inputs(input);
    corpus::resolve_sources(records, config.scraper, config.workers);
    auto samples = corpus::filter_averitec(records);
    std::cerr << "ingest: " << records.size() << " records, " << samples.size() << " usable documents\n";
    return samples;
}

void report_failures(pipeline::EvaluationSummary const& summary)
{
    for (auto const& f: summary.failures) {
        std::cerr << "warning: document '" << f.document_id << "' failed at " << f.stage << ": " << f.message << '\n';
    }
}

auto trace_path(std::string const& out) -> std::string { return out.empty() ? "trace.jsonl" : out + ".trace.jsonl"; }

}  // namespace

auto main(int argc, char** argv) -> int
{
    CLI::App app{"claimforge: check-worthy claim extraction from documents"};
    app.require_subcommand(1);

    CommonOptions ingest_o;
    std::string ingest_input;
    auto* ingest_cmd = app.add_subcommand("ingest", "Fetch and filter source records into a corpus JSONL file");
    add_common(ingest_cmd, ingest_o);
    ingest_cmd->add_option("input", ingest_input, "Record JSONL file or a .txt list of URLs")->required()->check(CLI::ExistingFile);

    CommonOptions extract_o;
    std::string extract_input;
    auto* extract_cmd = app.add_subcommand("extract", "Run the pipeline over a corpus and write results JSONL");
    add_common(extract_cmd, extract_o);
    extract_cmd->add_option("corpus", extract_input, "Corpus JSONL")->required()->check(CLI::ExistingFile);

    CommonOptions evaluate_o;
    std::string evaluate_results;
    std::string evaluate_corpus;
    auto* evaluate_cmd = app.add_subcommand("evaluate", "Score a results file against the corpus gold claims");
    add_common(evaluate_cmd, evaluate_o);
    evaluate_cmd->add_option("results", evaluate_results, "Results JSONL")->required()->check(CLI::ExistingFile);
    evaluate_cmd->add_option("corpus", evaluate_corpus, "Corpus JSONL with gold claims")->required()->check(CLI::ExistingFile);

    CommonOptions retrieval_o;
    std::string retrieval_claims;
    std::string retrieval_evidence;
    auto* retrieval_cmd = app.add_subcommand("retrieval-eval", "BM25 evidence retrieval P@k per query variant");
    add_common(retrieval_cmd, retrieval_o);
    retrieval_cmd->add_option("claims", retrieval_claims, "Claim variants JSONL")->required()->check(CLI::ExistingFile);
    retrieval_cmd->add_option("evidence", retrieval_evidence, "Evidence JSONL")->required()->check(CLI::ExistingFile);

    CommonOptions stats_o;
    std::string stats_input;
    auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
    add_common(stats_cmd, stats_o);
    stats_cmd->add_option("corpus", stats_input, "Corpus JSONL")->required()->check(CLI::ExistingFile);

    CommonOptions run_o;
    std::string run_input;
    auto* run_cmd = app.add_subcommand("run", "ingest + extract + evaluate into an output directory");
    add_common(run_cmd, run_o);
    run_cmd->add_option("input", run_input, "Corpus JSONL, record JSONL or .txt URL list")->required()->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*ingest_cmd) {
            auto config = resolve_config(ingest_o);
            auto samples = ingest(ingest_input, config);
            emit(ingest_o.out, [&](std::ostream& os) { corpus::write_corpus(os, samples); });
        } else if (*extract_cmd) {
            auto config = resolve_config(extract_o);
            auto registry = pipeline::make_registry(config);
            auto samples = corpus::load_corpus(extract_input);
            auto run = pipeline::run_corpus(samples, config, registry);
            report_failures(run.summary);
            emit(extract_o.out, [&](std::ostream& os) { pipeline::write_results(os, run.results); });
            if (config.trace) {
                emit(trace_path(extract_o.out), [&](std::ostream& os) { pipeline::write_trace(os, run.results); });
            }
        } else if (*evaluate_cmd) {
            auto config = resolve_config(evaluate_o);
            auto results = pipeline::load_results(evaluate_results);
            auto samples = corpus::load_corpus(evaluate_corpus);
            auto summary = pipeline::evaluate(results.outcomes, samples, config);
            summary.failures.insert(summary.failures.begin(), results.failures.begin(), results.failures.end());
            report_failures(summary);
            emit(evaluate_o.out, [&](std::ostream& os) { os << pipeline::to_json(summary).dump(2) << '\n'; });
        } else if (*retrieval_cmd) {
            auto config = resolve_config(retrieval_o);
            auto ks = retrieval_o.k ? std::vector<std::size_t>{*retrieval_o.k} : evaluation::kDefaultKs;
            auto reports = evaluation::retrieval_eval(evaluation::load_claim_variants(retrieval_claims),
                                                      evaluation::load_evidence(retrieval_evidence), ks);
            nlohmann::ordered_json j;
            j["reports"] = nlohmann::ordered_json::array();
            for (auto const& r: reports) {
                j["reports"].push_back(evaluation::to_json(r));
                std::cerr << r.name << '\t' << r.aggregate << '\n';
            }
            emit(retrieval_o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        } else if (*stats_cmd) {
            (void)resolve_config(stats_o);
            auto stats = corpus::corpus_stats(corpus::load_corpus(stats_input));
            nlohmann::ordered_json j;
            j["samples"] = stats.samples;
            j["median_sentences"] = stats.median_sentences;
            j["avg_claim_sentences"] = stats.avg_claim_sentences;
            j["median_claim_words"] = stats.median_claim_words;
            j["median_document_words"] = stats.median_document_words;
            emit(stats_o.out, [&](std::ostream& os) { os << j.dump(2) << '\n'; });
        } else if (*run_cmd) {
            auto config = resolve_config(run_o);
            fs::path dir = run_o.out.empty() ? fs::path("claimforge-run") : fs::path(run_o.out);
            fs::create_directories(dir);
            std::vector<corpus::ExtractionSample> samples;
            if (looks_like_corpus(run_input)) {
                samples = corpus::load_corpus(run_input);
            } else {
                samples = ingest(run_input, config);
                corpus::save_corpus(dir / "corpus.jsonl", samples);
            }
            auto registry = pipeline::make_registry(config);
            auto run = pipeline::run_corpus(samples, config, registry);
            report_failures(run.summary);
            emit((dir / "results.jsonl").string(), [&](std::ostream& os) { pipeline::write_results(os, run.results); });
            emit((dir / "reports.json").string(),
                 [&](std::ostream& os) { os << pipeline::to_json(run.summary).dump(2) << '\n'; });
            if (config.trace) {
                emit((dir / "trace.jsonl").string(), [&](std::ostream& os) { pipeline::write_trace(os, run.results); });
            }
            std::cerr << "run: " << run.results.size() << " documents, " << run.summary.failures.size()
                      << " failed; outputs in " << dir.string() << '\n';
        }
    } catch (std::exception const& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
