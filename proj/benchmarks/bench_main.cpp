#include <random>
#include <string>
#include <vector>

#include <benchmark/benchmark.h>

#include "claimforge/backends.hpp"
#include "claimforge/config.hpp"
#include "claimforge/corpus.hpp"
#include "claimforge/evaluation.hpp"
#include "claimforge/extraction.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/pipeline.hpp"

using namespace claimforge;

namespace {

auto sentences(std::size_t n, unsigned seed) -> std::vector<std::string>
{
    static std::vector<std::string> const vocab{"river", "harbor", "engine", "pepper", "violet", "marble", "signal",
                                                "copper", "falcon", "garden", "lantern", "meadow", "the", "of"};
    std::mt19937 rng(seed);
    std::uniform_int_distribution<std::size_t> len(6, 20);
    std::uniform_int_distribution<std::size_t> word(0, vocab.size() - 1);
    std::vector<std::string> out;
    for (std::size_t i = 0; i < n; ++i) {
        std::string s;
        for (auto w = len(rng); w > 0; --w) {
            s += vocab[word(rng)] + " ";
        }
        s.back() = '.';
        out.push_back(s);
    }
    return out;
}

void bm25_retrieve(benchmark::State& state)
{
    auto units = sentences(static_cast<std::size_t>(state.range(0)), 1);
    auto index = ir::Bm25Index::build(units);
    for (auto _: state) {
        benchmark::DoNotOptimize(index.retrieve("river engine falcon meadow", 10));
    }
}
BENCHMARK(bm25_retrieve)->Arg(50)->Arg(500)->Arg(5000);

void chrf_pair(benchmark::State& state)
{
    auto s = sentences(2, 2);
    for (auto _: state) {
        benchmark::DoNotOptimize(evaluation::chrf(s[0], s[1]));
    }
}
BENCHMARK(chrf_pair);

void sari_triple(benchmark::State& state)
{
    auto s = sentences(3, 3);
    for (auto _: state) {
        benchmark::DoNotOptimize(evaluation::sari(s[0], s[1], {s[2]}));
    }
}
BENCHMARK(sari_triple);

void textrank_document(benchmark::State& state)
{
    auto doc = corpus::Document::from_sentences("b", "", sentences(static_cast<std::size_t>(state.range(0)), 4));
    for (auto _: state) {
        benchmark::DoNotOptimize(extraction::score_textrank(doc));
    }
}
BENCHMARK(textrank_document)->Arg(10)->Arg(50)->Arg(200);

void lsa_document(benchmark::State& state)
{
    auto doc = corpus::Document::from_sentences("b", "", sentences(static_cast<std::size_t>(state.range(0)), 5));
    for (auto _: state) {
        benchmark::DoNotOptimize(extraction::score_lsa(doc, 3));
    }
}
BENCHMARK(lsa_document)->Arg(10)->Arg(50)->Arg(200);

void fixture_pipeline(benchmark::State& state)
{
    auto samples = corpus::load_corpus(CLAIMFORGE_FIXTURE_CORPUS);
    auto registry = backends::BackendRegistry::with_references();
    PipelineConfig config;
    config.workers = static_cast<std::size_t>(state.range(0));
    for (auto _: state) {
        benchmark::DoNotOptimize(pipeline::run_corpus(samples, config, registry));
    }
}
BENCHMARK(fixture_pipeline)->Arg(1)->Arg(4);

}  // namespace

BENCHMARK_MAIN();
