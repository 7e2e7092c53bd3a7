#include "claimforge/pipeline.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "parallel.hpp"

namespace claimforge::pipeline {

namespace {

template <typename Fn>
auto stage(char const* name, Fn&& fn) -> decltype(fn())
{
    try {
        return fn();
    } catch (StageError const&) {
        throw;
    } catch (std::exception const& e) {
        throw StageError(name, e.what());
    }
}

}  // namespace

auto PipelineResult::selected_candidate() const -> CandidateResult const&
{
    for (auto const& c: candidates) {
        if (c.index == selection.source_sentence_index) {
            return c;
        }
    }
    throw Error("document '" + document_id + "' has no selected candidate");
}

auto make_registry(PipelineConfig const& config) -> backends::BackendRegistry
{
    auto registry = config.backends_config.empty()
        ? backends::BackendRegistry::from_environment()
        : backends::BackendRegistry::from_descriptor_file(config.backends_config);
    registry.require_complete();
    return registry;
}

auto run_document(corpus::Document const& document, PipelineConfig const& config,
                  backends::BackendRegistry const& registry) -> PipelineResult
{
    config.validate();
    PipelineResult result;
    result.document_id = document.id;
    result.scorer = std::string(extraction::to_string(config.scoring.scorer));
    if (document.size() == 0) {
        throw StageError("score", "document has no sentences");
    }

    result.scores = stage("score", [&] { return extraction::score_sentences(document, config.scoring, registry); });
    auto ranked = stage("rank", [&] { return extraction::rank_sentences(result.scores); });
    result.ranked = ranked.ordering;

    auto depth = std::max(config.eval_depth, config.k());
    auto central = stage("dedup", [&] {
        return extraction::dedup_topk(ranked, document, registry, depth, config.threshold);
    });
    auto const& selected = central.selected;
    result.evaluation_ranking.assign(selected.begin(),
                                     selected.begin() + static_cast<std::ptrdiff_t>(std::min(config.eval_depth, selected.size())));
    result.central.assign(selected.begin(),
                          selected.begin() + static_cast<std::ptrdiff_t>(std::min(config.k(), selected.size())));

    auto index = ir::Bm25Index::build(document.texts());
    std::set<std::size_t> exempt;
    if (config.exempt_lead) {
        exempt.insert(0);
    }

    for (auto i: result.central) {
        CandidateResult c;
        c.index = i;
        c.sentence = document.sentence(i);
        c.context.sentence_index = i;
        if (!exempt.contains(i)) {
            c.context = stage("context", [&] {
                return contextgen::build_context(i, document, index, registry, config.context);
            });
            c.decontext_input = decontext::format_decontext_input(c.context, c.sentence);
        }
        c.decontext = stage("decontext", [&] {
            return decontext::decontextualise(document.sentences[i], c.context, registry, exempt);
        });
        result.candidates.push_back(std::move(c));
    }

    std::vector<decontext::DecontextResult> decontexted;
    std::vector<checkworthy::CheckworthinessScore> scores;
    for (auto& c: result.candidates) {
        c.score = stage("classify", [&] { return checkworthy::classify(c.decontext.text, registry); });
        decontexted.push_back(c.decontext);
        scores.push_back(c.score);
    }
    result.selection = stage("select", [&] { return checkworthy::select_claim(decontexted, scores); });
    return result;
}

auto outcome(PipelineResult const& result) -> ClaimOutcome
{
    ClaimOutcome o;
    o.document_id = result.document_id;
    o.ranking = result.evaluation_ranking;
    o.source_index = result.selection.source_sentence_index;
    o.claim_text = result.selection.claim_text;
    o.category = result.selected_candidate().decontext.category;
    return o;
}

auto evaluate(std::vector<ClaimOutcome> const& outcomes, std::vector<corpus::ExtractionSample> const& samples,
              PipelineConfig const& config) -> EvaluationSummary
{
    std::map<std::string, corpus::ExtractionSample const*> by_id;
    for (auto const& s: samples) {
        by_id[s.document.id] = &s;
    }

    EvaluationSummary summary;
    std::vector<evaluation::RankedItem> items;
    evaluation::MetricReport chrf_original{"claim.chrf.original", 0.0, {}, {}, {}};
    evaluation::MetricReport chrf_decontext{"claim.chrf.decontextualised", 0.0, {}, {}, {}};
    evaluation::MetricReport sari_original{"claim.sari.original", 0.0, {}, {}, {}};
    evaluation::MetricReport sari_decontext{"claim.sari.decontextualised", 0.0, {}, {}, {}};
    std::vector<decontext::DecontextResult> claims;

    for (auto const& o: outcomes) {
        auto it = by_id.find(o.document_id);
        if (it == by_id.end()) {
            summary.failures.push_back({o.document_id, "evaluate", "no gold sample with this id"});
            continue;
        }
        auto const& sample = *it->second;
        auto const& doc = sample.document;
        if (o.source_index >= doc.size()) {
            summary.failures.push_back({o.document_id, "evaluate", "claim source index out of range"});
            continue;
        }
        items.push_back({o.document_id, o.ranking, evaluation::proxy_gold_sentence(doc, sample.gold_claim, config.chrf)});
        auto const& original = doc.sentence(o.source_index);
        chrf_original.per_item.emplace_back(o.document_id, evaluation::chrf(original, sample.gold_claim, config.chrf));
        chrf_decontext.per_item.emplace_back(o.document_id,
                                             evaluation::chrf(o.claim_text, sample.gold_claim, config.chrf));
        sari_original.per_item.emplace_back(o.document_id, evaluation::sari(original, original, {sample.gold_claim}));
        sari_decontext.per_item.emplace_back(o.document_id,
                                             evaluation::sari(original, o.claim_text, {sample.gold_claim}));
        decontext::DecontextResult claim;
        claim.category = o.category;
        claim.text = o.claim_text;
        claim.original_index = o.source_index;
        claims.push_back(std::move(claim));
    }
    summary.documents = items.size();
    summary.categories = evaluation::category_stats(claims);
    if (items.empty()) {
        return summary;
    }

    summary.reports = evaluation::precision_at_k(items, evaluation::kDefaultKs, "extraction.P");
    for (auto& r: summary.reports) {
        r.note = "gold sentence is the chrF argmax against the gold claim (proxy, circular by construction)";
    }
    for (auto* r: {&chrf_original, &chrf_decontext, &sari_original, &sari_decontext}) {
        double sum = 0.0;
        for (auto const& [_, v]: r->per_item) {
            sum += v;
        }
        r->aggregate = sum / static_cast<double>(r->per_item.size());
        summary.reports.push_back(std::move(*r));
    }
    return summary;
}

auto run_corpus(std::vector<corpus::ExtractionSample> const& samples, PipelineConfig const& config,
                backends::BackendRegistry const& registry) -> CorpusRun
{
    if (samples.empty()) {
        throw NoDataError("empty corpus");
    }
    config.validate();
    registry.require_complete();

    CorpusRun run;
    run.results.resize(samples.size());
    detail::parallel_for(samples.size(), config.workers, [&](std::size_t i) {
        auto const& doc = samples[i].document;
        try {
            run.results[i] = run_document(doc, config, registry);
        } catch (StageError const& e) {
            run.results[i] = PipelineResult{};
            run.results[i].document_id = doc.id;
            run.results[i].failed_stage = e.stage();
            run.results[i].error = e.what();
        } catch (std::exception const& e) {
            run.results[i] = PipelineResult{};
            run.results[i].document_id = doc.id;
            run.results[i].failed_stage = "pipeline";
            run.results[i].error = e.what();
        }
    });

    std::vector<ClaimOutcome> outcomes;
    std::vector<Failure> failures;
    for (auto const& r: run.results) {
        if (r.ok()) {
            outcomes.push_back(outcome(r));
        } else {
            failures.push_back({r.document_id, *r.failed_stage, r.error});
        }
    }
    run.summary = evaluate(outcomes, samples, config);
    run.summary.failures.insert(run.summary.failures.begin(), failures.begin(), failures.end());
    return run;
}

}  // namespace claimforge::pipeline
