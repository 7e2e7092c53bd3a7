#include <fstream>

#include "claimforge/error.hpp"
#include "claimforge/pipeline.hpp"
#include "claimforge/text.hpp"

namespace claimforge::pipeline {

namespace {

auto unit_json(contextgen::InformationUnit const& u) -> ordered_json
{
    ordered_json j;
    j["text"] = u.text;
    j["kind"] = std::string(contextgen::to_string(u.kind));
    j["begin"] = u.begin;
    j["end"] = u.end;
    return j;
}

}  // namespace

auto to_json(PipelineResult const& result) -> ordered_json
{
    ordered_json j;
    j["document_id"] = result.document_id;
    if (!result.ok()) {
        j["status"] = "failed";
        j["stage"] = *result.failed_stage;
        j["error"] = result.error;
        return j;
    }
    j["status"] = "ok";
    j["scorer"] = result.scorer;
    auto scores = ordered_json::array();
    for (auto const& s: result.scores) {
        scores.push_back(s.score);
    }
    j["scores"] = std::move(scores);
    j["ranked"] = result.ranked;
    j["evaluation_ranking"] = result.evaluation_ranking;
    j["central"] = result.central;

    auto candidates = ordered_json::array();
    for (auto const& c: result.candidates) {
        ordered_json cj;
        cj["index"] = c.index;
        cj["sentence"] = c.sentence;
        cj["declaratives"] = c.context.declaratives;
        cj["category"] = std::string(decontext::to_string(c.decontext.category));
        cj["text"] = c.decontext.text;
        if (!c.decontext.warning.empty()) {
            cj["warning"] = c.decontext.warning;
        }
        cj["cfs"] = c.score.cfs;
        cj["ufs"] = c.score.ufs;
        cj["nfs"] = c.score.nfs;
        candidates.push_back(std::move(cj));
    }
    j["candidates"] = std::move(candidates);

    ordered_json claim;
    claim["text"] = result.selection.claim_text;
    claim["source_index"] = result.selection.source_sentence_index;
    claim["category"] = std::string(decontext::to_string(result.selected_candidate().decontext.category));
    claim["cfs"] = result.selection.cfs_score;
    auto cand_scores = ordered_json::array();
    for (auto const& [index, cfs]: result.selection.candidate_scores) {
        ordered_json s;
        s["index"] = index;
        s["cfs"] = cfs;
        cand_scores.push_back(std::move(s));
    }
    claim["candidate_scores"] = std::move(cand_scores);
    j["claim"] = std::move(claim);
    return j;
}

auto trace_json(PipelineResult const& result) -> std::vector<ordered_json>
{
    std::vector<ordered_json> out;
    for (auto const& c: result.candidates) {
        ordered_json j;
        j["document_id"] = result.document_id;
        j["sentence_index"] = c.index;
        j["sentence"] = c.sentence;
        auto units = ordered_json::array();
        for (auto const& t: c.context.trace) {
            ordered_json u;
            u["unit"] = unit_json(t.unit);
            u["question"] = t.question;
            u["evidence_ids"] = t.evidence_ids;
            u["answer"] = t.answer ? ordered_json(*t.answer) : ordered_json(nullptr);
            u["declarative"] = t.declarative ? ordered_json(*t.declarative) : ordered_json(nullptr);
            units.push_back(std::move(u));
        }
        j["units"] = std::move(units);
        j["declaratives"] = c.context.declaratives;
        j["decontext_called"] = !c.decontext_input.empty();
        j["decontext_input"] = c.decontext_input;
        j["category"] = std::string(decontext::to_string(c.decontext.category));
        j["classified_text"] = c.decontext.text;
        j["cfs"] = c.score.cfs;
        out.push_back(std::move(j));
    }
    return out;
}

auto to_json(EvaluationSummary const& summary) -> ordered_json
{
    ordered_json j;
    j["documents"] = summary.documents;
    auto reports = ordered_json::array();
    for (auto const& r: summary.reports) {
        reports.push_back(evaluation::to_json(r));
    }
    j["reports"] = std::move(reports);
    ordered_json categories;
    categories["feasible"] = summary.categories.feasible;
    categories["infeasible"] = summary.categories.infeasible;
    categories["unnecessary"] = summary.categories.unnecessary;
    categories["total"] = summary.categories.total();
    j["categories"] = std::move(categories);
    auto failures = ordered_json::array();
    for (auto const& f: summary.failures) {
        ordered_json fj;
        fj["document_id"] = f.document_id;
        fj["stage"] = f.stage;
        fj["message"] = f.message;
        failures.push_back(std::move(fj));
    }
    j["failures"] = std::move(failures);
    return j;
}

void write_results(std::ostream& out, std::vector<PipelineResult> const& results)
{
    for (auto const& r: results) {
        out << to_json(r).dump() << '\n';
    }
}

void write_trace(std::ostream& out, std::vector<PipelineResult> const& results)
{
    for (auto const& r: results) {
        for (auto const& line: trace_json(r)) {
            out << line.dump() << '\n';
        }
    }
}

auto read_results(std::istream& in) -> ResultsFile
{
    ResultsFile file;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        try {
            auto j = nlohmann::json::parse(line);
            auto id = j.at("document_id").get<std::string>();
            if (j.at("status").get<std::string>() != "ok") {
                file.failures.push_back({id, j.value("stage", std::string{}), j.value("error", std::string{})});
                continue;
            }
            ClaimOutcome o;
            o.document_id = id;
            o.ranking = j.at("evaluation_ranking").get<std::vector<std::size_t>>();
            auto const& claim = j.at("claim");
            o.source_index = claim.at("source_index").get<std::size_t>();
            o.claim_text = claim.at("text").get<std::string>();
            auto category = decontext::parse_category(claim.at("category").get<std::string>());
            if (!category) {
                throw FormatError("unknown category");
            }
            o.category = *category;
            file.outcomes.push_back(std::move(o));
        } catch (nlohmann::json::exception const& e) {
            throw FormatError("results line " + std::to_string(line_no) + ": " + e.what());
        } catch (FormatError const& e) {
            throw FormatError("results line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return file;
}

auto load_results(std::filesystem::path const& path) -> ResultsFile
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read results file " + path.string());
    }
    return read_results(in);
}

}  // namespace claimforge::pipeline
