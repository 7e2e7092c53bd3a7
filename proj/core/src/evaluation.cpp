#include "claimforge/evaluation.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <unordered_map>

#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"

namespace claimforge::evaluation {

namespace {

using Counts = std::map<std::string, double>;

auto code_points(std::string_view s) -> std::vector<std::string_view>
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        auto c = static_cast<unsigned char>(s[i]);
        std::size_t len = 1;
        if (c >= 0xF0) {
            len = 4;
        } else if (c >= 0xE0) {
            len = 3;
        } else if (c >= 0xC0) {
            len = 2;
        }
        len = std::min(len, s.size() - i);
        out.push_back(s.substr(i, len));
        i += len;
    }
    return out;
}

auto char_ngrams(std::vector<std::string_view> const& chars, std::size_t n) -> std::unordered_map<std::string, double>
{
    std::unordered_map<std::string, double> counts;
    if (chars.size() < n) {
        return counts;
    }
    for (std::size_t i = 0; i + n <= chars.size(); ++i) {
        std::string gram;
        for (std::size_t j = 0; j < n; ++j) {
            gram += chars[i + j];
        }
        counts[gram] += 1.0;
    }
    return counts;
}

auto word_ngrams(std::vector<std::string> const& tokens, std::size_t n) -> Counts
{
    Counts counts;
    for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
        std::string gram = tokens[i];
        for (std::size_t j = 1; j < n; ++j) {
            gram += ' ';
            gram += tokens[i + j];
        }
        counts[gram] += 1.0;
    }
    return counts;
}

auto intersect(Counts const& a, Counts const& b) -> Counts
{
    Counts out;
    for (auto const& [g, c]: a) {
        if (auto it = b.find(g); it != b.end()) {
            auto m = std::min(c, it->second);
            if (m > 0) {
                out[g] = m;
            }
        }
    }
    return out;
}

auto subtract(Counts const& a, Counts const& b) -> Counts
{
    Counts out;
    for (auto const& [g, c]: a) {
        auto it = b.find(g);
        auto d = c - (it == b.end() ? 0.0 : it->second);
        if (d > 0) {
            out[g] = d;
        }
    }
    return out;
}

auto count_of(Counts const& c, std::string const& g) -> double
{
    auto it = c.find(g);
    return it == c.end() ? 0.0 : it->second;
}

auto f1(double p, double r) -> double { return p + r > 0 ? 2 * p * r / (p + r) : 0.0; }

struct SariParts {
    double keep = 0.0;
    double del = 0.0;
    double add = 0.0;
};

auto sari_order(Counts const& s, Counts const& c, Counts const& r, double num_refs) -> SariParts
{
    Counts s_rep;
    Counts c_rep;
    for (auto const& [g, n]: s) {
        s_rep[g] = n * num_refs;
    }
    for (auto const& [g, n]: c) {
        c_rep[g] = n * num_refs;
    }
    SariParts parts;

    auto kept = intersect(s_rep, c_rep);
    auto kept_good = intersect(kept, r);
    auto keep_all = intersect(s_rep, r);
    if (kept.empty() && keep_all.empty()) {
        parts.keep = 1.0;
    } else {
        double p = 0.0;
        double rec = 0.0;
        for (auto const& [g, n]: kept) {
            p += count_of(kept_good, g) / n;
        }
        for (auto const& [g, n]: keep_all) {
            rec += count_of(kept_good, g) / n;
        }
        p = kept.empty() ? 0.0 : p / static_cast<double>(kept.size());
        rec = keep_all.empty() ? 0.0 : rec / static_cast<double>(keep_all.size());
        parts.keep = f1(p, rec);
    }

    auto deleted = subtract(s_rep, c_rep);
    auto deleted_good = subtract(deleted, r);
    auto delete_all = subtract(s_rep, r);
    if (deleted.empty() && delete_all.empty()) {
        parts.del = 1.0;
    } else if (!deleted.empty()) {
        double p = 0.0;
        for (auto const& [g, n]: deleted) {
            p += count_of(deleted_good, g) / n;
        }
        parts.del = p / static_cast<double>(deleted.size());
    }

    std::set<std::string> added;
    std::set<std::string> wanted;
    for (auto const& [g, n]: c) {
        if (!s.contains(g)) {
            added.insert(g);
        }
    }
    for (auto const& [g, n]: r) {
        if (!s.contains(g)) {
            wanted.insert(g);
        }
    }
    if (added.empty() && wanted.empty()) {
        parts.add = 1.0;
    } else {
        double good = 0.0;
        for (auto const& g: added) {
            good += wanted.contains(g) ? 1.0 : 0.0;
        }
        double p = added.empty() ? 0.0 : good / static_cast<double>(added.size());
        double rec = wanted.empty() ? 0.0 : good / static_cast<double>(wanted.size());
        parts.add = f1(p, rec);
    }
    return parts;
}

template <typename Parse>
auto read_jsonl(std::istream& in, char const* what, Parse parse)
{
    std::vector<decltype(parse(nlohmann::json{}))> out;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (text::trim(line).empty()) {
            continue;
        }
        try {
            out.push_back(parse(nlohmann::json::parse(line)));
        } catch (nlohmann::json::exception const& e) {
            throw FormatError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
        } catch (InvalidArgument const& e) {
            throw FormatError(std::string(what) + " line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

}  // namespace

void ChrfParams::validate() const
{
    if (max_n == 0) {
        throw InvalidArgument("chrF max_n must be >= 1");
    }
    if (!(beta > 0.0)) {
        throw InvalidArgument("chrF beta must be positive");
    }
}

auto chrf(std::string_view hypothesis, std::string_view reference, ChrfParams const& params) -> double
{
    params.validate();
    auto hyp = text::collapse_whitespace(hypothesis);
    auto ref = text::collapse_whitespace(reference);
    if (hyp.empty() && ref.empty()) {
        return 100.0;
    }
    if (hyp.empty() || ref.empty()) {
        return 0.0;
    }
    auto hc = code_points(hyp);
    auto rc = code_points(ref);
    auto b2 = params.beta * params.beta;
    double total = 0.0;
    std::size_t orders = 0;
    for (std::size_t n = 1; n <= params.max_n; ++n) {
        auto h = char_ngrams(hc, n);
        auto r = char_ngrams(rc, n);
        if (h.empty() || r.empty()) {
            continue;
        }
        double h_total = static_cast<double>(hc.size() - n + 1);
        double r_total = static_cast<double>(rc.size() - n + 1);
        double match = 0.0;
        for (auto const& [g, c]: h) {
            if (auto it = r.find(g); it != r.end()) {
                match += std::min(c, it->second);
            }
        }
        double p = match / h_total;
        double rec = match / r_total;
        double f = (p > 0.0 || rec > 0.0) ? (1.0 + b2) * p * rec / (b2 * p + rec) : 0.0;
        total += f;
        ++orders;
    }
    return orders == 0 ? 0.0 : 100.0 * total / static_cast<double>(orders);
}

auto sari(std::string_view source, std::string_view hypothesis, std::vector<std::string> const& references) -> double
{
    if (references.empty()) {
        throw InvalidArgument("sari needs at least one reference");
    }
    auto src = ir::tokenize(source);
    auto hyp = ir::tokenize(hypothesis);
    std::vector<std::vector<std::string>> refs;
    refs.reserve(references.size());
    for (auto const& r: references) {
        refs.push_back(ir::tokenize(r));
    }
    double keep = 0.0;
    double del = 0.0;
    double add = 0.0;
    for (std::size_t n = 1; n <= 4; ++n) {
        Counts r;
        for (auto const& ref: refs) {
            for (auto const& [g, c]: word_ngrams(ref, n)) {
                r[g] += c;
            }
        }
        auto parts = sari_order(word_ngrams(src, n), word_ngrams(hyp, n), r, static_cast<double>(refs.size()));
        keep += parts.keep;
        del += parts.del;
        add += parts.add;
    }
    return 100.0 * (keep / 4.0 + del / 4.0 + add / 4.0) / 3.0;
}

auto proxy_gold_sentence(corpus::Document const& document, std::string_view gold_claim, ChrfParams const& params)
    -> std::size_t
{
    if (document.size() == 0) {
        throw InvalidArgument("proxy_gold_sentence: document '" + document.id + "' has no sentences");
    }
    std::size_t best = 0;
    double best_score = -1.0;
    for (std::size_t i = 0; i < document.size(); ++i) {
        auto score = chrf(document.sentence(i), gold_claim, params);
        if (score > best_score) {
            best = i;
            best_score = score;
        }
    }
    return best;
}

auto to_json(MetricReport const& report) -> nlohmann::ordered_json
{
    nlohmann::ordered_json j;
    j["name"] = report.name;
    j["aggregate"] = report.aggregate;
    j["k_values"] = report.k_values.empty() ? nlohmann::ordered_json(nullptr) : nlohmann::ordered_json(report.k_values);
    auto items = nlohmann::ordered_json::array();
    for (auto const& [id, value]: report.per_item) {
        nlohmann::ordered_json item;
        item["id"] = id;
        item["value"] = value;
        items.push_back(std::move(item));
    }
    j["per_item"] = std::move(items);
    if (!report.note.empty()) {
        j["note"] = report.note;
    }
    return j;
}

auto report_from_json(nlohmann::json const& j) -> MetricReport
{
    MetricReport r;
    r.name = j.at("name").get<std::string>();
    r.aggregate = j.at("aggregate").get<double>();
    if (!j.at("k_values").is_null()) {
        r.k_values = j.at("k_values").get<std::vector<std::size_t>>();
    }
    for (auto const& item: j.at("per_item")) {
        r.per_item.emplace_back(item.at("id").get<std::string>(), item.at("value").get<double>());
    }
    r.note = j.value("note", std::string{});
    return r;
}

auto hit_at_k(std::vector<std::size_t> const& ranked, std::size_t gold, std::size_t k) -> bool
{
    auto end = ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size()));
    return std::find(ranked.begin(), end, gold) != end;
}

void check_monotone(std::vector<MetricReport> const& reports)
{
    for (std::size_t i = 1; i < reports.size(); ++i) {
        if (reports[i].aggregate < reports[i - 1].aggregate) {
            throw Error("precision is not non-decreasing in k: " + reports[i - 1].name + " > " + reports[i].name);
        }
    }
}

auto precision_at_k(std::vector<RankedItem> const& items, std::vector<std::size_t> const& ks, std::string const& prefix)
    -> std::vector<MetricReport>
{
    if (items.empty()) {
        throw NoDataError("precision_at_k over no items");
    }
    auto sorted = ks;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::vector<MetricReport> reports;
    for (auto k: sorted) {
        if (k == 0) {
            throw InvalidArgument("precision_at_k: k must be >= 1");
        }
        MetricReport report;
        report.name = prefix + "@" + std::to_string(k);
        report.k_values = {k};
        double hits = 0.0;
        for (auto const& item: items) {
            double v = hit_at_k(item.ranked, item.gold, k) ? 1.0 : 0.0;
            hits += v;
            report.per_item.emplace_back(item.id, v);
        }
        report.aggregate = 100.0 * hits / static_cast<double>(items.size());
        reports.push_back(std::move(report));
    }
    check_monotone(reports);
    return reports;
}

void EvidenceSet::validate() const
{
    if (units.empty()) {
        throw InvalidArgument("evidence set '" + claim_id + "' has no units");
    }
    if (gold_ids.empty()) {
        throw InvalidArgument("evidence set '" + claim_id + "' has no gold ids");
    }
    for (auto g: gold_ids) {
        if (g >= units.size()) {
            throw InvalidArgument("evidence set '" + claim_id + "': gold id " + std::to_string(g) + " out of range");
        }
    }
}

auto read_evidence(std::istream& in) -> std::vector<EvidenceSet>
{
    return read_jsonl(in, "evidence", [](nlohmann::json const& j) {
        EvidenceSet e;
        e.claim_id = j.at("claim_id").get<std::string>();
        e.units = j.at("units").get<std::vector<std::string>>();
        e.gold_ids = j.at("gold_ids").get<std::vector<std::size_t>>();
        e.validate();
        return e;
    });
}

auto load_evidence(std::filesystem::path const& path) -> std::vector<EvidenceSet>
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read evidence file " + path.string());
    }
    return read_evidence(in);
}

auto read_claim_variants(std::istream& in) -> std::vector<ClaimVariants>
{
    return read_jsonl(in, "claims", [](nlohmann::json const& j) {
        ClaimVariants c;
        c.claim_id = j.at("claim_id").get<std::string>();
        c.variants = j.at("variants").get<std::map<std::string, std::string>>();
        return c;
    });
}

auto load_claim_variants(std::filesystem::path const& path) -> std::vector<ClaimVariants>
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read claims file " + path.string());
    }
    return read_claim_variants(in);
}

auto retrieval_precision(std::string_view query, EvidenceSet const& evidence, std::size_t k) -> double
{
    if (k == 0) {
        throw InvalidArgument("retrieval precision: k must be >= 1");
    }
    auto index = ir::Bm25Index::build(evidence.units);
    auto top = index.retrieve(query, k);
    std::set<std::size_t> gold(evidence.gold_ids.begin(), evidence.gold_ids.end());
    double hits = 0.0;
    for (auto const& hit: top) {
        hits += gold.contains(hit.unit_id) ? 1.0 : 0.0;
    }
    return hits / static_cast<double>(k);
}

auto retrieval_eval(std::vector<ClaimVariants> const& claims, std::vector<EvidenceSet> const& evidence,
                    std::vector<std::size_t> const& ks) -> std::vector<MetricReport>
{
    if (claims.empty()) {
        throw NoDataError("retrieval_eval over no claims");
    }
    std::map<std::string, EvidenceSet const*> by_id;
    for (auto const& e: evidence) {
        e.validate();
        by_id[e.claim_id] = &e;
    }
    std::set<std::string> variant_names;
    for (auto const& c: claims) {
        if (!by_id.contains(c.claim_id)) {
            throw InvalidArgument("no evidence for claim '" + c.claim_id + "'");
        }
        for (auto const& [name, _]: c.variants) {
            variant_names.insert(name);
        }
    }
    std::vector<MetricReport> reports;
    for (auto const& name: variant_names) {
        for (auto k: ks) {
            MetricReport report;
            report.name = "retrieval." + name + ".P@" + std::to_string(k);
            report.k_values = {k};
            double sum = 0.0;
            for (auto const& c: claims) {
                auto it = c.variants.find(name);
                if (it == c.variants.end()) {
                    continue;
                }
                auto v = 100.0 * retrieval_precision(it->second, *by_id.at(c.claim_id), k);
                sum += v;
                report.per_item.emplace_back(c.claim_id, v);
            }
            report.aggregate = report.per_item.empty() ? 0.0 : sum / static_cast<double>(report.per_item.size());
            reports.push_back(std::move(report));
        }
    }
    return reports;
}

auto category_stats(std::vector<decontext::DecontextResult> const& results) -> CategoryCounts
{
    CategoryCounts counts;
    for (auto const& r: results) {
        switch (r.category) {
        case decontext::Category::feasible: ++counts.feasible; break;
        case decontext::Category::infeasible: ++counts.infeasible; break;
        case decontext::Category::unnecessary: ++counts.unnecessary; break;
        }
    }
    return counts;
}

}  // namespace claimforge::evaluation
