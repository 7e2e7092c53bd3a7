#include "claimforge/contextgen.hpp"

#include <algorithm>
#include <array>

#include "claimforge/backends.hpp"
#include "claimforge/error.hpp"
#include "claimforge/ir.hpp"
#include "claimforge/text.hpp"

namespace claimforge::contextgen {

namespace {

using text::Word;

struct Span {
    std::size_t first = 0;
    std::size_t last = 0;
    UnitKind kind = UnitKind::named_entity;
};

auto is_definite_determiner(std::string_view lower) -> bool
{
    return lower == "the" || lower == "this" || lower == "that" || lower == "these" || lower == "those";
}

auto has_nominal_suffix(std::string_view lower) -> bool
{
    static constexpr std::array<std::string_view, 10> suffixes{"tion", "sion", "ment", "ness", "ity",
                                                               "ance", "ence", "ship", "ism",  "age"};
    if (lower.size() < 6) {
        return false;
    }
    return std::any_of(suffixes.begin(), suffixes.end(), [&](auto s) { return lower.ends_with(s); });
}

auto is_participle(std::string_view word) -> bool
{
    if (word.empty() || text::is_capitalized(word)) {
        return false;
    }
    auto lower = text::to_lower(word);
    return text::is_verb_like(lower) || (lower.size() >= 5 && lower.ends_with("ing"))
        || (lower.size() >= 4 && lower.ends_with("en") && !text::is_stopword(lower));
}

auto is_plain_lower(Word const& w) -> bool
{
    return !w.text.empty() && !text::is_capitalized(w.text);
}

auto joined(std::vector<Word> const& ws, std::size_t a, std::size_t b) -> bool
{
    return !ws[a].boundary_after && !ws[b].boundary_before;
}

auto personal_pronoun(std::string_view lower) -> bool
{
    return lower == "he" || lower == "him" || lower == "his" || lower == "she" || lower == "her" || lower == "hers";
}

auto same_text(std::string_view a, std::string_view b) -> bool
{
    return text::collapse_whitespace(a) == text::collapse_whitespace(b);
}

auto capitalize_first(std::string s) -> std::string
{
    if (!s.empty() && s.front() >= 'a' && s.front() <= 'z') {
        s.front() = static_cast<char>(s.front() - 'a' + 'A');
    }
    return s;
}

auto stage_error(std::string const& stage, std::exception const& e) -> StageError { return {stage, e.what()}; }

}  // namespace

auto to_string(UnitKind kind) -> std::string_view
{
    switch (kind) {
    case UnitKind::named_entity: return "named_entity";
    case UnitKind::pronoun: return "pronoun";
    case UnitKind::noun: return "noun";
    case UnitKind::noun_phrase: return "noun_phrase";
    case UnitKind::verb: return "verb";
    case UnitKind::verb_phrase: return "verb_phrase";
    }
    return "unknown";
}

auto parse_unit_kind(std::string_view name) -> UnitKind
{
    for (auto k: {UnitKind::named_entity, UnitKind::pronoun, UnitKind::noun, UnitKind::noun_phrase, UnitKind::verb,
                  UnitKind::verb_phrase}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    throw InvalidArgument("unknown unit kind '" + std::string(name) + "'");
}

auto ReferenceAnalyzer::analyze(std::string_view sentence) const -> std::vector<InformationUnit>
{
    auto ws = text::words(sentence);
    auto n = ws.size();
    std::vector<Span> candidates;

    for (auto [first, last]: text::name_runs(ws)) {
        candidates.push_back({first, last, UnitKind::named_entity});
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (text::is_pronoun(text::to_lower(ws[i].text))) {
            candidates.push_back({i, i, UnitKind::pronoun});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (!is_definite_determiner(text::to_lower(ws[i].text))) {
            continue;
        }
        std::size_t last = i;
        while (last + 1 < n && last - i < 3 && joined(ws, last, last + 1) && is_plain_lower(ws[last + 1])) {
            auto lower = text::to_lower(ws[last + 1].text);
            if (text::is_stopword(lower) || text::is_pronoun(lower) || text::is_verb_like(lower)) {
                break;
            }
            ++last;
        }
        if (last > i) {
            candidates.push_back({i, last, UnitKind::noun_phrase});
        }
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
        if (text::is_auxiliary(text::to_lower(ws[i].text)) && joined(ws, i, i + 1) && is_participle(ws[i + 1].text)) {
            candidates.push_back({i, i + 1, UnitKind::verb_phrase});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (text::is_verb_like(ws[i].text)) {
            candidates.push_back({i, i, UnitKind::verb});
        }
    }
    for (std::size_t i = 0; i < n; ++i) {
        auto lower = text::to_lower(ws[i].text);
        if (is_plain_lower(ws[i]) && !text::is_stopword(lower) && has_nominal_suffix(lower)) {
            candidates.push_back({i, i, UnitKind::noun});
        }
    }

    std::vector<bool> used(n, false);
    std::vector<Span> accepted;
    for (auto const& c: candidates) {
        bool overlap = false;
        for (auto i = c.first; i <= c.last; ++i) {
            overlap = overlap || used[i];
        }
        if (overlap) {
            continue;
        }
        for (auto i = c.first; i <= c.last; ++i) {
            used[i] = true;
        }
        accepted.push_back(c);
    }

    auto width = [&](Span const& s) { return ws[s.last].end - ws[s.first].begin; };
    std::stable_sort(accepted.begin(), accepted.end(), [&](Span const& a, Span const& b) {
        if (width(a) != width(b)) {
            return width(a) > width(b);
        }
        return a.first < b.first;
    });
    if (accepted.size() > m_unit_cap) {
        accepted.resize(m_unit_cap);
    }
    std::sort(accepted.begin(), accepted.end(), [](Span const& a, Span const& b) { return a.first < b.first; });

    std::vector<InformationUnit> units;
    units.reserve(accepted.size());
    for (auto const& s: accepted) {
        InformationUnit u;
        u.begin = ws[s.first].begin;
        u.end = ws[s.last].end;
        u.text = std::string(sentence.substr(u.begin, u.end - u.begin));
        u.kind = s.kind;
        units.push_back(std::move(u));
    }
    return units;
}

auto extract_information_units(std::string_view sentence, Analyzer const& analyzer) -> std::vector<InformationUnit>
{
    if (text::trim(sentence).empty()) {
        throw InvalidArgument("cannot extract information units from an empty sentence");
    }
    return analyzer.analyze(sentence);
}

auto generate_question(std::string const& sentence, InformationUnit const& unit,
                       backends::BackendRegistry const& registry) -> GeneratedQuestion
{
    return {registry.generate_question(sentence, unit.text, std::string(to_string(unit.kind))), unit};
}

auto retrieve_evidence(ir::Bm25Index const& index, std::string const& question, std::size_t evidence_k,
                       std::optional<std::size_t> exclude) -> std::vector<std::size_t>
{
    if (evidence_k == 0) {
        throw InvalidArgument("evidence_k must be >= 1");
    }
    std::vector<std::size_t> ids;
    for (auto const& hit: index.retrieve(question, index.size())) {
        if (ids.size() == evidence_k) {
            break;
        }
        if (!exclude || hit.unit_id != *exclude) {
            ids.push_back(hit.unit_id);
        }
    }
    return ids;
}

auto answer_from_evidence(corpus::Document const& document, GeneratedQuestion const& question,
                          std::vector<std::size_t> const& evidence_ids, backends::BackendRegistry const& registry)
    -> std::optional<QAPair>
{
    std::vector<std::string> evidence;
    evidence.reserve(evidence_ids.size());
    for (auto id: evidence_ids) {
        evidence.push_back(document.sentence(id));
    }
    auto answer = registry.answer_question(question.question, evidence);
    if (!answer) {
        return std::nullopt;
    }
    return QAPair{question, std::move(*answer), evidence_ids};
}

auto answer_question(corpus::Document const& document, ir::Bm25Index const& index, GeneratedQuestion const& question,
                     backends::BackendRegistry const& registry, std::size_t evidence_k,
                     std::optional<std::size_t> exclude) -> std::optional<QAPair>
{
    return answer_from_evidence(document, question, retrieve_evidence(index, question.question, evidence_k, exclude),
                                registry);
}

auto qa_to_declarative(QAPair const& pair, backends::BackendRegistry const& registry) -> std::string
{
    return registry.to_declarative(pair.question.question, pair.answer);
}

auto build_context(std::size_t sentence_index, corpus::Document const& document, ir::Bm25Index const& index,
                   backends::BackendRegistry const& registry, ContextOptions const& options) -> ContextSet
{
    auto const& sentence = document.sentence(sentence_index);
    ContextSet context;
    context.sentence_index = sentence_index;

    std::vector<InformationUnit> units;
    try {
        units = extract_information_units(sentence, ReferenceAnalyzer(options.unit_cap));
    } catch (std::exception const& e) {
        throw stage_error("analyze", e);
    }

    for (auto const& unit: units) {
        UnitTrace trace;
        trace.unit = unit;
        GeneratedQuestion question;
        try {
            question = generate_question(sentence, unit, registry);
        } catch (std::exception const& e) {
            throw stage_error("qg", e);
        }
        trace.question = question.question;

        std::optional<QAPair> pair;
        try {
            trace.evidence_ids = retrieve_evidence(index, question.question, options.evidence_k, sentence_index);
            pair = answer_from_evidence(document, question, trace.evidence_ids, registry);
        } catch (std::exception const& e) {
            throw stage_error("qa", e);
        }
        if (pair) {
            trace.answer = pair->answer;
            std::string declarative;
            try {
                declarative = qa_to_declarative(*pair, registry);
            } catch (std::exception const& e) {
                throw stage_error("qa2d", e);
            }
            trace.declarative = declarative;
            if (std::find(context.declaratives.begin(), context.declaratives.end(), declarative)
                == context.declaratives.end()) {
                context.declaratives.push_back(std::move(declarative));
            }
        }
        context.trace.push_back(std::move(trace));
    }
    return context;
}

// ---------------------------------------------------------------------------
// Reference QG / QA / QA2D

auto question_template(UnitKind kind, std::string_view unit, std::string_view sentence) -> std::string
{
    std::string u(unit);
    std::string s(sentence);
    switch (kind) {
    case UnitKind::pronoun:
    case UnitKind::named_entity: return "Who or what is " + u + " in: " + s + "?";
    case UnitKind::noun:
    case UnitKind::noun_phrase: return "Which " + u + " is meant in: " + s + "?";
    case UnitKind::verb:
    case UnitKind::verb_phrase: return "What does " + u + " refer to in: " + s + "?";
    }
    return "Who or what is " + u + " in: " + s + "?";
}

auto reference_question(std::string const& sentence, std::string const& answer, std::optional<UnitKind> kind)
    -> std::string
{
    if (!kind) {
        kind = UnitKind::named_entity;
        if (!text::trim(sentence).empty()) {
            for (auto const& u: ReferenceAnalyzer().analyze(sentence)) {
                if (u.text == answer) {
                    kind = u.kind;
                    break;
                }
            }
        }
    }
    return question_template(*kind, answer, sentence);
}

auto parse_question(std::string_view question) -> std::optional<ParsedQuestion>
{
    struct Form {
        ParsedQuestion::Form form;
        std::string_view prefix;
        std::string_view infix;
    };
    static constexpr std::array<Form, 3> forms{{
        {ParsedQuestion::Form::who_what, "Who or what is ", " in: "},
        {ParsedQuestion::Form::which, "Which ", " is meant in: "},
        {ParsedQuestion::Form::refer, "What does ", " refer to in: "},
    }};
    if (!question.ends_with('?')) {
        return std::nullopt;
    }
    question.remove_suffix(1);
    for (auto const& f: forms) {
        if (!question.starts_with(f.prefix)) {
            continue;
        }
        auto rest = question.substr(f.prefix.size());
        auto at = rest.find(f.infix);
        if (at == std::string_view::npos || at == 0) {
            continue;
        }
        ParsedQuestion parsed;
        parsed.form = f.form;
        parsed.unit = std::string(rest.substr(0, at));
        parsed.sentence = std::string(rest.substr(at + f.infix.size()));
        return parsed;
    }
    return std::nullopt;
}

auto reference_answer(std::string const& question, std::vector<std::string> const& evidence)
    -> std::optional<std::string>
{
    auto parsed = parse_question(question);
    if (!parsed || parsed->form == ParsedQuestion::Form::refer) {
        return std::nullopt;
    }
    auto unit_lower = text::to_lower(parsed->unit);

    if (text::is_pronoun(unit_lower)) {
        if (!personal_pronoun(unit_lower)) {
            return std::nullopt;
        }
        for (auto const& e: evidence) {
            if (same_text(e, parsed->sentence)) {
                continue;
            }
            auto ws = text::words(e);
            for (auto [first, last]: text::name_runs(ws)) {
                if (last > first) {
                    return e.substr(ws[first].begin, ws[last].end - ws[first].begin);
                }
            }
        }
        return std::nullopt;
    }

    std::vector<std::string> unit_words;
    for (auto const& w: text::words(parsed->unit)) {
        unit_words.push_back(text::to_lower(w.text));
    }
    if (unit_words.empty()) {
        return std::nullopt;
    }
    auto m = unit_words.size();

    std::optional<std::string> best;
    std::size_t best_len = m;
    for (auto const& e: evidence) {
        if (same_text(e, parsed->sentence)) {
            continue;
        }
        auto ws = text::words(e);
        auto n = ws.size();
        for (std::size_t p = 0; p + m <= n; ++p) {
            bool match = true;
            for (std::size_t j = 0; j < m && match; ++j) {
                match = text::to_lower(ws[p + j].text) == unit_words[j];
            }
            if (!match) {
                continue;
            }
            auto l = p;
            while (l > 0 && joined(ws, l - 1, l)) {
                auto lower = text::to_lower(ws[l - 1].text);
                if (text::is_stopword(lower) || text::is_pronoun(lower) || text::is_determiner(lower)
                    || text::is_verb_like(ws[l - 1].text)) {
                    break;
                }
                --l;
            }
            auto r = p + m - 1;
            for (;;) {
                if (r + 2 >= n || !joined(ws, r, r + 1) || !joined(ws, r + 1, r + 2)) {
                    break;
                }
                auto prep = text::to_lower(ws[r + 1].text);
                bool allowed = prep == "of" || prep == "on" || prep == "in" || prep == "at" || prep == "from"
                    || prep == "for";
                if (!allowed || !text::is_name_like(ws[r + 2].text)) {
                    break;
                }
                auto q = r + 2;
                while (q + 1 < n && joined(ws, q, q + 1) && text::is_name_like(ws[q + 1].text)) {
                    ++q;
                }
                r = q;
            }
            auto len = r - l + 1;
            if (len > best_len) {
                best_len = len;
                best = e.substr(ws[l].begin, ws[r].end - ws[l].begin);
            }
        }
    }
    return best;
}

auto reference_declarative(std::string const& question, std::string const& answer) -> std::string
{
    std::string a(text::trim(answer));
    while (!a.empty() && a.back() == '?') {
        a.pop_back();
    }
    auto finish = [](std::string s) {
        if (!s.ends_with('.')) {
            s.push_back('.');
        }
        return capitalize_first(std::move(s));
    };
    auto parsed = parse_question(question);
    if (!parsed) {
        return finish(a);
    }
    auto const& x = parsed->unit;
    switch (parsed->form) {
    case ParsedQuestion::Form::who_what: return finish(x + " is " + a);
    case ParsedQuestion::Form::which: {
        auto ws = text::words(x);
        if (!ws.empty() && text::is_determiner(text::to_lower(ws.front().text))) {
            return finish(x + " is " + a);
        }
        return finish("The " + x + " is " + a);
    }
    case ParsedQuestion::Form::refer: return finish(x + " refers to " + a);
    }
    return finish(a);
}

}  // namespace claimforge::contextgen
