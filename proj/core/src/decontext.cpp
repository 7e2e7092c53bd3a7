#include "claimforge/decontext.hpp"

#include <algorithm>

#include "claimforge/backends.hpp"
#include "claimforge/text.hpp"

namespace claimforge::decontext {

namespace {

auto lower_words(std::string_view s) -> std::vector<std::string>
{
    std::vector<std::string> out;
    for (auto const& w: text::words(s)) {
        out.push_back(text::to_lower(w.text));
    }
    return out;
}

// First index at which `needle` occurs in `hay` with every covered slot free.
auto find_words(std::vector<std::string> const& hay, std::vector<std::string> const& needle,
                std::vector<bool> const* used = nullptr) -> std::optional<std::size_t>
{
    if (needle.empty() || needle.size() > hay.size()) {
        return std::nullopt;
    }
    for (std::size_t p = 0; p + needle.size() <= hay.size(); ++p) {
        bool ok = true;
        for (std::size_t j = 0; j < needle.size() && ok; ++j) {
            ok = hay[p + j] == needle[j] && (used == nullptr || !(*used)[p + j]);
        }
        if (ok) {
            return p;
        }
    }
    return std::nullopt;
}

auto is_initialism(std::string_view word) -> bool
{
    return word.size() >= 2 && word.back() == '.' && word.substr(0, word.size() - 1).find('.') != std::string_view::npos;
}

auto split_all(std::string_view s, std::string_view sep) -> std::vector<std::string>
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    for (auto at = s.find(sep); at != std::string_view::npos; at = s.find(sep, start)) {
        parts.emplace_back(s.substr(start, at - start));
        start = at + sep.size();
    }
    parts.emplace_back(s.substr(start));
    return parts;
}

struct Replacement {
    std::size_t begin = 0;
    std::size_t end = 0;
    std::string text;
};

}  // namespace

auto to_string(Category category) -> std::string_view
{
    switch (category) {
    case Category::feasible: return "feasible";
    case Category::infeasible: return "infeasible";
    case Category::unnecessary: return "unnecessary";
    }
    return "infeasible";
}

auto parse_category(std::string_view name) -> std::optional<Category>
{
    for (auto c: {Category::feasible, Category::infeasible, Category::unnecessary}) {
        if (to_string(c) == name) {
            return c;
        }
    }
    return std::nullopt;
}

auto format_decontext_input(std::vector<std::string> const& declaratives, std::string_view sentence) -> std::string
{
    std::string out(kCls);
    for (auto const& d: declaratives) {
        out += d;
        out += kSep;
    }
    out += sentence;
    return out;
}

auto format_decontext_input(contextgen::ContextSet const& context, std::string_view sentence) -> std::string
{
    return format_decontext_input(context.declaratives, sentence);
}

auto parse_decontext_output(std::string_view raw) -> ParsedOutput
{
    std::string_view head = raw;
    std::string_view rest;
    if (auto at = raw.find(kSep); at != std::string_view::npos) {
        head = raw.substr(0, at);
        rest = raw.substr(at + kSep.size());
    } else if (auto bare = text::trim(raw); bare.ends_with(" [SEP]")) {
        head = bare.substr(0, bare.size() - 6);
    }
    ParsedOutput out;
    if (auto category = parse_category(text::trim(head))) {
        out.category = *category;
        out.text = std::string(rest);
    } else {
        out.category = Category::infeasible;
        out.warning = "unrecognized decontext output '" + std::string(raw.substr(0, 80)) + "'";
    }
    return out;
}

auto decontextualise(corpus::SentenceRecord const& sentence, contextgen::ContextSet const& context,
                     backends::BackendRegistry const& registry, std::set<std::size_t> const& exempt)
    -> DecontextResult
{
    DecontextResult result;
    result.original_index = sentence.index;
    result.text = sentence.text;
    if (exempt.contains(sentence.index)) {
        result.category = Category::unnecessary;
        return result;
    }
    auto parsed = parse_decontext_output(registry.decontextualise(format_decontext_input(context, sentence.text)));
    result.category = parsed.category;
    result.warning = parsed.warning;
    if (parsed.category == Category::feasible) {
        if (text::trim(parsed.text).empty()) {
            result.category = Category::infeasible;
            result.warning = "feasible output without text";
        } else {
            result.text = parsed.text;
        }
    }
    return result;
}

auto parse_declarative(std::string_view declarative, std::string_view sentence)
    -> std::optional<std::pair<std::string, std::string>>
{
    auto d = text::trim(declarative);
    if (d.ends_with('.')) {
        auto ws = text::words(d);
        if (ws.empty() || !is_initialism(ws.back().text)) {
            d.remove_suffix(1);
        }
    }
    auto sentence_words = lower_words(sentence);
    std::optional<std::pair<std::string, std::string>> fallback;
    for (std::string_view sep: {std::string_view(" is "), std::string_view(" refers to ")}) {
        for (auto at = d.find(sep); at != std::string_view::npos; at = d.find(sep, at + 1)) {
            std::string x(d.substr(0, at));
            std::string a(text::trim(d.substr(at + sep.size())));
            if (x.empty() || a.empty()) {
                continue;
            }
            if (find_words(sentence_words, lower_words(x))) {
                return std::pair{x, a};
            }
            if (x.starts_with("The ") && find_words(sentence_words, lower_words(x.substr(4)))) {
                return std::pair{x.substr(4), a};
            }
            if (!fallback) {
                fallback = std::pair{x, a};
            }
        }
    }
    return fallback;
}

auto reference_rewrite(std::string_view input) -> std::string
{
    if (input.starts_with(kCls)) {
        input.remove_prefix(kCls.size());
    }
    auto parts = split_all(input, kSep);
    std::string sentence = parts.back();
    parts.pop_back();

    std::vector<std::pair<std::string, std::string>> pairs;
    for (auto const& d: parts) {
        if (auto p = parse_declarative(d, sentence)) {
            pairs.push_back(std::move(*p));
        }
    }
    std::stable_sort(pairs.begin(), pairs.end(), [](auto const& a, auto const& b) {
        return text::words(a.first).size() > text::words(b.first).size();
    });

    auto ws = text::words(sentence);
    auto sentence_words = lower_words(sentence);
    std::vector<bool> used(ws.size(), false);
    std::vector<Replacement> replacements;
    for (auto const& [x, a]: pairs) {
        auto x_words = lower_words(x);
        auto a_words = lower_words(a);
        bool pronoun = x_words.size() == 1 && text::is_pronoun(x_words.front());
        bool extends = a_words.size() > x_words.size() && find_words(a_words, x_words).has_value();
        if (!pronoun && !extends) {
            continue;
        }
        auto at = find_words(sentence_words, x_words, &used);
        if (!at) {
            continue;
        }
        auto first = *at;
        auto last = first + x_words.size() - 1;
        for (auto i = first; i <= last; ++i) {
            used[i] = true;
        }
        Replacement r{ws[first].begin, ws[last].end, a};
        if (pronoun && (x_words.front() == "his" || x_words.front() == "hers")) {
            r.text += "'s";
        }
        if (r.begin == 0) {
            if (!r.text.empty() && r.text.front() >= 'a' && r.text.front() <= 'z') {
                r.text.front() = static_cast<char>(r.text.front() - 'a' + 'A');
            }
        } else {
            auto a_ws = text::words(r.text);
            if (!a_ws.empty() && text::is_determiner(text::to_lower(a_ws.front().text))
                && text::is_capitalized(a_ws.front().text)) {
                r.text[a_ws.front().begin] = static_cast<char>(r.text[a_ws.front().begin] - 'A' + 'a');
            }
        }
        replacements.push_back(std::move(r));
    }

    Category category = Category::unnecessary;
    std::string out = sentence;
    if (!replacements.empty()) {
        category = Category::feasible;
        std::sort(replacements.begin(), replacements.end(), [](auto const& l, auto const& r) {
            return l.begin > r.begin;
        });
        for (auto const& r: replacements) {
            out.replace(r.begin, r.end - r.begin, r.text);
        }
    } else if (std::any_of(sentence_words.begin(), sentence_words.end(),
                           [](auto const& w) { return text::is_pronoun(w); })) {
        category = Category::infeasible;
    }
    return std::string(to_string(category)) + std::string(kSep) + out;
}

}  // namespace claimforge::decontext
