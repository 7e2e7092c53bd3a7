#include "claimforge/text.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

#include "claimforge/ir.hpp"

namespace claimforge::text {

namespace {

using WordSet = std::unordered_set<std::string_view>;

auto const& stopwords()
{
    static WordSet const set{
        "a",       "about",   "above",  "after",   "again",   "against", "all",    "also",
        "am",      "an",      "and",    "any",     "are",     "as",      "at",     "be",
        "because", "been",    "before", "being",   "below",   "between", "both",   "but",
        "by",      "can",     "could",  "did",     "do",      "does",    "doing",  "down",
        "during",  "each",    "either", "few",     "for",     "from",    "further", "had",
        "has",     "have",    "having", "he",      "her",     "here",    "hers",   "herself",
        "him",     "himself", "his",    "how",     "however", "i",       "if",     "in",
        "into",    "is",      "it",     "its",     "itself",  "just",    "may",    "me",
        "might",   "more",    "most",   "must",    "my",      "myself",  "no",     "nor",
        "not",     "now",     "of",     "off",     "on",      "once",    "only",   "or",
        "other",   "our",     "ours",   "ourselves", "out",   "over",    "own",    "same",
        "shall",   "she",     "should", "so",      "some",    "such",    "than",   "that",
        "the",     "their",   "theirs", "them",    "themselves", "then", "there",  "these",
        "they",    "this",    "those",  "through", "to",      "too",     "under",  "until",
        "up",      "upon",    "us",     "very",    "was",     "we",      "were",   "what",
        "when",    "where",   "whether", "which",  "while",   "who",     "whom",   "whose",
        "why",     "will",    "with",   "within",  "without", "would",   "yet",    "you",
        "your",    "yours",   "yourself", "across", "near",   "since",   "according",
        "although", "though", "whereas", "among",  "per",     "via",     "unless", "onto",
    };
    return set;
}

auto const& pronouns()
{
    static WordSet const set{
        "i",    "me",  "my",  "mine",   "we",   "us",   "our",   "ours",
        "you",  "your", "yours", "he",  "him",  "his",  "she",   "her",
        "hers", "it",  "its", "they",   "them", "their", "theirs",
    };
    return set;
}

auto const& determiners()
{
    static WordSet const set{"the", "this", "that", "these", "those", "a", "an"};
    return set;
}

auto const& auxiliaries()
{
    static WordSet const set{
        "is",  "are",  "was",   "were",  "be",     "been",   "being", "am",
        "has", "have", "had",   "having", "do",    "does",   "did",   "will",
        "would", "shall", "should", "can", "could", "may",   "might", "must",
    };
    return set;
}

auto const& prepositions()
{
    static WordSet const set{
        "of", "on", "in", "at", "from", "for", "to", "by", "with",
        "about", "over", "under", "into", "near", "across",
    };
    return set;
}

auto const& common_verbs()
{
    static WordSet const set{
        "said",   "says",   "say",    "told",   "tell",   "tells",  "went",   "go",
        "goes",   "gave",   "give",   "gives",  "made",   "make",   "makes",  "took",
        "take",   "takes",  "came",   "come",   "comes",  "got",    "get",    "gets",
        "knew",   "know",   "knows",  "saw",    "see",    "sees",   "show",   "shows",
        "shown",  "ran",    "run",    "runs",   "became", "become", "becomes", "began",
        "begin",  "begins", "found",  "find",   "finds",  "thought", "think", "thinks",
        "kept",   "keep",   "keeps",  "held",   "hold",   "holds",  "brought", "bring",
        "brings", "sold",   "sell",   "sells",  "bought", "buy",    "buys",   "won",
        "win",    "wins",   "lost",   "lose",   "loses",  "stood",  "stand",  "stands",
        "spoke",  "speak",  "speaks", "wrote",  "write",  "writes", "paid",   "pay",
        "pays",   "meant",  "means",  "led",    "lead",   "leads",  "met",    "meet",
        "meets",  "sent",   "send",   "sends",  "built",  "build",  "builds", "spent",
        "spend",  "spends", "claim",  "claims", "want",   "wants",  "need",   "needs",
    };
    return set;
}

auto contains(WordSet const& set, std::string_view w) -> bool { return set.find(w) != set.end(); }

// Length in bytes of a UTF-8 punctuation sequence starting at s[pos], 0 if none.
auto utf8_punct_at(std::string_view s, std::size_t pos) -> std::size_t
{
    if (pos + 3 <= s.size()
        && static_cast<unsigned char>(s[pos]) == 0xE2 && static_cast<unsigned char>(s[pos + 1]) == 0x80) {
        switch (static_cast<unsigned char>(s[pos + 2])) {
        case 0x93:  // en dash
        case 0x94:  // em dash
        case 0x98:  // left single quote
        case 0x99:  // right single quote
        case 0x9C:  // left double quote
        case 0x9D:  // right double quote
        case 0xA6:  // ellipsis
            return 3;
        default: break;
        }
    }
    return 0;
}

// Length of a UTF-8 punctuation sequence ending just before `end`, 0 if none.
auto utf8_punct_before(std::string_view s, std::size_t end) -> std::size_t
{
    if (end >= 3 && utf8_punct_at(s, end - 3) == 3) {
        return 3;
    }
    return 0;
}

auto is_ascii_punct(char c) -> bool { return std::ispunct(static_cast<unsigned char>(c)) != 0; }

}  // namespace

auto is_space(char c) -> bool { return std::isspace(static_cast<unsigned char>(c)) != 0; }

auto trim(std::string_view s) -> std::string_view
{
    while (!s.empty() && is_space(s.front())) {
        s.remove_prefix(1);
    }
    while (!s.empty() && is_space(s.back())) {
        s.remove_suffix(1);
    }
    return s;
}

auto collapse_whitespace(std::string_view s) -> std::string
{
    std::string out;
    out.reserve(s.size());
    bool pending_space = false;
    for (char c: trim(s)) {
        if (is_space(c)) {
            pending_space = true;
            continue;
        }
        if (pending_space) {
            out.push_back(' ');
            pending_space = false;
        }
        out.push_back(c);
    }
    return out;
}

auto to_lower(std::string_view s) -> std::string
{
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(), [](unsigned char c) {
        return static_cast<char>(std::tolower(c));
    });
    return out;
}

auto split_whitespace(std::string_view s) -> std::vector<std::string>
{
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) {
            ++j;
        }
        if (j > i) {
            out.emplace_back(s.substr(i, j - i));
        }
        i = j;
    }
    return out;
}

auto join(std::vector<std::string> const& parts, std::string_view sep) -> std::string
{
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i > 0) {
            out.append(sep);
        }
        out.append(parts[i]);
    }
    return out;
}

auto strip_punctuation(std::string_view s) -> std::string_view
{
    for (;;) {
        if (s.empty()) {
            return s;
        }
        if (is_ascii_punct(s.front())) {
            s.remove_prefix(1);
        } else if (auto n = utf8_punct_at(s, 0); n > 0) {
            s.remove_prefix(n);
        } else {
            break;
        }
    }
    for (;;) {
        if (s.empty()) {
            return s;
        }
        if (is_ascii_punct(s.back())) {
            s.remove_suffix(1);
        } else if (auto n = utf8_punct_before(s, s.size()); n > 0) {
            s.remove_suffix(n);
        } else {
            break;
        }
    }
    return s;
}

auto words(std::string_view s) -> std::vector<Word>
{
    std::vector<Word> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && is_space(s[i])) {
            ++i;
        }
        std::size_t j = i;
        while (j < s.size() && !is_space(s[j])) {
            ++j;
        }
        if (j == i) {
            break;
        }
        auto chunk = s.substr(i, j - i);
        auto core = strip_punctuation(chunk);
        if (!core.empty()) {
            auto begin = i + static_cast<std::size_t>(core.data() - chunk.data());
            auto end = begin + core.size();
            // Initialisms keep their final period: "D.C." rather than "D.C".
            if (end < j && s[end] == '.' && core.find('.') != std::string_view::npos) {
                ++end;
            }
            Word w;
            w.begin = begin;
            w.end = end;
            w.text = std::string(s.substr(begin, end - begin));
            w.boundary_before = begin > i;
            w.boundary_after = end < j;
            out.push_back(std::move(w));
        }
        i = j;
    }
    return out;
}

auto is_stopword(std::string_view lower) -> bool { return contains(stopwords(), lower); }
auto is_pronoun(std::string_view lower) -> bool { return contains(pronouns(), lower); }
auto is_determiner(std::string_view lower) -> bool { return contains(determiners(), lower); }
auto is_auxiliary(std::string_view lower) -> bool { return contains(auxiliaries(), lower); }
auto is_preposition(std::string_view lower) -> bool { return contains(prepositions(), lower); }
auto is_common_verb(std::string_view lower) -> bool { return contains(common_verbs(), lower); }

auto is_capitalized(std::string_view word) -> bool
{
    return !word.empty() && word.front() >= 'A' && word.front() <= 'Z';
}

auto is_name_like(std::string_view word) -> bool
{
    if (!is_capitalized(word)) {
        return false;
    }
    auto lower = to_lower(word);
    return !is_stopword(lower) && !is_pronoun(lower);
}

auto is_verb_like(std::string_view word) -> bool
{
    if (word.empty() || is_capitalized(word)) {
        return false;
    }
    auto lower = to_lower(word);
    if (is_common_verb(lower)) {
        return true;
    }
    return lower.size() >= 5 && lower.ends_with("ed");
}

auto name_runs(std::vector<Word> const& ws) -> std::vector<std::pair<std::size_t, std::size_t>>
{
    std::vector<std::pair<std::size_t, std::size_t>> runs;
    std::size_t i = 0;
    while (i < ws.size()) {
        if (!is_name_like(ws[i].text)) {
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j + 1 < ws.size() && !ws[j].boundary_after && !ws[j + 1].boundary_before
               && is_name_like(ws[j + 1].text)) {
            ++j;
        }
        runs.emplace_back(i, j);
        i = j + 1;
    }
    return runs;
}

auto content_tokens(std::string_view s) -> std::vector<std::string>
{
    auto tokens = ir::tokenize(s);
    std::erase_if(tokens, [](auto const& t) { return is_stopword(t); });
    return tokens;
}

auto fnv1a64(std::string_view s) -> std::uint64_t
{
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c: s) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace claimforge::text
