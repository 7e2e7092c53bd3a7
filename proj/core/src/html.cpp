#include <algorithm>
#include <array>
#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "claimforge/corpus.hpp"
#include "claimforge/text.hpp"

namespace claimforge::corpus {

namespace {

// Elements whose content is never article text.
constexpr std::array<std::string_view, 12> kSkipped{"script", "style",  "noscript", "head",  "template", "svg",
                                                    "iframe", "object", "canvas",   "nav",   "aside",    "footer"};

// Elements that start a new paragraph.
constexpr std::array<std::string_view, 25> kBlocks{
    "p",  "div", "br", "li", "ul",      "ol",      "h1",     "h2",         "h3",  "h4",   "h5",     "h6",        "tr",
    "td", "th",  "table", "section", "article", "header", "blockquote", "pre", "main", "figure", "figcaption", "hr"};

auto iequals_prefix(std::string_view haystack, std::size_t pos, std::string_view needle) -> bool
{
    if (pos + needle.size() > haystack.size()) {
        return false;
    }
    for (std::size_t i = 0; i < needle.size(); ++i) {
        if (std::tolower(static_cast<unsigned char>(haystack[pos + i])) != needle[i]) {
            return false;
        }
    }
    return true;
}

auto find_ci(std::string_view haystack, std::string_view lower_needle, std::size_t from) -> std::size_t
{
    for (std::size_t i = from; i + lower_needle.size() <= haystack.size(); ++i) {
        if (iequals_prefix(haystack, i, lower_needle)) {
            return i;
        }
    }
    return std::string_view::npos;
}

void append_utf8(std::string& out, unsigned long cp)
{
    if (cp < 0x80) {
        out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
        out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
        out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x110000) {
        out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
        out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
}

auto decode_entities(std::string_view s) -> std::string
{
    struct Named {
        std::string_view name;
        unsigned long cp;
    };
    static constexpr std::array<Named, 14> kNamed{{{"amp", '&'},
                                                   {"lt", '<'},
                                                   {"gt", '>'},
                                                   {"quot", '"'},
                                                   {"apos", '\''},
                                                   {"nbsp", ' '},
                                                   {"ndash", 0x2013},
                                                   {"mdash", 0x2014},
                                                   {"lsquo", 0x2018},
                                                   {"rsquo", 0x2019},
                                                   {"ldquo", 0x201C},
                                                   {"rdquo", 0x201D},
                                                   {"hellip", 0x2026},
                                                   {"copy", 0xA9}}};
    std::string out;
    out.reserve(s.size());
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '&') {
            out.push_back(s[i++]);
            continue;
        }
        auto semi = s.find(';', i);
        if (semi == std::string_view::npos || semi - i > 10) {
            out.push_back(s[i++]);
            continue;
        }
        auto body = s.substr(i + 1, semi - i - 1);
        bool decoded = false;
        if (!body.empty() && body.front() == '#') {
            auto digits = body.substr(1);
            int base = 10;
            if (!digits.empty() && (digits.front() == 'x' || digits.front() == 'X')) {
                base = 16;
                digits.remove_prefix(1);
            }
            if (!digits.empty()) {
                try {
                    std::size_t used = 0;
                    auto cp = std::stoul(std::string(digits), &used, base);
                    if (used == digits.size()) {
                        append_utf8(out, cp == 0xA0 ? ' ' : cp);
                        decoded = true;
                    }
                } catch (std::exception const&) {
                    decoded = false;
                }
            }
        } else {
            for (auto const& named: kNamed) {
                if (named.name == body) {
                    append_utf8(out, named.cp);
                    decoded = true;
                    break;
                }
            }
        }
        if (decoded) {
            i = semi + 1;
        } else {
            out.push_back(s[i++]);
        }
    }
    return out;
}

}  // namespace

auto extract_html_text(std::string_view html) -> std::string
{
    std::vector<std::string> paragraphs;
    std::string current;
    auto flush = [&] {
        auto text = text::collapse_whitespace(decode_entities(current));
        if (!text::strip_punctuation(text).empty()) {
            paragraphs.push_back(std::move(text));
        }
        current.clear();
    };

    std::size_t i = 0;
    while (i < html.size()) {
        if (html[i] != '<') {
            current.push_back(html[i++]);
            continue;
        }
        if (html.substr(i, 4) == "<!--") {
            auto end = html.find("-->", i + 4);
            i = end == std::string_view::npos ? html.size() : end + 3;
            continue;
        }
        // Tag: find its end, honouring quoted attribute values.
        std::size_t j = i + 1;
        char quote = 0;
        while (j < html.size()) {
            char c = html[j];
            if (quote != 0) {
                if (c == quote) {
                    quote = 0;
                }
            } else if (c == '"' || c == '\'') {
                quote = c;
            } else if (c == '>') {
                break;
            }
            ++j;
        }
        auto tag = html.substr(i + 1, j - i - 1);
        i = j < html.size() ? j + 1 : html.size();

        bool closing = !tag.empty() && tag.front() == '/';
        if (closing) {
            tag.remove_prefix(1);
        }
        std::size_t name_end = 0;
        while (name_end < tag.size() && std::isalnum(static_cast<unsigned char>(tag[name_end])) != 0) {
            ++name_end;
        }
        auto name = text::to_lower(tag.substr(0, name_end));
        if (name.empty()) {
            continue;
        }
        if (!closing && std::find(kSkipped.begin(), kSkipped.end(), name) != kSkipped.end()) {
            bool self_closing = !tag.empty() && tag.back() == '/';
            if (!self_closing) {
                auto close = find_ci(html, "</" + name, i);
                if (close == std::string_view::npos) {
                    i = html.size();
                } else {
                    auto gt = html.find('>', close);
                    i = gt == std::string_view::npos ? html.size() : gt + 1;
                }
            }
            flush();
            continue;
        }
        if (std::find(kBlocks.begin(), kBlocks.end(), name) != kBlocks.end()) {
            flush();
        }
    }
    flush();
    return text::join(paragraphs, "\n\n");
}

}  // namespace claimforge::corpus
