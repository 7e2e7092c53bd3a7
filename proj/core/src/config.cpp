#include "claimforge/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "claimforge/error.hpp"
#include "claimforge/text.hpp"

namespace claimforge {

namespace {

auto parse_size(std::string_view key, std::string_view value) -> std::size_t
{
    std::size_t out = 0;
    auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw FormatError("config: '" + std::string(key) + "' expects a non-negative integer, got '"
                          + std::string(value) + "'");
    }
    return out;
}

auto parse_real(std::string_view key, std::string_view value) -> double
{
    try {
        std::size_t used = 0;
        auto out = std::stod(std::string(value), &used);
        if (used == value.size()) {
            return out;
        }
    } catch (std::exception const&) {
    }
    throw FormatError("config: '" + std::string(key) + "' expects a number, got '" + std::string(value) + "'");
}

auto parse_bool(std::string_view key, std::string_view value) -> bool
{
    auto v = text::to_lower(value);
    if (v == "true" || v == "yes" || v == "on" || v == "1") {
        return true;
    }
    if (v == "false" || v == "no" || v == "off" || v == "0") {
        return false;
    }
    throw FormatError("config: '" + std::string(key) + "' expects true or false, got '" + std::string(value) + "'");
}

}  // namespace

void PipelineConfig::validate() const
{
    if (scoring.k == 0) {
        throw InvalidArgument("k must be >= 1");
    }
    if (!(threshold > 0.0 && threshold < 1.0)) {
        throw InvalidArgument("entailment threshold must lie in (0,1)");
    }
    if (eval_depth == 0) {
        throw InvalidArgument("eval_depth must be >= 1");
    }
    if (context.evidence_k == 0) {
        throw InvalidArgument("evidence_k must be >= 1");
    }
    if (workers == 0) {
        throw InvalidArgument("workers must be >= 1");
    }
    if (scoring.textrank.damping < 0.0 || scoring.textrank.damping > 1.0) {
        throw InvalidArgument("textrank damping must lie in [0,1]");
    }
    chrf.validate();
}

void apply_config_value(PipelineConfig& config, std::string_view key, std::string_view value)
{
    if (key == "extraction.scorer") {
        try {
            config.scoring.scorer = extraction::parse_scorer(value);
        } catch (InvalidArgument const& e) {
            throw FormatError(std::string("config: ") + e.what());
        }
    } else if (key == "extraction.k") {
        config.scoring.k = parse_size(key, value);
    } else if (key == "extraction.threshold") {
        config.threshold = parse_real(key, value);
    } else if (key == "extraction.eval_depth") {
        config.eval_depth = parse_size(key, value);
    } else if (key == "textrank.damping") {
        config.scoring.textrank.damping = parse_real(key, value);
    } else if (key == "textrank.tol") {
        config.scoring.textrank.tol = parse_real(key, value);
    } else if (key == "textrank.max_iter") {
        config.scoring.textrank.max_iter = parse_size(key, value);
    } else if (key == "lsa.topics") {
        config.scoring.lsa_topics = parse_size(key, value);
    } else if (key == "contextgen.evidence_k") {
        config.context.evidence_k = parse_size(key, value);
    } else if (key == "contextgen.unit_cap") {
        config.context.unit_cap = parse_size(key, value);
    } else if (key == "chrf.max_n") {
        config.chrf.max_n = parse_size(key, value);
    } else if (key == "chrf.beta") {
        config.chrf.beta = parse_real(key, value);
    } else if (key == "decontext.exempt_lead") {
        config.exempt_lead = parse_bool(key, value);
    } else if (key == "trace") {
        config.trace = parse_bool(key, value);
    } else if (key == "workers") {
        config.workers = parse_size(key, value);
    } else if (key == "backends.config") {
        config.backends_config = std::string(value);
    } else if (key == "scraper.user_agent") {
        config.scraper.user_agent = std::string(value);
    } else if (key == "scraper.timeout_seconds") {
        config.scraper.timeout_seconds = parse_real(key, value);
    } else if (key == "scraper.max_bytes") {
        config.scraper.max_bytes = parse_size(key, value);
    } else if (key == "scraper.live") {
        config.scraper.live = parse_bool(key, value);
    } else {
        throw FormatError("config: unknown key '" + std::string(key) + "'");
    }
}

auto read_config(std::istream& in, PipelineConfig base) -> PipelineConfig
{
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view view(line);
        if (auto hash = view.find('#'); hash != std::string_view::npos) {
            view = view.substr(0, hash);
        }
        view = text::trim(view);
        if (view.empty()) {
            continue;
        }
        auto eq = view.find('=');
        if (eq == std::string_view::npos) {
            throw FormatError("config line " + std::to_string(line_no) + ": expected 'key = value'");
        }
        auto key = text::trim(view.substr(0, eq));
        auto value = text::trim(view.substr(eq + 1));
        try {
            apply_config_value(base, key, value);
        } catch (FormatError const& e) {
            throw FormatError("config line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return base;
}

auto load_config(std::filesystem::path const& path, PipelineConfig base) -> PipelineConfig
{
    std::ifstream in(path);
    if (!in) {
        throw Error("cannot read config file " + path.string());
    }
    return read_config(in, std::move(base));
}

auto format_config(PipelineConfig const& c) -> std::string
{
    std::ostringstream os;
    auto b = [](bool v) { return v ? "true" : "false"; };
    os << "extraction.scorer = " << extraction::to_string(c.scoring.scorer) << '\n'
       << "extraction.k = " << c.scoring.k << '\n'
       << "extraction.threshold = " << c.threshold << '\n'
       << "extraction.eval_depth = " << c.eval_depth << '\n'
       << "textrank.damping = " << c.scoring.textrank.damping << '\n'
       << "textrank.tol = " << c.scoring.textrank.tol << '\n'
       << "textrank.max_iter = " << c.scoring.textrank.max_iter << '\n'
       << "lsa.topics = " << c.scoring.lsa_topics << '\n'
       << "contextgen.evidence_k = " << c.context.evidence_k << '\n'
       << "contextgen.unit_cap = " << c.context.unit_cap << '\n'
       << "chrf.max_n = " << c.chrf.max_n << '\n'
       << "chrf.beta = " << c.chrf.beta << '\n'
       << "decontext.exempt_lead = " << b(c.exempt_lead) << '\n'
       << "trace = " << b(c.trace) << '\n'
       << "workers = " << c.workers << '\n'
       << "backends.config = " << c.backends_config << '\n'
       << "scraper.user_agent = " << c.scraper.user_agent << '\n'
       << "scraper.timeout_seconds = " << c.scraper.timeout_seconds << '\n'
       << "scraper.max_bytes = " << c.scraper.max_bytes << '\n'
       << "scraper.live = " << b(c.scraper.live) << '\n';
    return os.str();
}

}  // namespace claimforge
