#pragma once

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <random>
#include <string>
#include <vector>

#include <functional>
#include <memory>

#include "claimforge/backends.hpp"
#include "claimforge/corpus.hpp"

namespace claimforge::test {

inline auto data_dir() -> std::filesystem::path { return CLAIMFORGE_TEST_DATA_DIR; }

inline auto read_file(std::filesystem::path const& path) -> std::string
{
    std::ifstream in(path, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline auto doc(std::vector<std::string> const& sentences, std::string id = "doc") -> corpus::Document
{
    return corpus::Document::from_sentences(std::move(id), "", sentences);
}

/// Lowercase letter words that are never stopwords.
inline auto random_word(std::mt19937& rng, std::size_t vocab = 40) -> std::string
{
    static std::vector<std::string> const words{
        "river",  "harbor", "engine", "pepper", "violet", "marble", "signal", "copper", "falcon", "garden",
        "lantern", "meadow", "nickel", "orchid", "pillow", "quartz", "rocket", "saddle", "timber", "umbra",
        "velvet", "walnut", "yonder", "zephyr", "anchor", "bishop", "candle", "dagger", "ember",  "fossil",
        "glacier", "hammer", "island", "jigsaw", "kettle", "ladder", "magnet", "needle", "oyster", "parrot",
    };
    std::uniform_int_distribution<std::size_t> pick(0, std::min(vocab, words.size()) - 1);
    return words[pick(rng)];
}

inline auto random_sentence(std::mt19937& rng, std::size_t min_words, std::size_t max_words, std::size_t vocab = 40)
    -> std::string
{
    std::uniform_int_distribution<std::size_t> len(min_words, max_words);
    auto n = len(rng);
    std::string s;
    for (std::size_t i = 0; i < n; ++i) {
        s += (i == 0 ? "" : " ") + random_word(rng, vocab);
    }
    return s;
}

/// Backend whose responses come from a callable; counts its calls.
class FakeBackend final : public backends::Backend {
  public:
    using Fn = std::function<backends::json(backends::json const&)>;

    FakeBackend(backends::Role role, Fn fn) : m_role(role), m_fn(std::move(fn)) {}

    [[nodiscard]] auto role() const -> backends::Role override { return m_role; }
    [[nodiscard]] auto invoke(backends::json const& request) -> backends::json override
    {
        ++calls;
        return m_fn(request);
    }

    std::atomic<int> calls{0};

  private:
    backends::Role m_role;
    Fn m_fn;
};

inline auto fake(backends::Role role, FakeBackend::Fn fn) -> std::shared_ptr<FakeBackend>
{
    return std::make_shared<FakeBackend>(role, std::move(fn));
}

/// Reference registry with one role replaced.
inline auto registry_with(std::shared_ptr<backends::Backend> backend) -> backends::BackendRegistry
{
    auto registry = backends::BackendRegistry::with_references();
    registry.register_backend(std::move(backend));
    return registry;
}

}  // namespace claimforge::test
