#include <algorithm>
#include <cmath>
#include <map>

#include <Eigen/SVD>

#include "claimforge/error.hpp"
#include "claimforge/extraction.hpp"
#include "claimforge/text.hpp"

namespace claimforge::extraction {

auto score_lsa(corpus::Document const& document, std::size_t topics) -> std::vector<SentenceScore>
{
    if (document.size() == 0) {
        throw InvalidArgument("document '" + document.id + "' has no sentences");
    }
    if (topics == 0) {
        throw InvalidArgument("lsa: topics must be >= 1");
    }
    auto n = document.size();
    std::vector<SentenceScore> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        out.push_back({i, 0.0, "lsa"});
    }

    std::map<std::string, Eigen::Index> vocab;
    std::vector<std::vector<std::string>> tokens(n);
    for (std::size_t i = 0; i < n; ++i) {
        tokens[i] = text::content_tokens(document.sentence(i));
        for (auto const& t: tokens[i]) {
            vocab.emplace(t, static_cast<Eigen::Index>(vocab.size()));
        }
    }
    if (vocab.empty()) {
        return out;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(vocab.size()), static_cast<Eigen::Index>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (auto const& t: tokens[i]) {
            a(vocab.at(t), static_cast<Eigen::Index>(i)) += 1.0;
        }
    }

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinV);
    auto const& sigma = svd.singularValues();
    auto const& v = svd.matrixV();
    double const cutoff = sigma(0) * 1e-9;
    std::size_t rank = 0;
    while (rank < static_cast<std::size_t>(sigma.size()) && sigma(static_cast<Eigen::Index>(rank)) > cutoff) {
        ++rank;
    }

    std::vector<bool> claimed(n, false);
    auto limit = std::min({topics, rank, n});
    for (std::size_t r = 0; r < limit; ++r) {
        auto col = static_cast<Eigen::Index>(r);
        std::size_t best = n;
        double best_value = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (claimed[i]) {
                continue;
            }
            auto value = std::abs(v(static_cast<Eigen::Index>(i), col));
            if (best == n || value > best_value + 1e-12) {
                best = i;
                best_value = value;
            }
        }
        if (best == n) {
            break;
        }
        claimed[best] = true;
        out[best].score = 1.0 / static_cast<double>(r + 1);
    }
    return out;
}

}  // namespace claimforge::extraction
