#include "claimforge/backends.hpp"
#include "claimforge/checkworthy.hpp"
#include "claimforge/contextgen.hpp"
#include "claimforge/decontext.hpp"
#include "claimforge/extraction.hpp"

namespace claimforge::backends {

namespace {

class ReferenceBackend final : public Backend {
  public:
    explicit ReferenceBackend(Role role) : m_role(role) {}

    [[nodiscard]] auto role() const -> Role override { return m_role; }

    [[nodiscard]] auto invoke(json const& request) -> json override
    {
        validate_request(m_role, request);
        auto name = "reference-" + std::string(to_string(m_role));
        switch (m_role) {
        case Role::summarizer: {
            auto sentences = request.at("sentences").get<std::vector<std::string>>();
            return with_metadata({{"scores", extraction::reference_summary_scores(sentences)}}, name);
        }
        case Role::entailment:
            return with_metadata({{"prob", reference_entailment(request.at("premise").get<std::string>(),
                                                                request.at("hypothesis").get<std::string>())}},
                                 name);
        case Role::qg: {
            std::optional<contextgen::UnitKind> kind;
            if (request.contains("kind")) {
                kind = contextgen::parse_unit_kind(request.at("kind").get<std::string>());
            }
            auto question = contextgen::reference_question(request.at("sentence").get<std::string>(),
                                                           request.at("answer").get<std::string>(), kind);
            return with_metadata({{"question", question}}, name);
        }
        case Role::qa: {
            auto answer = contextgen::reference_answer(request.at("question").get<std::string>(),
                                                       request.at("evidence").get<std::vector<std::string>>());
            json payload;
            payload["answer"] = answer ? json(*answer) : json(nullptr);
            return with_metadata(payload, name);
        }
        case Role::qa2d:
            return with_metadata({{"declarative",
                                   contextgen::reference_declarative(request.at("question").get<std::string>(),
                                                                     request.at("answer").get<std::string>())}},
                                 name);
        case Role::decontext:
            return with_metadata({{"output", decontext::reference_rewrite(request.at("input").get<std::string>())}},
                                 name);
        case Role::checkworthy: {
            auto s = checkworthy::reference_classify(request.at("text").get<std::string>());
            return with_metadata({{"cfs", s.cfs}, {"ufs", s.ufs}, {"nfs", s.nfs}}, name);
        }
        }
        throw BackendError(m_role, BackendErrorKind::failure, "unhandled role");
    }

  private:
    Role m_role;
};

}  // namespace

auto make_reference_backend(Role role) -> std::shared_ptr<Backend>
{
    return std::make_shared<ReferenceBackend>(role);
}

}  // namespace claimforge::backends
