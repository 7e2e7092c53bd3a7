#include <semaphore>

#include "claimforge/backends.hpp"
#include "http.hpp"

namespace claimforge::backends {

namespace {

class RemoteBackend final : public Backend {
  public:
    explicit RemoteBackend(BackendDescriptor descriptor)
        : m_descriptor(std::move(descriptor)),
          m_slots(static_cast<std::ptrdiff_t>(m_descriptor.max_in_flight))
    {
        auto url = detail::parse_url(m_descriptor.endpoint);
        if (!url || url->scheme == "file") {
            throw InvalidArgument("invalid backend endpoint '" + m_descriptor.endpoint + "'");
        }
        m_url = *url;
    }

    [[nodiscard]] auto role() const -> Role override { return m_descriptor.role; }

    [[nodiscard]] auto invoke(json const& request) -> json override
    {
        m_slots.acquire();
        detail::HttpResponse response;
        try {
            response = detail::http_post_json(m_url, request.dump(), m_descriptor.timeout_seconds);
        } catch (...) {
            m_slots.release();
            throw;
        }
        m_slots.release();

        switch (response.error) {
        case detail::HttpErrorKind::none: break;
        case detail::HttpErrorKind::timeout:
            throw BackendError(role(), BackendErrorKind::timeout, m_descriptor.endpoint);
        case detail::HttpErrorKind::transport:
        case detail::HttpErrorKind::unsupported:
            throw BackendError(role(), BackendErrorKind::transport, response.message);
        }
        if (response.status < 200 || response.status >= 300) {
            throw BackendError(role(), BackendErrorKind::failure, "HTTP status " + std::to_string(response.status));
        }
        json body;
        try {
            body = json::parse(response.body);
        } catch (json::parse_error const& e) {
            throw BackendError(role(), BackendErrorKind::malformed, e.what());
        }
        return body;
    }

  private:
    BackendDescriptor m_descriptor;
    detail::Url m_url;
    std::counting_semaphore<> m_slots;
};

}  // namespace

auto make_remote_backend(BackendDescriptor const& descriptor) -> std::shared_ptr<Backend>
{
    descriptor.validate();
    if (descriptor.kind != BackendKind::remote) {
        throw InvalidArgument("make_remote_backend needs a remote descriptor");
    }
    return std::make_shared<RemoteBackend>(descriptor);
}

}  // namespace claimforge::backends
