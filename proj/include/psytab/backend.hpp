#pragma once

#include <cstdint>
#include <memory>
#include <string>

#include "psytab/errors.hpp"

namespace psytab {

/// Text-completion interface. Implementations must be safe to call from
/// several worker threads at once.
class LlmBackend {
public:
    virtual ~LlmBackend() = default;
    virtual std::string complete(const std::string& prompt) const = 0;
    virtual std::string name() const = 0;
};

struct BackendConfig {
    std::string endpoint = "http://localhost:8080";
    std::string model = "local-model";
    double temperature = 0.7;
    int max_tokens = 256;
    int timeout_seconds = 60;
    /// Name of the environment variable that holds the API key. The key
    /// itself is read per request and never stored or logged.
    std::string api_key_env = "PSYTAB_API_KEY";
};

/// OpenAI-style chat completion client (POST <endpoint>/v1/chat/completions).
/// Throws errc::backend_unavailable on connection failure, non-2xx status, or
/// an unparseable response body.
class HttpChatBackend : public LlmBackend {
public:
    explicit HttpChatBackend(BackendConfig config);
    std::string complete(const std::string& prompt) const override;
    std::string name() const override { return "http:" + config_.model; }
    const BackendConfig& config() const { return config_; }

private:
    BackendConfig config_;
    std::string base_url_;
    std::string path_prefix_;
};

/// Mock backends are pure functions of the prompt text, so a fixed prompt
/// sequence yields a fixed transcript. Specs:
///   "score:N"   every reply scores N
///   "cycle"     score cycles 0,1,2,... with the number of answered items
///   "severity"  score follows the persona's severity prior (default)
/// Throws errc::invalid_config on an unknown spec.
std::unique_ptr<LlmBackend> make_mock_backend(const std::string& spec);

/// Wraps a backend and fails the first `failures` calls whose prompt mentions
/// `flaky_item` with errc::backend_unavailable, then delegates. For retry
/// tests.
std::unique_ptr<LlmBackend> make_flaky_backend(std::unique_ptr<LlmBackend> inner,
                                               std::string flaky_item, int failures);

}  // namespace psytab
