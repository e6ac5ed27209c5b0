#pragma once

// Narrow contract for text-generation endpoints: one prompt in, one text out.
// Failures (transport, HTTP status, quota, malformed body) are reported by
// throwing TransportError.

#include <atomic>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

namespace impactgraph {

struct SamplingParams {
    double temperature = 0.0;
    int max_output_tokens = 1024;
    std::optional<std::int64_t> seed;
};

struct PromptRequest {
    std::string model_id;
    std::string prompt;
    SamplingParams sampling;
    /// Position of the batch within its run. Not sent to remote endpoints;
    /// scripted clients key responses on it.
    std::size_t batch_index = 0;
};

class ModelClient {
public:
    virtual ~ModelClient() = default;
    /// Must be safe to call from several threads at once.
    virtual std::string complete(const PromptRequest& request) = 0;
};

/// Hex FNV-1a of the prompt text; the key scripted responses use.
std::string prompt_hash(std::string_view prompt);

/// Offline client replaying canned responses.
///
/// Lookup order: prompt hash, then batch index, then the default response.
/// Batches listed in fail_batches raise TransportError, as does a request
/// with no matching response.
class MockClient final : public ModelClient {
public:
    struct Script {
        std::optional<std::string> default_response;
        std::map<std::size_t, std::string> by_batch;
        std::map<std::string, std::string> by_prompt_hash;
        std::set<std::size_t> fail_batches;
    };

    explicit MockClient(Script script) : script_(std::move(script)) {}

    /// {"default": "...", "by_batch": {"0": "..."}, "by_prompt_hash": {...},
    ///  "fail_batches": [2]}
    static Script script_from_json(const nlohmann::json& j);

    std::string complete(const PromptRequest& request) override;
    std::size_t call_count() const noexcept { return calls_.load(); }

private:
    Script script_;
    std::atomic<std::size_t> calls_{0};
};

struct HttpClientOptions {
    /// Full URL of a chat-completions route, e.g.
    /// https://api.example.com/v1/chat/completions
    std::string endpoint;
    std::string api_token;
    std::chrono::seconds timeout{120};
};

/// Chat-completions style adapter. Every call opens its own connection, so
/// concurrent use is safe.
class HttpClient final : public ModelClient {
public:
    explicit HttpClient(HttpClientOptions options);
    std::string complete(const PromptRequest& request) override;

private:
    HttpClientOptions options_;
    std::string scheme_host_port_;
    std::string path_;
};

/// {"model", "messages": [{"role": "user", "content": prompt}],
///  "temperature", "max_tokens", "seed"?}
nlohmann::json chat_request_body(const PromptRequest& request);
/// choices[0].message.content; throws TransportError when absent.
std::string chat_response_text(std::string_view body);

}  // namespace impactgraph
