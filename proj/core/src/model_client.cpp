#include "impactgraph/model_client.hpp"

#include "impactgraph/error.hpp"
#include "impactgraph/text.hpp"

#include <regex>

#include "httplib.h"

namespace impactgraph {

using nlohmann::json;

std::string prompt_hash(std::string_view prompt) {
    return to_hex64(fnv1a64(prompt));
}

MockClient::Script MockClient::script_from_json(const json& j) {
    Script script;
    if (j.contains("default") && j["default"].is_string()) script.default_response = j["default"].get<std::string>();
    const auto by_batch = j.value("by_batch", json::object());
    for (const auto& [key, value] : by_batch.items()) {
        script.by_batch[std::stoul(key)] = value.get<std::string>();
    }
    const auto by_hash = j.value("by_prompt_hash", json::object());
    for (const auto& [key, value] : by_hash.items()) {
        script.by_prompt_hash[key] = value.get<std::string>();
    }
    for (const auto& idx : j.value("fail_batches", json::array())) {
        script.fail_batches.insert(idx.get<std::size_t>());
    }
    return script;
}

std::string MockClient::complete(const PromptRequest& request) {
    ++calls_;
    if (script_.fail_batches.contains(request.batch_index)) {
        throw TransportError("scripted failure for batch " + std::to_string(request.batch_index));
    }
    if (!script_.by_prompt_hash.empty()) {
        if (auto it = script_.by_prompt_hash.find(prompt_hash(request.prompt)); it != script_.by_prompt_hash.end())
            return it->second;
    }
    if (auto it = script_.by_batch.find(request.batch_index); it != script_.by_batch.end()) return it->second;
    if (script_.default_response) return *script_.default_response;
    throw TransportError("no scripted response for batch " + std::to_string(request.batch_index));
}

HttpClient::HttpClient(HttpClientOptions options) : options_(std::move(options)) {
    static const std::regex url_re(R"(^(https?://[^/]+)(/.*)?$)");
    std::smatch m;
    if (!std::regex_match(options_.endpoint, m, url_re)) {
        throw ConfigError("endpoint is not an http(s) URL: '" + options_.endpoint + "'");
    }
    scheme_host_port_ = m[1];
    path_ = m[2].matched ? std::string(m[2]) : std::string("/");
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (scheme_host_port_.rfind("https", 0) == 0) throw ConfigError("built without TLS support");
#endif
}

json chat_request_body(const PromptRequest& request) {
    json body{{"model", request.model_id},
              {"messages", json::array({{{"role", "user"}, {"content", request.prompt}}})},
              {"temperature", request.sampling.temperature},
              {"max_tokens", request.sampling.max_output_tokens}};
    if (request.sampling.seed) body["seed"] = *request.sampling.seed;
    return body;
}

std::string chat_response_text(std::string_view body) {
    json j;
    try {
        j = json::parse(body);
    } catch (const json::parse_error& e) {
        throw TransportError(std::string("response is not JSON: ") + e.what());
    }
    try {
        const auto& content = j.at("choices").at(0).at("message").at("content");
        if (content.is_null()) return {};
        return content.get<std::string>();
    } catch (const json::exception&) {
        throw TransportError("response has no choices[0].message.content");
    }
}

std::string HttpClient::complete(const PromptRequest& request) {
    httplib::Client cli(scheme_host_port_);
    const auto timeout = static_cast<time_t>(options_.timeout.count());
    cli.set_connection_timeout(timeout, 0);
    cli.set_read_timeout(timeout, 0);
    cli.set_write_timeout(timeout, 0);

    httplib::Headers headers;
    if (!options_.api_token.empty()) headers.emplace("Authorization", "Bearer " + options_.api_token);

    const auto res = cli.Post(path_, headers, chat_request_body(request).dump(), "application/json");
    if (!res) throw TransportError("request failed: " + httplib::to_string(res.error()));
    if (res->status != 200) {
        throw TransportError("HTTP " + std::to_string(res->status) + ": " + res->body.substr(0, 200));
    }
    return chat_response_text(res->body);
}

}  // namespace impactgraph
