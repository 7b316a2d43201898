#pragma once

#include "hetrag/clients.hpp"

#include <nlohmann/json.hpp>

#include <mutex>
#include <optional>
#include <string>

namespace hetrag {

/// An OpenAI-compatible endpoint. Credentials come from HETRAG_API_BASE and
/// HETRAG_API_KEY.
struct HttpEndpoint {
    std::string base_url;  // e.g. https://api.openai.com/v1
    std::string api_key;
    std::string model;
    int timeout_seconds = 120;

    [[nodiscard]] static HttpEndpoint from_env(std::string model);
};

[[nodiscard]] nlohmann::json completion_request_body(const std::string& model, const CompletionRequest& request);
/// choices[0].message.content; throws ClientError (not retryable) on a malformed body.
[[nodiscard]] std::string parse_completion_response(const std::string& body);

[[nodiscard]] nlohmann::json embedding_request_body(const std::string& model, std::string_view text);
[[nodiscard]] EmbeddingVector parse_embedding_response(const std::string& body);

/// 429 and 5xx are retryable; any other non-2xx status is not.
[[nodiscard]] bool is_retryable_status(int status);

class HttpCompletionClient final : public CompletionClient {
public:
    explicit HttpCompletionClient(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
    [[nodiscard]] std::string complete(const CompletionRequest& request) const override;

private:
    HttpEndpoint endpoint_;
};

class HttpEmbedder final : public Embedder {
public:
    explicit HttpEmbedder(HttpEndpoint endpoint) : endpoint_(std::move(endpoint)) {}
    [[nodiscard]] EmbeddingVector embed(std::string_view text) const override;
    /// Probed with one request on first use.
    [[nodiscard]] Eigen::Index dim() const override;
    [[nodiscard]] std::string id() const override { return "http-" + endpoint_.model; }

private:
    HttpEndpoint endpoint_;
    mutable std::once_flag dim_once_;
    mutable Eigen::Index dim_ = 0;
};

}  // namespace hetrag
