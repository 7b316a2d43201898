#include "hetrag/http_clients.hpp"

#include "hetrag/errors.hpp"

#include <httplib.h>

#include <cstdlib>

namespace hetrag {

namespace {

using nlohmann::json;

struct Url {
    std::string origin;  // scheme://host[:port]
    std::string prefix;  // path prefix, no trailing slash
};

Url split_url(const std::string& base) {
    const auto scheme = base.find("://");
    if (scheme == std::string::npos) throw ConfigError("API base URL needs a scheme: " + base);
    const auto slash = base.find('/', scheme + 3);
    Url u;
    u.origin = base.substr(0, slash);
    u.prefix = slash == std::string::npos ? "" : base.substr(slash);
    while (!u.prefix.empty() && u.prefix.back() == '/') u.prefix.pop_back();
    return u;
}

std::string post_json(const HttpEndpoint& ep, const std::string& route, const json& body) {
    const Url url = split_url(ep.base_url);
    httplib::Client cli(url.origin);
    cli.set_connection_timeout(ep.timeout_seconds);
    cli.set_read_timeout(ep.timeout_seconds);
    httplib::Headers headers;
    if (!ep.api_key.empty()) headers.emplace("Authorization", "Bearer " + ep.api_key);
    auto res = cli.Post(url.prefix + route, headers, body.dump(), "application/json");
    if (!res) {
        throw ClientError("request to " + route + " failed: " + httplib::to_string(res.error()), true);
    }
    if (res->status < 200 || res->status >= 300) {
        throw ClientError("HTTP " + std::to_string(res->status) + " from " + route,
                          is_retryable_status(res->status));
    }
    return res->body;
}

json parse_body(const std::string& body) {
    try {
        return json::parse(body);
    } catch (const json::parse_error& e) {
        throw ClientError(std::string("malformed response: ") + e.what(), false);
    }
}

}  // namespace

HttpEndpoint HttpEndpoint::from_env(std::string model) {
    HttpEndpoint ep;
    const char* base = std::getenv("HETRAG_API_BASE");
    const char* key = std::getenv("HETRAG_API_KEY");
    ep.base_url = base ? base : "https://api.openai.com/v1";
    ep.api_key = key ? key : "";
    ep.model = std::move(model);
    return ep;
}

bool is_retryable_status(int status) { return status == 429 || status >= 500; }

json completion_request_body(const std::string& model, const CompletionRequest& request) {
    json body{{"model", model},
              {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
              {"max_tokens", request.max_output_tokens}};
    if (request.deterministic) body["temperature"] = 0;
    return body;
}

std::string parse_completion_response(const std::string& body) {
    const json j = parse_body(body);
    try {
        return j.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const json::exception& e) {
        throw ClientError(std::string("unexpected completion response: ") + e.what(), false);
    }
}

json embedding_request_body(const std::string& model, std::string_view text) {
    return json{{"model", model}, {"input", std::string(text)}};
}

EmbeddingVector parse_embedding_response(const std::string& body) {
    const json j = parse_body(body);
    std::vector<double> values;
    try {
        values = j.at("data").at(0).at("embedding").get<std::vector<double>>();
    } catch (const json::exception& e) {
        throw ClientError(std::string("unexpected embedding response: ") + e.what(), false);
    }
    EmbeddingVector v = Eigen::Map<const Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    validate_embedding(v);
    return v;
}

std::string HttpCompletionClient::complete(const CompletionRequest& request) const {
    return parse_completion_response(
        post_json(endpoint_, "/chat/completions", completion_request_body(endpoint_.model, request)));
}

EmbeddingVector HttpEmbedder::embed(std::string_view text) const {
    return parse_embedding_response(post_json(endpoint_, "/embeddings", embedding_request_body(endpoint_.model, text)));
}

Eigen::Index HttpEmbedder::dim() const {
    std::call_once(dim_once_, [this] { dim_ = embed("dimension probe").size(); });
    return dim_;
}

}  // namespace hetrag
