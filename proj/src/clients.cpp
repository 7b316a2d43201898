#include "hetrag/clients.hpp"

#include "hetrag/errors.hpp"
#include "hetrag/text.hpp"

#include <spdlog/spdlog.h>

#include <algorithm>
#include <cmath>

namespace hetrag {

std::string complete_with_retry(const CompletionClient& client, const CompletionRequest& request,
                                int max_retries) {
    for (int attempt = 0;; ++attempt) {
        try {
            return client.complete(request);
        } catch (const ClientError& e) {
            if (!e.retryable() || attempt >= max_retries) throw;
            spdlog::warn("completion attempt {} failed ({}), retrying", attempt + 1, e.what());
        }
    }
}

const TokenCounter& default_token_counter() {
    static const HeuristicTokenCounter counter;
    return counter;
}

void validate_embedding(const EmbeddingVector& v) {
    if (v.size() == 0) throw ConfigError("embedding has dimension 0");
    if (!v.allFinite()) throw ConfigError("embedding contains non-finite values");
}

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

std::string mock_complete(const CompletionRequest& request, const std::vector<MockRule>& script) {
    for (const auto& rule : script) {
        const bool all = std::all_of(rule.all_of.begin(), rule.all_of.end(), [&](const std::string& s) {
            return request.prompt.find(s) != std::string::npos;
        });
        if (all) return rule.response;
    }
    return std::string(kMockSentinel);
}

std::string MockCompletionClient::complete(const CompletionRequest& request) const {
    calls_.fetch_add(1);
    return mock_complete(request, script_);
}

Vocabulary::Vocabulary(std::vector<std::string> terms) : terms_(std::move(terms)) {
    index_.reserve(terms_.size());
    for (std::size_t i = 0; i < terms_.size(); ++i) {
        if (!index_.emplace(terms_[i], static_cast<long>(i)).second) {
            throw ConfigError("duplicate vocabulary term '" + terms_[i] + "'");
        }
    }
}

Vocabulary Vocabulary::from_texts(const std::vector<std::string>& texts) {
    std::vector<std::string> terms;
    for (const auto& t : texts) {
        auto toks = text::tokenize(t);
        terms.insert(terms.end(), std::make_move_iterator(toks.begin()),
                     std::make_move_iterator(toks.end()));
    }
    std::sort(terms.begin(), terms.end());
    terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
    return Vocabulary(std::move(terms));
}

long Vocabulary::index_of(const std::string& term) const {
    auto it = index_.find(term);
    return it == index_.end() ? -1 : it->second;
}

EmbeddingVector bow_embed(std::string_view text, const Vocabulary& vocab) {
    if (vocab.empty()) throw ConfigError("bag-of-words vocabulary is empty");
    EmbeddingVector v = EmbeddingVector::Zero(static_cast<Eigen::Index>(vocab.size()));
    for (const auto& tok : text::tokenize(text)) {
        if (long idx = vocab.index_of(tok); idx >= 0) v[idx] += 1.0;
    }
    const double norm = v.norm();
    if (norm > 0.0) v /= norm;
    return v;
}

BowEmbedder::BowEmbedder(Vocabulary vocab) : vocab_(std::move(vocab)) {
    if (vocab_.empty()) throw ConfigError("bag-of-words vocabulary is empty");
}

std::string BowEmbedder::id() const {
    std::uint64_t h = text::fnv1a("bow");
    for (const auto& t : vocab_.terms()) {
        h = text::fnv1a(t, h);
        h = text::fnv1a("\n", h);
    }
    return "bow-" + text::hex64(h);
}

}  // namespace hetrag
