#pragma once

#include <Eigen/Dense>

#include <atomic>
#include <cstddef>
#include <memory>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace hetrag {

// ---- completion ---------------------------------------------------------------------

struct CompletionRequest {
    std::string prompt;
    int max_output_tokens = 1024;
    bool deterministic = true;  // temperature 0 where the provider supports it
};

/// Text-completion contract. Implementations must tolerate concurrent calls.
/// Failures are reported as ClientError (carrying a retryable flag).
class CompletionClient {
public:
    virtual ~CompletionClient() = default;
    [[nodiscard]] virtual std::string complete(const CompletionRequest& request) const = 0;
};

/// Calls `client`, retrying retryable ClientErrors up to `max_retries` times.
[[nodiscard]] std::string complete_with_retry(const CompletionClient& client,
                                              const CompletionRequest& request,
                                              int max_retries = 2);

// ---- tokens ----------------------------------------------------------------------------

class TokenCounter {
public:
    virtual ~TokenCounter() = default;
    [[nodiscard]] virtual std::size_t count(std::string_view text) const = 0;
};

/// ceil(byte_length / 4).
class HeuristicTokenCounter final : public TokenCounter {
public:
    [[nodiscard]] std::size_t count(std::string_view text) const override {
        return (text.size() + 3) / 4;
    }
};

[[nodiscard]] const TokenCounter& default_token_counter();

[[nodiscard]] inline std::size_t count_tokens(std::string_view text,
                                              const TokenCounter& counter = default_token_counter()) {
    return counter.count(text);
}

struct TokenBudget {
    std::size_t max_tokens = 100000;
};

// ---- embeddings -----------------------------------------------------------------------

using EmbeddingVector = Eigen::VectorXd;

class Embedder {
public:
    virtual ~Embedder() = default;
    [[nodiscard]] virtual EmbeddingVector embed(std::string_view text) const = 0;
    [[nodiscard]] virtual Eigen::Index dim() const = 0;
    /// Stable identifier used to key embedding caches.
    [[nodiscard]] virtual std::string id() const = 0;
};

/// Throws ConfigError when the vector is empty or holds non-finite values.
void validate_embedding(const EmbeddingVector& v);

/// Cosine similarity; 0 when either vector has zero norm.
[[nodiscard]] double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

// ---- deterministic mocks ---------------------------------------------------------------

inline constexpr std::string_view kMockSentinel = "[mock] no scripted response";

/// Matches when every substring in `all_of` occurs in the prompt.
struct MockRule {
    std::vector<std::string> all_of;
    std::string response;
};

/// Returns the response of the first matching rule, or kMockSentinel.
class MockCompletionClient final : public CompletionClient {
public:
    explicit MockCompletionClient(std::vector<MockRule> script) : script_(std::move(script)) {}

    [[nodiscard]] std::string complete(const CompletionRequest& request) const override;
    [[nodiscard]] std::size_t call_count() const { return calls_.load(); }

private:
    std::vector<MockRule> script_;
    mutable std::atomic<std::size_t> calls_{0};
};

[[nodiscard]] std::string mock_complete(const CompletionRequest& request,
                                        const std::vector<MockRule>& script);

/// term -> index map for the bag-of-words embedder.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::vector<std::string> terms);

    /// Sorted, deduplicated retrieval tokens of all `texts`.
    [[nodiscard]] static Vocabulary from_texts(const std::vector<std::string>& texts);

    [[nodiscard]] std::size_t size() const { return terms_.size(); }
    [[nodiscard]] bool empty() const { return terms_.empty(); }
    [[nodiscard]] const std::vector<std::string>& terms() const { return terms_; }
    /// -1 when absent.
    [[nodiscard]] long index_of(const std::string& term) const;

private:
    std::vector<std::string> terms_;
    std::unordered_map<std::string, long> index_;
};

/// L2-normalized term-frequency vector; out-of-vocabulary terms are ignored,
/// all-OOV text gives the zero vector. Throws ConfigError for an empty vocabulary.
[[nodiscard]] EmbeddingVector bow_embed(std::string_view text, const Vocabulary& vocab);

class BowEmbedder final : public Embedder {
public:
    explicit BowEmbedder(Vocabulary vocab);

    [[nodiscard]] EmbeddingVector embed(std::string_view text) const override {
        return bow_embed(text, vocab_);
    }
    [[nodiscard]] Eigen::Index dim() const override { return static_cast<Eigen::Index>(vocab_.size()); }
    [[nodiscard]] std::string id() const override;
    [[nodiscard]] const Vocabulary& vocabulary() const { return vocab_; }

private:
    Vocabulary vocab_;
};

}  // namespace hetrag
