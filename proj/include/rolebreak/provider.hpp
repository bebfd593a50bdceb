#pragma once
// Uniform access to chat-completion and text-embedding backends.
//
// Two backends speak the same interface: an HTTP client for the usual
// chat-completions contract, and a scripted backend that replays canned
// responses for hermetic tests. A caching client wraps either one with
// retry, rate limiting, and a response cache.

#include <atomic>
#include <chrono>
#include <condition_variable>
#include <filesystem>
#include <functional>
#include <memory>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace rolebreak {

struct ProviderError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Transient transport failure; the only error class the retry loop retries.
struct TransportError : ProviderError {
    using ProviderError::ProviderError;
};

// The scripted backend had no rule for a request. Never retried and never
// substituted with a fabricated reply.
struct ScriptMissError : ProviderError {
    using ProviderError::ProviderError;
};

struct ChatMessage {
    enum class Speaker { User, Assistant };
    Speaker speaker = Speaker::User;
    std::string text;
};

struct ChatRequest {
    std::string system_prompt;
    std::vector<ChatMessage> messages;
    double temperature = 0.8;
    std::string model_id;
    std::optional<int> seed;
};

// Throws std::invalid_argument when the request violates its invariants
// (no content, or temperature outside [0,2]).
void validate_chat_request(const ChatRequest& request);

// Canonical single-string rendering of a request. Scripted rule matchers and
// cache keys both operate over this text.
std::string render_request(const ChatRequest& request);

struct EmbeddingVector {
    std::vector<double> values;
    std::string model_id;
    int dim() const { return static_cast<int>(values.size()); }
};

// (a.b)/(|a||b|). Throws on dimension mismatch or a zero-norm argument.
double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b);

struct ProviderFingerprint {
    enum class Kind { Live, Scripted };
    Kind kind = Kind::Scripted;
    std::string model_id;
    double temperature = 0.8;
    std::optional<int> seed;

    std::string descriptor() const;
};

class ChatBackend {
  public:
    virtual ~ChatBackend() = default;
    virtual std::string complete(const ChatRequest& request) = 0;
    virtual EmbeddingVector embed(const std::string& text, const std::string& model_id) = 0;
    virtual ProviderFingerprint::Kind kind() const = 0;

    uint64_t chat_calls() const { return chat_calls_.load(); }
    uint64_t embed_calls() const { return embed_calls_.load(); }

  protected:
    std::atomic<uint64_t> chat_calls_{0};
    std::atomic<uint64_t> embed_calls_{0};
};

// --- scripted backend ---

struct ScriptRule {
    std::vector<std::string> substrings;    // all must occur in the rendered prompt
    std::optional<std::string> pattern;     // alternative: regex over the rendered prompt
    std::string response;
};

struct EmbedRule {
    std::string substring;                  // matched against the input text
    std::vector<double> vector;
};

// Deterministic rule-based stand-in for a live backend. Read-only after
// construction; first matching rule wins. A request no rule matches is an
// error, never a fabricated reply.
class ScriptedBackend : public ChatBackend {
  public:
    ScriptedBackend() = default;

    // Rules file: JSONL with records {"record":"rule",...}, {"record":"embed",...}
    // and optionally {"record":"embed_default","dim":N}.
    static std::shared_ptr<ScriptedBackend> from_file(const std::filesystem::path& path);

    void add_rule(ScriptRule rule) { rules_.push_back(std::move(rule)); }
    void add_embed_rule(EmbedRule rule) { embed_rules_.push_back(std::move(rule)); }
    // Enables a derived deterministic embedding for texts no embed rule matches.
    void set_embed_fallback_dim(int dim) { embed_fallback_dim_ = dim; }

    std::string complete(const ChatRequest& request) override;
    EmbeddingVector embed(const std::string& text, const std::string& model_id) override;
    ProviderFingerprint::Kind kind() const override { return ProviderFingerprint::Kind::Scripted; }

  private:
    std::vector<ScriptRule> rules_;
    std::vector<EmbedRule> embed_rules_;
    std::optional<int> embed_fallback_dim_;
};

// --- live backend ---

struct HttpBackendConfig {
    std::string base_url;          // e.g. https://api.example.com/v1
    std::string api_key;           // resolved from the environment by the caller
    int connect_timeout_s = 10;
    int read_timeout_s = 120;
};

// Speaks POST {base}/chat/completions and POST {base}/embeddings.
class HttpBackend : public ChatBackend {
  public:
    explicit HttpBackend(HttpBackendConfig config) : config_(std::move(config)) {}
    std::string complete(const ChatRequest& request) override;
    EmbeddingVector embed(const std::string& text, const std::string& model_id) override;
    ProviderFingerprint::Kind kind() const override { return ProviderFingerprint::Kind::Live; }

  private:
    HttpBackendConfig config_;
};

// --- caching client ---

struct RetryPolicy {
    int max_attempts = 5;
    std::chrono::milliseconds initial_delay{1000};
    std::chrono::milliseconds max_delay{30000};
    double jitter = 0.25;  // +/- fraction of the computed delay
};

// Thread-safe wrapper adding validation, retry with exponential backoff,
// bounded in-flight concurrency, and a response cache keyed by
// hash(fingerprint, request). Cached and uncached paths return identical text.
class ProviderClient {
  public:
    using Sleeper = std::function<void(std::chrono::milliseconds)>;

    ProviderClient(std::shared_ptr<ChatBackend> backend, ProviderFingerprint fingerprint,
                   RetryPolicy retry = {}, int max_in_flight = 4, Sleeper sleeper = nullptr);

    std::string complete_chat(const ChatRequest& request);
    EmbeddingVector embed_text(const std::string& text);

    const ProviderFingerprint& fingerprint() const { return fingerprint_; }
    std::shared_ptr<ChatBackend> backend() const { return backend_; }
    uint64_t backend_chat_calls() const { return backend_->chat_calls(); }
    uint64_t cache_hits() const { return cache_hits_.load(); }

  private:
    std::string run_with_retry(const std::function<std::string()>& attempt);

    std::shared_ptr<ChatBackend> backend_;
    ProviderFingerprint fingerprint_;
    RetryPolicy retry_;
    Sleeper sleeper_;

    std::mutex cache_mutex_;
    std::unordered_map<uint64_t, std::string> chat_cache_;
    std::unordered_map<uint64_t, std::vector<double>> embed_cache_;
    std::unordered_map<std::string, int> embed_dims_;  // model_id -> dim
    std::atomic<uint64_t> cache_hits_{0};

    std::mutex slots_mutex_;
    std::condition_variable slots_cv_;
    int free_slots_;

    std::mutex retry_rng_mutex_;
    uint64_t retry_rng_state_;
};

}  // namespace rolebreak
