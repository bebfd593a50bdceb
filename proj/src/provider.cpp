#include "rolebreak/provider.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <regex>
#include <thread>

#include <json.hpp>

#include "rolebreak/dataset.hpp"
#include "rolebreak/ids.hpp"

namespace rolebreak {

void validate_chat_request(const ChatRequest& request) {
    if (request.system_prompt.empty() && request.messages.empty()) {
        throw std::invalid_argument("chat request has neither system prompt nor messages");
    }
    if (!(request.temperature >= 0.0 && request.temperature <= 2.0)) {
        throw std::invalid_argument("temperature out of [0,2]");
    }
}

std::string render_request(const ChatRequest& request) {
    std::string out = "[system]\n" + request.system_prompt;
    for (const auto& message : request.messages) {
        out += message.speaker == ChatMessage::Speaker::User ? "\n\n[user]\n" : "\n\n[assistant]\n";
        out += message.text;
    }
    return out;
}

double cosine_similarity(const EmbeddingVector& a, const EmbeddingVector& b) {
    if (a.dim() != b.dim()) {
        throw std::invalid_argument("embedding dimension mismatch: " + std::to_string(a.dim()) +
                                    " vs " + std::to_string(b.dim()));
    }
    double dot = 0.0, norm_a = 0.0, norm_b = 0.0;
    for (size_t i = 0; i < a.values.size(); ++i) {
        dot += a.values[i] * b.values[i];
        norm_a += a.values[i] * a.values[i];
        norm_b += b.values[i] * b.values[i];
    }
    if (norm_a == 0.0 || norm_b == 0.0) {
        throw std::invalid_argument("cosine similarity undefined for zero-norm vector");
    }
    return dot / (std::sqrt(norm_a) * std::sqrt(norm_b));
}

std::string ProviderFingerprint::descriptor() const {
    char temp[32];
    std::snprintf(temp, sizeof(temp), "%.3f", temperature);
    std::string out = kind == Kind::Scripted ? "scripted" : "live";
    out += "|model=" + model_id + "|temp=" + temp;
    out += "|seed=" + (seed ? std::to_string(*seed) : std::string("none"));
    return out;
}

// --- scripted backend ---

std::shared_ptr<ScriptedBackend> ScriptedBackend::from_file(const std::filesystem::path& path) {
    auto backend = std::make_shared<ScriptedBackend>();
    for (const auto& j : read_jsonl(path, "script")) {
        const std::string record = j.value("record", "");
        if (record == "rule") {
            ScriptRule rule;
            if (j.contains("match")) {
                if (j.at("match").is_array()) {
                    rule.substrings = j.at("match").get<std::vector<std::string>>();
                } else {
                    rule.substrings.push_back(j.at("match").get<std::string>());
                }
            }
            if (j.contains("pattern")) rule.pattern = j.at("pattern").get<std::string>();
            if (rule.substrings.empty() && !rule.pattern) {
                throw ProviderError("script rule without match or pattern in " + path.string());
            }
            rule.response = j.at("response").get<std::string>();
            backend->add_rule(std::move(rule));
        } else if (record == "embed") {
            EmbedRule rule;
            rule.substring = j.at("match").get<std::string>();
            rule.vector = j.at("vector").get<std::vector<double>>();
            backend->add_embed_rule(std::move(rule));
        } else if (record == "embed_default") {
            backend->set_embed_fallback_dim(j.at("dim").get<int>());
        } else {
            throw ProviderError("unknown script record '" + record + "' in " + path.string());
        }
    }
    return backend;
}

std::string ScriptedBackend::complete(const ChatRequest& request) {
    chat_calls_.fetch_add(1);
    const std::string rendered = render_request(request);
    for (const auto& rule : rules_) {
        bool matched = true;
        for (const auto& needle : rule.substrings) {
            if (rendered.find(needle) == std::string::npos) {
                matched = false;
                break;
            }
        }
        if (matched && rule.pattern) {
            matched = std::regex_search(rendered, std::regex(*rule.pattern));
        }
        if (matched) return rule.response;
    }
    std::string head = rendered.substr(0, 160);
    std::replace(head.begin(), head.end(), '\n', ' ');
    throw ScriptMissError("no script rule matches request: " + head + "...");
}

EmbeddingVector ScriptedBackend::embed(const std::string& text, const std::string& model_id) {
    embed_calls_.fetch_add(1);
    for (const auto& rule : embed_rules_) {
        if (text.find(rule.substring) != std::string::npos) {
            return EmbeddingVector{rule.vector, model_id};
        }
    }
    if (embed_fallback_dim_) {
        EmbeddingVector v;
        v.model_id = model_id;
        v.values.resize(static_cast<size_t>(*embed_fallback_dim_));
        for (int i = 0; i < *embed_fallback_dim_; ++i) {
            uint64_t h = fnv1a64_fields({"embed", text, std::to_string(i)});
            v.values[static_cast<size_t>(i)] =
                static_cast<double>(h % 2000003ull) / 1000001.5 - 1.0;
        }
        bool all_zero = std::all_of(v.values.begin(), v.values.end(),
                                    [](double x) { return x == 0.0; });
        if (all_zero) v.values[0] = 1.0;
        return v;
    }
    throw ScriptMissError("no embed rule matches text: " + text.substr(0, 80));
}

// --- caching client ---

ProviderClient::ProviderClient(std::shared_ptr<ChatBackend> backend,
                               ProviderFingerprint fingerprint, RetryPolicy retry,
                               int max_in_flight, Sleeper sleeper)
    : backend_(std::move(backend)),
      fingerprint_(std::move(fingerprint)),
      retry_(retry),
      sleeper_(std::move(sleeper)),
      free_slots_(max_in_flight > 0 ? max_in_flight : 1),
      retry_rng_state_(fnv1a64(fingerprint_.descriptor())) {
    if (!sleeper_) {
        sleeper_ = [](std::chrono::milliseconds d) { std::this_thread::sleep_for(d); };
    }
}

std::string ProviderClient::run_with_retry(const std::function<std::string()>& attempt) {
    std::chrono::milliseconds delay = retry_.initial_delay;
    for (int n = 1;; ++n) {
        try {
            return attempt();
        } catch (const TransportError&) {
            if (n >= retry_.max_attempts) throw;
        }
        double jitter_factor = 1.0;
        {
            std::lock_guard<std::mutex> lock(retry_rng_mutex_);
            retry_rng_state_ = retry_rng_state_ * 6364136223846793005ull + 1442695040888963407ull;
            double unit = static_cast<double>(retry_rng_state_ >> 11) /
                          static_cast<double>(1ull << 53);
            jitter_factor = 1.0 + retry_.jitter * (2.0 * unit - 1.0);
        }
        auto jittered = std::chrono::milliseconds(
            static_cast<int64_t>(static_cast<double>(delay.count()) * jitter_factor));
        sleeper_(jittered);
        delay = std::min(delay * 2, retry_.max_delay);
    }
}

std::string ProviderClient::complete_chat(const ChatRequest& request) {
    ChatRequest effective = request;
    if (effective.model_id.empty()) effective.model_id = fingerprint_.model_id;
    if (!effective.seed) effective.seed = fingerprint_.seed;
    validate_chat_request(effective);

    char temp[32];
    std::snprintf(temp, sizeof(temp), "%.6f", effective.temperature);
    uint64_t key = fnv1a64_fields({"chat", fingerprint_.descriptor(), effective.model_id, temp,
                                   effective.seed ? std::to_string(*effective.seed) : "none",
                                   render_request(effective)});
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = chat_cache_.find(key);
        if (it != chat_cache_.end()) {
            cache_hits_.fetch_add(1);
            return it->second;
        }
    }

    std::string text;
    {
        std::unique_lock<std::mutex> slot(slots_mutex_);
        slots_cv_.wait(slot, [&] { return free_slots_ > 0; });
        --free_slots_;
        slot.unlock();
        try {
            text = run_with_retry([&] { return backend_->complete(effective); });
        } catch (...) {
            slot.lock();
            ++free_slots_;
            slots_cv_.notify_one();
            throw;
        }
        slot.lock();
        ++free_slots_;
        slots_cv_.notify_one();
    }
    if (text.empty()) throw ProviderError("backend returned empty completion");

    std::lock_guard<std::mutex> lock(cache_mutex_);
    chat_cache_.emplace(key, text);  // identical values on concurrent misses
    return text;
}

EmbeddingVector ProviderClient::embed_text(const std::string& text) {
    if (text.empty()) throw std::invalid_argument("embed_text requires non-empty text");
    uint64_t key = fnv1a64_fields({"embed", fingerprint_.descriptor(), fingerprint_.model_id, text});
    {
        std::lock_guard<std::mutex> lock(cache_mutex_);
        auto it = embed_cache_.find(key);
        if (it != embed_cache_.end()) {
            cache_hits_.fetch_add(1);
            return EmbeddingVector{it->second, fingerprint_.model_id};
        }
    }

    EmbeddingVector vector;
    {
        std::unique_lock<std::mutex> slot(slots_mutex_);
        slots_cv_.wait(slot, [&] { return free_slots_ > 0; });
        --free_slots_;
        slot.unlock();
        try {
            run_with_retry([&] {
                vector = backend_->embed(text, fingerprint_.model_id);
                return std::string("ok");
            });
        } catch (...) {
            slot.lock();
            ++free_slots_;
            slots_cv_.notify_one();
            throw;
        }
        slot.lock();
        ++free_slots_;
        slots_cv_.notify_one();
    }

    if (vector.dim() == 0) throw ProviderError("backend returned empty embedding");
    for (double v : vector.values) {
        if (!std::isfinite(v)) throw ProviderError("backend returned non-finite embedding value");
    }
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto [it, inserted] = embed_dims_.emplace(vector.model_id, vector.dim());
    if (!inserted && it->second != vector.dim()) {
        throw ProviderError("embedding dimension changed for model " + vector.model_id + ": " +
                            std::to_string(it->second) + " -> " + std::to_string(vector.dim()));
    }
    embed_cache_.emplace(key, vector.values);
    return vector;
}

}  // namespace rolebreak
