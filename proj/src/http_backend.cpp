#include <json.hpp>

#include "rolebreak/provider.hpp"

#ifdef ROLEBREAK_WITH_TLS
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include <httplib.h>

namespace rolebreak {

namespace {

using json = nlohmann::json;

struct SplitUrl {
    std::string origin;       // scheme://host[:port]
    std::string path_prefix;  // e.g. /v1
};

SplitUrl split_base_url(const std::string& base_url) {
    auto scheme_end = base_url.find("://");
    if (scheme_end == std::string::npos) {
        throw ProviderError("base_url missing scheme: " + base_url);
    }
    auto path_start = base_url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.origin = base_url;
    } else {
        out.origin = base_url.substr(0, path_start);
        out.path_prefix = base_url.substr(path_start);
        while (!out.path_prefix.empty() && out.path_prefix.back() == '/') {
            out.path_prefix.pop_back();
        }
    }
    return out;
}

json post_json(const HttpBackendConfig& config, const std::string& endpoint, const json& body) {
    SplitUrl url = split_base_url(config.base_url);
    httplib::Client client(url.origin);
    client.set_connection_timeout(config.connect_timeout_s, 0);
    client.set_read_timeout(config.read_timeout_s, 0);
    httplib::Headers headers;
    if (!config.api_key.empty()) {
        headers.emplace("Authorization", "Bearer " + config.api_key);
    }
    auto result = client.Post(url.path_prefix + endpoint, headers, body.dump(),
                              "application/json");
    if (!result) {
        throw TransportError("transport failure on " + endpoint + ": " +
                             httplib::to_string(result.error()));
    }
    if (result->status == 429 || result->status >= 500) {
        throw TransportError("HTTP " + std::to_string(result->status) + " on " + endpoint);
    }
    if (result->status != 200) {
        throw ProviderError("HTTP " + std::to_string(result->status) + " on " + endpoint + ": " +
                            result->body.substr(0, 200));
    }
    try {
        return json::parse(result->body);
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unparseable response body: ") + e.what());
    }
}

}  // namespace

std::string HttpBackend::complete(const ChatRequest& request) {
    chat_calls_.fetch_add(1);
    json messages = json::array();
    if (!request.system_prompt.empty()) {
        messages.push_back({{"role", "system"}, {"content", request.system_prompt}});
    }
    for (const auto& message : request.messages) {
        messages.push_back(
            {{"role", message.speaker == ChatMessage::Speaker::User ? "user" : "assistant"},
             {"content", message.text}});
    }
    json body = {{"model", request.model_id},
                 {"messages", messages},
                 {"temperature", request.temperature}};
    if (request.seed) body["seed"] = *request.seed;

    json response = post_json(config_, "/chat/completions", body);
    try {
        auto text = response.at("choices").at(0).at("message").at("content").get<std::string>();
        if (text.empty()) throw ProviderError("upstream returned empty completion");
        return text;
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unexpected completion shape: ") + e.what());
    }
}

EmbeddingVector HttpBackend::embed(const std::string& text, const std::string& model_id) {
    embed_calls_.fetch_add(1);
    json body = {{"model", model_id}, {"input", text}};
    json response = post_json(config_, "/embeddings", body);
    try {
        EmbeddingVector vector;
        vector.model_id = model_id;
        vector.values = response.at("data").at(0).at("embedding").get<std::vector<double>>();
        return vector;
    } catch (const json::exception& e) {
        throw ProviderError(std::string("unexpected embedding shape: ") + e.what());
    }
}

}  // namespace rolebreak
