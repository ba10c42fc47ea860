#include "psytab/backend.hpp"

#include <cstdlib>
#include <mutex>
#include <string_view>

#include <nlohmann/json.hpp>

#include "httplib.h"

namespace psytab {

namespace {

/// Number of "- item: score" entries in the prompt's previous-answers block;
/// equals the index of the item currently being asked.
std::size_t count_memory_entries(const std::string& prompt) {
    const std::string header = "Your previous answers:";
    std::size_t pos = prompt.rfind(header);
    if (pos == std::string::npos) return 0;
    pos = prompt.find('\n', pos);
    std::size_t count = 0;
    while (pos != std::string::npos) {
        std::size_t line_start = pos + 1;
        if (prompt.compare(line_start, 2, "- ") != 0) break;
        ++count;
        pos = prompt.find('\n', line_start);
    }
    return count;
}

std::string field_after(const std::string& prompt, const std::string& label) {
    std::size_t pos = prompt.find(label);
    if (pos == std::string::npos) return {};
    pos += label.size();
    while (pos < prompt.size() && prompt[pos] == ' ') ++pos;
    std::size_t end = pos;
    while (end < prompt.size() && prompt[end] != '\n' && prompt[end] != '\r') ++end;
    return prompt.substr(pos, end - pos);
}

std::string score_reply(int score, const std::string& remark) {
    return remark + "\nSCORE: " + std::to_string(score) + "\n";
}

class ConstantBackend : public LlmBackend {
public:
    explicit ConstantBackend(int score) : score_(score) {}
    std::string complete(const std::string&) const override {
        return score_reply(score_, "That matches how things have been for me.");
    }
    std::string name() const override { return "mock:score:" + std::to_string(score_); }

private:
    int score_;
};

class CycleBackend : public LlmBackend {
public:
    std::string complete(const std::string& prompt) const override {
        int score = static_cast<int>(count_memory_entries(prompt) % 5);
        return score_reply(score, "Going through the items one by one.");
    }
    std::string name() const override { return "mock:cycle"; }
};

class SeverityBackend : public LlmBackend {
public:
    std::string complete(const std::string& prompt) const override {
        std::string severity = field_after(prompt, "severity prior:");
        int base = 0;
        if (severity == "mild") base = 1;
        else if (severity == "moderate") base = 2;
        else if (severity == "severe") base = 3;
        int jitter = static_cast<int>(count_memory_entries(prompt) % 2);
        int score = base + jitter;
        if (score > 4) score = 4;
        return score_reply(score, "Given how I have been feeling lately, I would put it here.");
    }
    std::string name() const override { return "mock:severity"; }
};

class FlakyBackend : public LlmBackend {
public:
    FlakyBackend(std::unique_ptr<LlmBackend> inner, std::string flaky_item, int failures)
        : inner_(std::move(inner)), flaky_item_(std::move(flaky_item)), remaining_(failures) {}

    std::string complete(const std::string& prompt) const override {
        if (prompt.find(flaky_item_) != std::string::npos) {
            std::lock_guard<std::mutex> lock(mutex_);
            if (remaining_ > 0) {
                --remaining_;
                throw Error(errc::backend_unavailable, "injected transient backend failure");
            }
        }
        return inner_->complete(prompt);
    }
    std::string name() const override { return "flaky:" + inner_->name(); }

private:
    std::unique_ptr<LlmBackend> inner_;
    std::string flaky_item_;
    mutable std::mutex mutex_;
    mutable int remaining_;
};

}  // namespace

std::unique_ptr<LlmBackend> make_mock_backend(const std::string& spec) {
    if (spec.empty() || spec == "severity") return std::make_unique<SeverityBackend>();
    if (spec == "cycle") return std::make_unique<CycleBackend>();
    if (spec.rfind("score:", 0) == 0) {
        std::string digits = spec.substr(6);
        if (digits.empty() || digits.find_first_not_of("0123456789") != std::string::npos)
            throw Error(errc::invalid_config, "mock score must be a nonnegative integer: " + spec);
        return std::make_unique<ConstantBackend>(std::stoi(digits));
    }
    throw Error(errc::invalid_config, "unknown mock backend spec: " + spec);
}

std::unique_ptr<LlmBackend> make_flaky_backend(std::unique_ptr<LlmBackend> inner,
                                               std::string flaky_item, int failures) {
    return std::make_unique<FlakyBackend>(std::move(inner), std::move(flaky_item), failures);
}

HttpChatBackend::HttpChatBackend(BackendConfig config) : config_(std::move(config)) {
    std::string url = config_.endpoint;
    std::size_t scheme_end = url.find("://");
    std::size_t path_start =
        url.find('/', scheme_end == std::string::npos ? 0 : scheme_end + 3);
    if (path_start == std::string::npos) {
        base_url_ = url;
    } else {
        base_url_ = url.substr(0, path_start);
        path_prefix_ = url.substr(path_start);
        while (!path_prefix_.empty() && path_prefix_.back() == '/') path_prefix_.pop_back();
    }
    if (base_url_.empty())
        throw Error(errc::invalid_config, "backend endpoint must not be empty");
}

std::string HttpChatBackend::complete(const std::string& prompt) const {
    httplib::Client client(base_url_);
    if (!client.is_valid())
        throw Error(errc::backend_unavailable, "unsupported backend endpoint: " + base_url_);
    client.set_connection_timeout(config_.timeout_seconds, 0);
    client.set_read_timeout(config_.timeout_seconds, 0);
    client.set_write_timeout(config_.timeout_seconds, 0);

    httplib::Headers headers;
    if (!config_.api_key_env.empty()) {
        const char* key = std::getenv(config_.api_key_env.c_str());
        if (key != nullptr && key[0] != '\0')
            headers.emplace("Authorization", std::string("Bearer ") + key);
    }

    nlohmann::ordered_json body;
    body["model"] = config_.model;
    body["messages"] = nlohmann::ordered_json::array(
        {{{"role", "user"}, {"content", prompt}}});
    body["temperature"] = config_.temperature;
    body["max_tokens"] = config_.max_tokens;

    auto res = client.Post(path_prefix_ + "/v1/chat/completions", headers, body.dump(),
                           "application/json");
    if (!res)
        throw Error(errc::backend_unavailable,
                    "no response from " + base_url_ + ": " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw Error(errc::backend_unavailable,
                    "backend returned HTTP " + std::to_string(res->status));

    try {
        nlohmann::json doc = nlohmann::json::parse(res->body);
        return doc.at("choices").at(0).at("message").at("content").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(errc::backend_unavailable,
                    "malformed backend response: " + std::string(e.what()));
    }
}

}  // namespace psytab
