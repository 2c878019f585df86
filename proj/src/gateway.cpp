#ifdef DAE_WITH_OPENSSL
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif

#include "dae/gateway.hpp"

#include <chrono>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <map>
#include <thread>

#include <httplib.h>
#include <nlohmann/json.hpp>

#include "dae/lexicons.hpp"

namespace dae {

using json = nlohmann::ordered_json;

void GatewayConfig::validate() const {
    if (max_retries < 0) throw ConfigError("max_retries must be >= 0");
    if (rate_limit_per_minute <= 0) throw ConfigError("rate_limit must be > 0");
    if (backoff_base_seconds < 0) throw ConfigError("backoff_base must be >= 0");
}

namespace {

class SystemClock : public Clock {
public:
    double now_seconds() override {
        using namespace std::chrono;
        return duration<double>(steady_clock::now().time_since_epoch()).count();
    }
    void sleep_for(double seconds) override {
        if (seconds > 0)
            std::this_thread::sleep_for(std::chrono::duration<double>(seconds));
    }
};

class HttplibTransport : public HttpTransport {
public:
    HttpResponse post(const std::string& base_url, const std::string& path,
                      const std::string& json_body, const std::string& api_key) override {
        httplib::Client client(base_url);
        client.set_connection_timeout(15, 0);
        client.set_read_timeout(120, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + api_key}};
        auto res = client.Post(path, headers, json_body, "application/json");
        if (!res) throw IoError("transport failure talking to " + base_url);
        return {res->status, res->body};
    }
};

// --- mock template bank -----------------------------------------------------

struct PersonaAttrs {
    std::string gender;
    std::string age;
    std::string education;
    bool present = false;
};

PersonaAttrs parse_persona(const std::string& prompt) {
    PersonaAttrs p;
    std::size_t at = prompt.find(prompt_markers::kPersonaPrefix);
    if (at == std::string::npos) return p;
    std::size_t end = prompt.find(']', at);
    if (end == std::string::npos) return p;
    std::string body = prompt.substr(at, end - at);
    auto field = [&](const std::string& key) -> std::string {
        std::size_t k = body.find(key + "=");
        if (k == std::string::npos) return "";
        std::size_t v = k + key.size() + 1;
        std::size_t stop = body.find_first_of(" ]", v);
        return body.substr(v, (stop == std::string::npos ? body.size() : stop) - v);
    };
    p.gender = field("gender");
    p.age = field("age");
    p.education = field("education");
    p.present = !p.age.empty() || !p.education.empty() || !p.gender.empty();
    return p;
}

std::vector<std::string> news_content_words(const std::string& prompt, std::size_t max_words) {
    std::size_t b = prompt.find(prompt_markers::kNewsBegin);
    std::size_t e = prompt.find(prompt_markers::kNewsEnd);
    std::string news;
    if (b != std::string::npos && e != std::string::npos && e > b)
        news = prompt.substr(b + std::string(prompt_markers::kNewsBegin).size(),
                             e - b - std::string(prompt_markers::kNewsBegin).size());
    else
        news = prompt;  // degenerate prompt: fall back to the whole text
    std::vector<std::string> words;
    for (const std::string& t : word_tokens(news)) {
        if (t.size() < 3 || is_english_stopword(t)) continue;
        if (std::find(words.begin(), words.end(), t) == words.end()) words.push_back(t);
        if (words.size() >= max_words) break;
    }
    return words;
}

std::string age_phrase(const std::string& age) {
    if (age == "youth_18_35") return "As a younger reader,";
    if (age == "middle_36_65") return "As a middle-aged reader,";
    if (age == "elderly_65_plus") return "As an older reader,";
    return "As a reader,";
}

std::string education_phrase(const std::string& education) {
    if (education == "below_bachelors") return "I'm no specialist, but";
    if (education == "bachelors") return "from what I studied,";
    if (education == "postgraduate") return "given my research background,";
    return "honestly,";
}

const std::vector<std::string>& mock_emotions() {
    static const std::vector<std::string> e = {
        "anxious", "worried", "angry", "upset", "scared", "shocked", "sad", "uneasy",
    };
    return e;
}

}  // namespace

std::string mock_completion(std::uint64_t seed, const std::string& prompt) {
    Rng rng(mix_seed(seed, "mock-llm") ^ fnv1a64(prompt));
    PersonaAttrs persona = parse_persona(prompt);
    std::vector<std::string> words = news_content_words(prompt, 8);
    auto word = [&](std::size_t fallback_idx) -> std::string {
        static const char* fallbacks[] = {"this story", "the report", "the post"};
        if (words.empty()) return fallbacks[fallback_idx % 3];
        return words[rng.index(words.size())];
    };
    const std::string w1 = word(0);
    const std::string w2 = word(1);
    const std::string w3 = word(2);
    const std::string emo = mock_emotions()[rng.index(mock_emotions().size())];
    const std::string age = age_phrase(persona.age);
    const std::string edu = education_phrase(persona.education);

    switch (rng.index(6)) {
        case 0:
            return age + " I doubt the claim about " + w1 + " and " + w2 +
                   "; it makes me " + emo + " and I want to verify the source first.";
        case 1:
            return "Reading about " + w1 + " and " + w2 + " leaves me " + emo +
                   " - is there any real evidence for " + w3 + "?";
        case 2:
            return edu + " the story about " + w1 + " seems exaggerated; I feel " + emo +
                   " and would check the source on " + w2 + " before sharing.";
        case 3:
            return "I am " + emo + " about " + w1 + "; a claim like " + w2 +
                   " needs evidence from a credible source.";
        case 4:
            return age + " " + edu + " I question whether " + w1 + " and " + w2 +
                   " are accurate, and honestly it leaves me " + emo + ".";
        default:
            return "This piece on " + w1 + " worries me; can anyone verify " + w2 +
                   " and " + w3 + " with a reliable source?";
    }
}

std::shared_ptr<Clock> system_clock() { return std::make_shared<SystemClock>(); }

LlmGateway::LlmGateway(GatewayConfig config, std::shared_ptr<HttpTransport> transport,
                       std::shared_ptr<Clock> clock)
    : config_(std::move(config)), transport_(std::move(transport)), clock_(std::move(clock)) {
    config_.validate();
    if (!clock_) clock_ = system_clock();
}

LlmExchange LlmGateway::complete(const std::string& prompt) {
    if (trim(prompt).empty()) throw ConfigError("prompt must be non-empty");
    if (config_.mode == GatewayMode::Mock) {
        LlmExchange ex;
        ex.prompt = prompt;
        ex.response = mock_completion(config_.seed, prompt);
        ex.latency_seconds = 0.0;
        ex.attempt_count = 1;
        ex.mode = GatewayMode::Mock;
        append_audit(ex);
        return ex;
    }
    LlmExchange ex = complete_live(prompt);
    append_audit(ex);
    return ex;
}

LlmExchange LlmGateway::complete_live(const std::string& prompt) {
    const char* key = std::getenv(config_.api_key_env.c_str());
    if (!key || std::string(key).empty())
        throw AuthError("no API key in $" + config_.api_key_env);
    if (!transport_) transport_ = std::make_shared<HttplibTransport>();

    json body;
    body["model"] = config_.model_name;
    body["messages"] = json::array({json{{"role", "user"}, {"content", prompt}}});
    const std::string body_str = body.dump();

    Rng jitter_rng(fnv1a64(prompt) ^ 0x5bd1e995u);
    const double t0 = clock_->now_seconds();
    int attempts = 0;
    std::string last_problem;
    bool saw_rate_limit = false;
    while (attempts <= config_.max_retries) {
        wait_for_rate_slot();
        ++attempts;
        try {
            HttpResponse res =
                transport_->post(config_.base_url, "/v1/chat/completions", body_str, key);
            if (res.status == 200) {
                json parsed = json::parse(res.body, nullptr, false);
                if (parsed.is_discarded() || !parsed.contains("choices") ||
                    parsed["choices"].empty())
                    throw ProviderError("malformed provider response");
                std::string text =
                    parsed["choices"][0]["message"]["content"].get<std::string>();
                LlmExchange ex;
                ex.prompt = prompt;
                ex.response = std::move(text);
                ex.latency_seconds = clock_->now_seconds() - t0;
                ex.attempt_count = attempts;
                ex.mode = GatewayMode::Live;
                return ex;
            }
            if (res.status == 401 || res.status == 403)
                throw AuthError("provider rejected key (status " + std::to_string(res.status) + ")");
            if (res.status == 429) {
                saw_rate_limit = true;
                last_problem = "status 429";
            } else if (res.status >= 500) {
                last_problem = "status " + std::to_string(res.status);
            } else {
                throw ProviderError("non-retryable status " + std::to_string(res.status));
            }
        } catch (const IoError& e) {
            last_problem = e.what();
        }
        if (attempts <= config_.max_retries) {
            double backoff = config_.backoff_base_seconds * std::pow(2.0, attempts - 1);
            backoff *= 1.0 + 0.25 * jitter_rng.next_double();
            clock_->sleep_for(backoff);
        }
    }
    if (saw_rate_limit)
        throw RateLimited("gave up after " + std::to_string(attempts) + " attempts (" +
                          last_problem + ")");
    throw ProviderError("gave up after " + std::to_string(attempts) + " attempts (" +
                        last_problem + ")");
}

void LlmGateway::wait_for_rate_slot() {
    std::unique_lock<std::mutex> lock(limiter_mutex_);
    for (;;) {
        const double now = clock_->now_seconds();
        while (!request_times_.empty() && now - request_times_.front() >= 60.0)
            request_times_.pop_front();
        if (static_cast<int>(request_times_.size()) < config_.rate_limit_per_minute) {
            request_times_.push_back(now);
            return;
        }
        const double wait = 60.0 - (now - request_times_.front());
        lock.unlock();
        clock_->sleep_for(std::max(wait, 1e-3));
        lock.lock();
    }
}

std::string LlmGateway::translate(const std::string& text, const std::string& target_tag) {
    if (trim(text).empty()) throw ConfigError("text to translate must be non-empty");
    if (config_.mode == GatewayMode::Mock) return "[" + target_tag + "] " + text;
    LlmExchange ex = complete("Translate the following text to " + target_tag +
                              ". Reply with the translation only.\n\n" + text);
    return ex.response;
}

void LlmGateway::append_audit(const LlmExchange& exchange) const {
    if (config_.audit_log_path.empty()) return;
    json j;
    j["timestamp"] = static_cast<std::int64_t>(std::time(nullptr));
    j["mode"] = exchange.mode == GatewayMode::Mock ? "mock" : "live";
    j["prompt_hash"] = to_hex(fnv1a64(exchange.prompt));
    j["response_hash"] = to_hex(fnv1a64(exchange.response));
    j["attempts"] = exchange.attempt_count;
    std::ofstream f(config_.audit_log_path, std::ios::app);
    if (f) f << j.dump() << '\n';
}

}  // namespace dae
