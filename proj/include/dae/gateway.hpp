#ifndef DAE_GATEWAY_HPP
#define DAE_GATEWAY_HPP

#include <cstdint>
#include <deque>
#include <memory>
#include <mutex>
#include <string>

#include "dae/common.hpp"

namespace dae {

// ---------------------------------------------------------------------------
// Uniform LLM client. LIVE talks to an OpenAI-style chat endpoint with retry,
// backoff and a per-minute rate limit; MOCK is a pure function of
// (seed, prompt) so every downstream stage can be tested offline.
// ---------------------------------------------------------------------------

enum class GatewayMode { Live, Mock };

struct GatewayConfig {
    GatewayMode mode = GatewayMode::Mock;
    std::string model_name = "gpt-4o";
    int max_retries = 3;
    double backoff_base_seconds = 0.5;
    int rate_limit_per_minute = 60;
    std::uint64_t seed = 0;  // MOCK only
    std::string api_key_env = "DAE_API_KEY";
    std::string base_url = "https://api.openai.com";
    std::string audit_log_path;  // empty disables the audit log

    void validate() const;
};

struct LlmExchange {
    std::string prompt;
    std::string response;
    double latency_seconds = 0.0;
    int attempt_count = 0;
    GatewayMode mode = GatewayMode::Mock;
};

struct HttpResponse {
    int status = 0;
    std::string body;
};

// Injectable so tests can record traffic or simulate failures. Implementations
// throw IoError for transport-level failures (treated as retryable).
class HttpTransport {
public:
    virtual ~HttpTransport() = default;
    virtual HttpResponse post(const std::string& base_url, const std::string& path,
                              const std::string& json_body, const std::string& api_key) = 0;
};

class Clock {
public:
    virtual ~Clock() = default;
    virtual double now_seconds() = 0;  // monotonic
    virtual void sleep_for(double seconds) = 0;
};

std::shared_ptr<Clock> system_clock();

// Markers the mock understands inside prompts. commentgen writes them; keeping
// the definitions here means the mock and the prompt builder cannot drift.
namespace prompt_markers {
inline constexpr const char* kPersonaPrefix = "[persona ";
inline constexpr const char* kNewsBegin = "<news>";
inline constexpr const char* kNewsEnd = "</news>";
}  // namespace prompt_markers

class LlmGateway {
public:
    explicit LlmGateway(GatewayConfig config,
                        std::shared_ptr<HttpTransport> transport = nullptr,
                        std::shared_ptr<Clock> clock = nullptr);

    // MOCK: deterministic template-bank text derived from (seed, hash(prompt)).
    // LIVE: provider call with retry/backoff; throws AuthError, RateLimited,
    // ProviderError.
    LlmExchange complete(const std::string& prompt);

    // MOCK returns "[<target>] <text>"; LIVE sends a translation prompt.
    std::string translate(const std::string& text, const std::string& target_tag);

    const GatewayConfig& config() const { return config_; }

    // Safe for concurrent callers; the rate limiter is the only shared state.

private:
    LlmExchange complete_live(const std::string& prompt);
    void wait_for_rate_slot();
    void append_audit(const LlmExchange& exchange) const;

    GatewayConfig config_;
    std::shared_ptr<HttpTransport> transport_;  // created lazily in LIVE mode
    std::shared_ptr<Clock> clock_;
    std::mutex limiter_mutex_;
    std::deque<double> request_times_;
};

// Deterministic mock completion, exposed for tests.
std::string mock_completion(std::uint64_t seed, const std::string& prompt);

}  // namespace dae

#endif
