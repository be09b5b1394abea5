#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "aigc/corpus.hpp"

namespace aigc::promptgen {

struct PromptTemplate {
    corpus::Task task = corpus::Task::WRI;
    int prompt_id = 1;  // 1..4
    std::string text;   // placeholders {input}, {discipline}, {X}
};

// The full Task 1-3 x Prompt 1-4 template table.
const std::vector<PromptTemplate>& templates();
const PromptTemplate& get_template(corpus::Task task, int prompt_id);

// Fills the template; CPL templates require the word-count x.
std::string build_prompt(const PromptTemplate& tmpl, const std::string& input,
                         const std::string& discipline, std::optional<std::size_t> x = {});

struct ChatRequest {
    std::string model = "gpt-3.5-turbo";
    std::string prompt;
    double temperature = 1.0;
    int max_tokens = 1024;
};

struct ChatResponse {
    std::string text;
    std::size_t prompt_tokens = 0;
    std::size_t completion_tokens = 0;
    bool cached = false;
};

class Transport {
public:
    virtual ~Transport() = default;
    virtual std::string name() const = 0;
    virtual ChatResponse complete(const ChatRequest& request) = 0;
};

// Deterministic offline transport: response text is a pure function of the
// prompt. All tests run against this.
class MockEchoTransport final : public Transport {
public:
    std::string name() const override { return "mock-echo"; }
    ChatResponse complete(const ChatRequest& request) override;
    std::size_t calls() const { return calls_; }

private:
    std::size_t calls_ = 0;
};

// OpenAI-style chat-completions endpoint; requires AIGC_API_KEY. The
// credential check happens before any network activity.
std::unique_ptr<Transport> make_live_transport(const std::string& base_url);

// Shared token bucket limiting live request throughput.
class RateLimiter {
public:
    explicit RateLimiter(std::size_t max_per_minute) : max_per_minute_(max_per_minute) {}
    void acquire();

private:
    std::size_t max_per_minute_;
    std::vector<double> recent_;  // monotonic seconds of recent requests
};

// On-disk cache in front of the transport: key = hash(model, prompt,
// temperature, max_tokens); hits short-circuit the transport; entries are
// persisted atomically. Retries transport failures 3 times with exponential
// backoff.
ChatResponse send(const ChatRequest& request, Transport& transport, const std::string& cache_dir,
                  RateLimiter* limiter = nullptr);

std::string cache_key(const ChatRequest& request);

}  // namespace aigc::promptgen
