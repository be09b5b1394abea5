#include "aigc/promptgen.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "aigc/errors.hpp"
#include "aigc/rng.hpp"
#include "json.hpp"

#ifndef _WIN32
#define CPPHTTPLIB_OPENSSL_SUPPORT_DISABLED
#endif
#include "httplib.h"

namespace aigc::promptgen {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::vector<PromptTemplate> make_templates() {
    using corpus::Task;
    std::vector<PromptTemplate> t;
    t.push_back({Task::WRI, 1,
                 "Here is the title of an academic research paper. Please write a paper abstract "
                 "about it: {input}."});
    t.push_back({Task::CPL, 1,
                 "Here is the first half of the abstract of an academic research paper. Please "
                 "complete its second half with approximate {X} words: {input}."});
    t.push_back({Task::POL, 1,
                 "Here is the abstract of an academic research paper. Please rewrite it for "
                 "clarity: {input}."});
    t.push_back({Task::WRI, 2,
                 "Write an abstract of a research paper in {discipline} with first-person, clear, "
                 "and academic language about \"{input}\"."});
    t.push_back({Task::CPL, 2,
                 "Write a well-written and coherent continuation, with approximately {X} words, of "
                 "the following first half of the abstract of a research paper in {discipline}: "
                 "\"{input}\""});
    t.push_back({Task::POL, 2,
                 "Write a polished and refined version of the following abstract of a research "
                 "paper in {discipline} to improve its overall quality and readability: "
                 "\"{input}\""});
    t.push_back({Task::WRI, 3,
                 "I want you to act as an academic paper writer. You are familiar with the topics "
                 "in {discipline}. You will be responsible for writing a paper abstract. Your task "
                 "is to generate an abstract for a paper with a given title. Please only include "
                 "the written abstract in your answer. Here is the title of the paper: "
                 "\"{input}\""});
    t.push_back({Task::CPL, 3,
                 "I want you to act as an academic paper writer. You are familiar with the topics "
                 "in {discipline}. You will be responsible for completing an unfinished paper "
                 "abstract. Your task is to create a seamless and well-written continuation with "
                 "approximately {X} words for the second half, given the provided first half of "
                 "the abstract. Please only include the second half in your answer. Here is the "
                 "first half of the abstract: \"{input}\""});
    t.push_back({Task::POL, 3,
                 "I want you to act as an academic paper writer. You are familiar with the topics "
                 "in {discipline}. You will be responsible for rewriting a paper abstract. Your "
                 "task is to improve the writing and clarity of the abstract. Please only include "
                 "the rewritten abstract in your answer. Here is the original abstract of the "
                 "paper: \"{input}\""});
    t.push_back({Task::WRI, 4,
                 "Please act as an expert paper writer and write the abstract section of a paper "
                 "from the perspective of a paper reviewer to make it fluent and elegant. Please "
                 "only include the written abstract in your answer. Here are the specific "
                 "requirements: 1. Enable readers to grasp the main points or essence of the "
                 "paper quickly. 2. Allow readers to understand the important information, "
                 "analysis, and arguments throughout the entire paper. 3. Help readers remember "
                 "the key points of the paper. 4. Please clearly state the innovative aspects of "
                 "your research in the abstract, emphasizing your contributions. 5. Use concise "
                 "and clear language to describe your findings and results, making it easier for "
                 "reviewers to understand the paper. Here is the title of the paper: \"{input}\""});
    t.push_back({Task::CPL, 4,
                 "Please act as an expert paper writer and complete the second half of the given "
                 "first half of an abstract section from the perspective of a paper reviewer to "
                 "make it fluent and elegant. Please only include the second half of the abstract "
                 "in your answer. Here are the specific requirements: 1. The length of the second "
                 "half should be about {X} words. 2. The existing content should serve as the "
                 "foundation, and the new portion should seamlessly integrate with it. 3. Use "
                 "your expertise and maintain its technical accuracy and clarity. 4. Ensure a "
                 "coherent and logical flow between the first and second halves. 5. Use clear and "
                 "academic language, making it easier for reviewers to understand the paper. Here "
                 "is the first half of the paper abstract section: \"{input}\""});
    t.push_back({Task::POL, 4,
                 "Please act as an expert paper editor and revise the abstract section of the "
                 "paper from the perspective of a paper reviewer to make it more fluent and "
                 "elegant. Please only include the revised abstract in your answer. Here are the "
                 "specific requirements: 1. Enable readers to grasp the main points or essence of "
                 "the paper quickly. 2. Allow readers to understand the important information, "
                 "analysis, and arguments throughout the entire paper. 3. Help readers remember "
                 "the key points of the paper. 4. Please clearly state the innovative aspects of "
                 "your research in the abstract, emphasizing your contributions. 5. Use concise "
                 "and clear language to describe your findings and results, making it easier for "
                 "reviewers to understand the paper. Here is the original abstract section of the "
                 "paper: \"{input}\""});
    return t;
}

void replace_all(std::string& s, const std::string& from, const std::string& to) {
    std::size_t pos = 0;
    while ((pos = s.find(from, pos)) != std::string::npos) {
        s.replace(pos, from.size(), to);
        pos += to.size();
    }
}

double monotonic_seconds() {
    using clock = std::chrono::steady_clock;
    return std::chrono::duration<double>(clock::now().time_since_epoch()).count();
}

class LiveTransport final : public Transport {
public:
    explicit LiveTransport(std::string base_url) : base_url_(std::move(base_url)) {
        const char* key = std::getenv("AIGC_API_KEY");
        if (key == nullptr || *key == '\0') {
            throw ConfigError("AIGC_API_KEY is not set; required for the live transport");
        }
        api_key_ = key;
    }

    std::string name() const override { return "live"; }

    ChatResponse complete(const ChatRequest& request) override {
        httplib::Client client(base_url_);
        client.set_read_timeout(120, 0);
        httplib::Headers headers = {{"Authorization", "Bearer " + api_key_}};
        json body = {
            {"model", request.model},
            {"messages", json::array({json{{"role", "user"}, {"content", request.prompt}}})},
            {"temperature", request.temperature},
            {"max_tokens", request.max_tokens},
        };
        auto res = client.Post("/v1/chat/completions", headers, body.dump(), "application/json");
        if (!res) throw std::runtime_error("chat request failed: no response from server");
        if (res->status != 200) {
            throw std::runtime_error("chat request failed with HTTP status " +
                                     std::to_string(res->status));
        }
        json parsed = json::parse(res->body);
        ChatResponse out;
        out.text = parsed.at("choices").at(0).at("message").at("content").get<std::string>();
        if (parsed.contains("usage")) {
            out.prompt_tokens = parsed["usage"].value("prompt_tokens", 0);
            out.completion_tokens = parsed["usage"].value("completion_tokens", 0);
        }
        return out;
    }

private:
    std::string base_url_;
    std::string api_key_;
};

}  // namespace

const std::vector<PromptTemplate>& templates() {
    static const std::vector<PromptTemplate> all = make_templates();
    return all;
}

const PromptTemplate& get_template(corpus::Task task, int prompt_id) {
    for (const auto& t : templates()) {
        if (t.task == task && t.prompt_id == prompt_id) return t;
    }
    throw std::domain_error("no template for the requested task/prompt combination");
}

std::string build_prompt(const PromptTemplate& tmpl, const std::string& input,
                         const std::string& discipline, std::optional<std::size_t> x) {
    if (tmpl.task == corpus::Task::CPL && !x.has_value()) {
        throw std::domain_error("completion prompts require a target word count");
    }
    std::string out = tmpl.text;
    replace_all(out, "{input}", input);
    replace_all(out, "{discipline}", discipline);
    if (x.has_value()) replace_all(out, "{X}", std::to_string(*x));
    return out;
}

ChatResponse MockEchoTransport::complete(const ChatRequest& request) {
    ++calls_;
    ChatResponse out;
    char digest[20];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(request.prompt)));
    out.text = "echo[" + std::string(digest) + "]: " + request.prompt;
    out.prompt_tokens = corpus::word_count(request.prompt);
    out.completion_tokens = out.prompt_tokens + 2;
    return out;
}

std::unique_ptr<Transport> make_live_transport(const std::string& base_url) {
    return std::make_unique<LiveTransport>(base_url);
}

void RateLimiter::acquire() {
    if (max_per_minute_ == 0) return;
    for (;;) {
        double now = monotonic_seconds();
        std::erase_if(recent_, [&](double t) { return now - t >= 60.0; });
        if (recent_.size() < max_per_minute_) {
            recent_.push_back(now);
            return;
        }
        double wait = 60.0 - (now - recent_.front()) + 0.01;
        std::this_thread::sleep_for(std::chrono::duration<double>(wait));
    }
}

std::string cache_key(const ChatRequest& request) {
    std::ostringstream material;
    material << request.model << '\x1f' << request.prompt << '\x1f' << request.temperature << '\x1f'
             << request.max_tokens;
    char digest[20];
    std::snprintf(digest, sizeof(digest), "%016llx",
                  static_cast<unsigned long long>(fnv1a64(material.str())));
    return digest;
}

ChatResponse send(const ChatRequest& request, Transport& transport, const std::string& cache_dir,
                  RateLimiter* limiter) {
    fs::create_directories(cache_dir);
    fs::path entry = fs::path(cache_dir) / (cache_key(request) + ".json");
    if (fs::exists(entry)) {
        std::ifstream in(entry);
        json cached = json::parse(in);
        ChatResponse out;
        out.text = cached.at("response").at("text").get<std::string>();
        out.prompt_tokens = cached["response"].value("prompt_tokens", 0);
        out.completion_tokens = cached["response"].value("completion_tokens", 0);
        out.cached = true;
        return out;
    }

    ChatResponse out;
    int attempts = 0;
    for (;;) {
        try {
            if (limiter != nullptr) limiter->acquire();
            out = transport.complete(request);
            break;
        } catch (const ConfigError&) {
            throw;
        } catch (const std::exception&) {
            if (++attempts >= 3) throw;
            std::this_thread::sleep_for(std::chrono::milliseconds(250 << attempts));
        }
    }

    json record = {
        {"request",
         {{"model", request.model},
          {"prompt", request.prompt},
          {"temperature", request.temperature},
          {"max_tokens", request.max_tokens}}},
        {"response",
         {{"text", out.text},
          {"prompt_tokens", out.prompt_tokens},
          {"completion_tokens", out.completion_tokens}}},
        {"timestamp",
         std::chrono::duration_cast<std::chrono::seconds>(
             std::chrono::system_clock::now().time_since_epoch())
             .count()},
    };
    fs::path tmp = entry;
    tmp += ".tmp";
    {
        std::ofstream outf(tmp, std::ios::trunc);
        outf << record.dump(2) << '\n';
    }
    fs::rename(tmp, entry);
    return out;
}

}  // namespace aigc::promptgen
