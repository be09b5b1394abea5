#include "aigc/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

#include "aigc/errors.hpp"
#include "aigc/rng.hpp"

namespace aigc::corpus {

using nlohmann::json;

std::string to_string(Label label) {
    switch (label) {
        case Label::HUM: return "HUM";
        case Label::GPT_WRI: return "GPT-WRI";
        case Label::GPT_CPL: return "GPT-CPL";
        case Label::GPT_POL: return "GPT-POL";
    }
    return "HUM";
}

std::string to_string(Task task) {
    switch (task) {
        case Task::WRI: return "WRI";
        case Task::CPL: return "CPL";
        case Task::POL: return "POL";
        case Task::NONE: return "NONE";
    }
    return "NONE";
}

Label label_from_string(const std::string& s) {
    if (s == "HUM") return Label::HUM;
    if (s == "GPT-WRI") return Label::GPT_WRI;
    if (s == "GPT-CPL") return Label::GPT_CPL;
    if (s == "GPT-POL") return Label::GPT_POL;
    throw ValidationError("unknown label: " + s);
}

Task task_from_string(const std::string& s) {
    if (s == "WRI") return Task::WRI;
    if (s == "CPL") return Task::CPL;
    if (s == "POL") return Task::POL;
    if (s == "NONE" || s.empty()) return Task::NONE;
    throw ValidationError("unknown task: " + s);
}

Task task_for_label(Label label) {
    switch (label) {
        case Label::GPT_WRI: return Task::WRI;
        case Label::GPT_CPL: return Task::CPL;
        case Label::GPT_POL: return Task::POL;
        case Label::HUM: return Task::NONE;
    }
    return Task::NONE;
}

std::string normalize_whitespace(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    bool in_space = true;  // drop leading whitespace
    for (char c : text) {
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (!in_space) out.push_back(' ');
            in_space = true;
        } else {
            out.push_back(c);
            in_space = false;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

std::size_t word_count(const std::string& text) {
    std::size_t count = 0;
    bool in_word = false;
    for (char c : text) {
        bool space = std::isspace(static_cast<unsigned char>(c)) != 0;
        if (!space && !in_word) ++count;
        in_word = !space;
    }
    return count;
}

namespace {

TextSample sample_from_json(const json& record, std::size_t line_number) {
    TextSample sample;
    if (!record.contains("id") || !record["id"].is_string())
        throw ParseError("missing or non-string \"id\"", line_number);
    if (!record.contains("text") || !record["text"].is_string())
        throw ParseError("missing or non-string \"text\"", line_number);
    if (!record.contains("label") || !record["label"].is_string())
        throw ParseError("missing or non-string \"label\"", line_number);
    sample.id = record["id"].get<std::string>();
    sample.text = record["text"].get<std::string>();
    if (normalize_whitespace(sample.text).empty())
        throw ParseError("\"text\" is empty after trimming", line_number);
    try {
        sample.label = label_from_string(record["label"].get<std::string>());
    } catch (const ValidationError& e) {
        throw ParseError(e.what(), line_number);
    }
    if (record.contains("task"))
        sample.task = task_from_string(record["task"].get<std::string>());
    else
        sample.task = task_for_label(sample.label);
    if (sample.label != Label::HUM && sample.task != task_for_label(sample.label))
        throw ParseError("task does not match label " + to_string(sample.label), line_number);
    if (record.contains("discipline")) sample.discipline = record["discipline"].get<std::string>();
    if (record.contains("prompt_id")) sample.prompt_id = record["prompt_id"].get<int>();
    for (const auto& [key, value] : record.items()) {
        if (key == "id" || key == "text" || key == "label" || key == "task" ||
            key == "discipline" || key == "prompt_id")
            continue;
        sample.extra[key] = value.is_string() ? value.get<std::string>() : value.dump();
    }
    return sample;
}

}  // namespace

LabeledCorpus parse_jsonl(const std::string& content) {
    LabeledCorpus corpus;
    std::set<std::string> seen_ids;
    std::istringstream stream(content);
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(stream, line)) {
        ++line_number;
        if (normalize_whitespace(line).empty()) continue;
        json record;
        try {
            record = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(std::string("invalid JSON: ") + e.what(), line_number);
        }
        TextSample sample = sample_from_json(record, line_number);
        if (!seen_ids.insert(sample.id).second)
            throw ValidationError("duplicate sample id \"" + sample.id + "\" at line " +
                                  std::to_string(line_number));
        corpus.samples.push_back(std::move(sample));
    }
    return corpus;
}

LabeledCorpus load_corpus(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw ConfigError("cannot open corpus file: " + path);
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_jsonl(buffer.str());
}

void save_corpus(const LabeledCorpus& corpus, const std::string& path) {
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot write corpus file: " + path);
    for (const auto& sample : corpus.samples) {
        json record{{"id", sample.id}, {"text", sample.text}, {"label", to_string(sample.label)}};
        if (sample.task != Task::NONE) record["task"] = to_string(sample.task);
        if (!sample.discipline.empty()) record["discipline"] = sample.discipline;
        if (sample.prompt_id) record["prompt_id"] = *sample.prompt_id;
        for (const auto& [key, value] : sample.extra) record[key] = value;
        file << record.dump() << '\n';
    }
}

std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, const SplitSpec& spec) {
    if (corpus.empty()) throw ValidationError("cannot split an empty corpus");
    if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0))
        throw ConfigError("train_fraction must lie in (0,1)");

    const std::size_t n = corpus.size();
    const std::size_t train_total =
        static_cast<std::size_t>(std::llround(spec.train_fraction * static_cast<double>(n)));

    // Group indices by label, shuffle each group with the seeded generator,
    // then take the per-group train quota. Largest-remainder rounding keeps
    // the overall train size at round(fraction * N).
    std::map<Label, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < n; ++i) groups[corpus.samples[i].label].push_back(i);

    struct Quota {
        Label label;
        std::size_t base;
        double remainder;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [label, indices] : groups) {
        double exact = spec.train_fraction * static_cast<double>(indices.size());
        auto base = static_cast<std::size_t>(exact);
        quotas.push_back({label, base, exact - static_cast<double>(base)});
        assigned += base;
    }
    std::sort(quotas.begin(), quotas.end(), [](const Quota& a, const Quota& b) {
        if (a.remainder != b.remainder) return a.remainder > b.remainder;
        return a.label < b.label;
    });
    for (auto& quota : quotas) {
        if (assigned >= train_total) break;
        std::size_t capacity = groups[quota.label].size() - quota.base;
        if (capacity == 0) continue;
        ++quota.base;
        ++assigned;
    }

    std::vector<bool> in_train(n, false);
    Rng rng(spec.seed);
    for (auto& [label, indices] : groups) {
        // Fisher-Yates with the shared deterministic generator.
        for (std::size_t i = indices.size(); i > 1; --i) {
            std::size_t j = rng.next_below(i);
            std::swap(indices[i - 1], indices[j]);
        }
        std::size_t take = 0;
        for (const auto& quota : quotas)
            if (quota.label == label) take = quota.base;
        for (std::size_t i = 0; i < take; ++i) in_train[indices[i]] = true;
    }

    LabeledCorpus train, test;
    train.metadata = corpus.metadata;
    test.metadata = corpus.metadata;
    for (std::size_t i = 0; i < n; ++i)
        (in_train[i] ? train : test).samples.push_back(corpus.samples[i]);
    return {std::move(train), std::move(test)};
}

const std::vector<std::string>& default_abbreviations() {
    static const std::vector<std::string> abbreviations = {"e.g.", "i.e.", "et al.", "cf.",
                                                           "Fig.", "Eq.",  "vs."};
    return abbreviations;
}

std::vector<std::string> sentence_split(const std::string& text) {
    return sentence_split(text, default_abbreviations());
}

std::vector<std::string> sentence_split(const std::string& text,
                                        const std::vector<std::string>& protected_abbreviations) {
    const std::string normalized = normalize_whitespace(text);
    std::vector<std::string> sentences;
    if (normalized.empty()) return sentences;

    auto ends_with_abbreviation = [&](std::size_t end) {
        for (const auto& abbr : protected_abbreviations) {
            if (end + 1 < abbr.size()) continue;
            std::size_t start = end + 1 - abbr.size();
            if (normalized.compare(start, abbr.size(), abbr) != 0) continue;
            // The abbreviation must start a word (or the string).
            if (start == 0 || normalized[start - 1] == ' ') return true;
        }
        return false;
    };

    std::size_t begin = 0;
    for (std::size_t i = 0; i + 1 < normalized.size(); ++i) {
        char c = normalized[i];
        if (c != '.' && c != '!' && c != '?') continue;
        if (normalized[i + 1] != ' ') continue;
        if (i + 2 >= normalized.size()) continue;
        if (!std::isupper(static_cast<unsigned char>(normalized[i + 2]))) continue;
        if (c == '.' && ends_with_abbreviation(i)) continue;
        sentences.push_back(normalized.substr(begin, i + 1 - begin));
        begin = i + 2;
    }
    sentences.push_back(normalized.substr(begin));
    return sentences;
}

std::pair<std::string, std::size_t> make_completion_input(const std::string& abstract) {
    const auto sentences = sentence_split(abstract);
    if (sentences.size() < 2)
        throw std::domain_error("completion input requires at least 2 sentences");
    std::size_t half = std::max<std::size_t>(1, sentences.size() / 2);
    std::string first_half;
    std::size_t rest_words = 0;
    for (std::size_t i = 0; i < sentences.size(); ++i) {
        if (i < half) {
            if (!first_half.empty()) first_half.push_back(' ');
            first_half += sentences[i];
        } else {
            rest_words += word_count(sentences[i]);
        }
    }
    return {std::move(first_half), rest_words};
}

}  // namespace aigc::corpus
