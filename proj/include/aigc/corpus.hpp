#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace aigc::corpus {

enum class Label { HUM, GPT_WRI, GPT_CPL, GPT_POL };
enum class Task { WRI, CPL, POL, NONE };

std::string to_string(Label label);
std::string to_string(Task task);
Label label_from_string(const std::string& s);
Task task_from_string(const std::string& s);

// Task implied by a GPT label; HUM has no task.
Task task_for_label(Label label);

struct TextSample {
    std::string id;
    std::string text;
    Label label = Label::HUM;
    Task task = Task::NONE;
    std::string discipline;
    std::optional<int> prompt_id;
    std::map<std::string, std::string> extra;  // unknown jsonl fields, kept verbatim
};

struct LabeledCorpus {
    std::vector<TextSample> samples;
    std::map<std::string, std::string> metadata;

    std::size_t size() const { return samples.size(); }
    bool empty() const { return samples.empty(); }
};

struct SplitSpec {
    double train_fraction = 0.8;
    std::uint64_t seed = 0;
};

// JSON-lines loader. Required keys: id, text, label. Order preserved,
// duplicate ids rejected.
LabeledCorpus load_corpus(const std::string& path);
LabeledCorpus parse_jsonl(const std::string& content);
void save_corpus(const LabeledCorpus& corpus, const std::string& path);

// Deterministic stratified split; |train| = round(train_fraction * N) with
// per-label proportions preserved within one sample.
std::pair<LabeledCorpus, LabeledCorpus> split(const LabeledCorpus& corpus, const SplitSpec& spec);

// Sentence boundaries at . ! ? followed by whitespace and a capital, with a
// protected-abbreviation list. Joining the result with single spaces equals
// the whitespace-normalized input.
std::vector<std::string> sentence_split(const std::string& text);
std::vector<std::string> sentence_split(const std::string& text,
                                        const std::vector<std::string>& protected_abbreviations);

const std::vector<std::string>& default_abbreviations();

std::size_t word_count(const std::string& text);

// First floor(s/2) sentences (at least 1) plus the word count of the rest.
std::pair<std::string, std::size_t> make_completion_input(const std::string& abstract);

std::string normalize_whitespace(const std::string& text);

}  // namespace aigc::corpus
