#include "aigc/attacks.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>

#include "aigc/errors.hpp"

namespace aigc::attacks {

MixPosition mix_position_from_string(const std::string& s) {
    if (s == "F1") return MixPosition::F1;
    if (s == "F2") return MixPosition::F2;
    if (s == "F3") return MixPosition::F3;
    if (s == "L1") return MixPosition::L1;
    if (s == "L2") return MixPosition::L2;
    if (s == "L3") return MixPosition::L3;
    if (s == "F12") return MixPosition::F12;
    if (s == "L12") return MixPosition::L12;
    throw ValidationError("unknown mixing position: " + s);
}

MixingSpec mixing_spec_from_string(const std::string& csv) {
    MixingSpec spec;
    std::istringstream stream(csv);
    std::string item;
    while (std::getline(stream, item, ','))
        if (!item.empty()) spec.positions.insert(mix_position_from_string(item));
    if (spec.positions.empty()) throw ValidationError("mixing spec is empty");
    return spec;
}

namespace {

// Front offsets (0-based) and back offsets (1 = last) named by a position.
void expand_position(MixPosition p, std::vector<std::size_t>& front, std::vector<std::size_t>& back) {
    switch (p) {
        case MixPosition::F1: front.push_back(0); break;
        case MixPosition::F2: front.push_back(1); break;
        case MixPosition::F3: front.push_back(2); break;
        case MixPosition::L1: back.push_back(1); break;
        case MixPosition::L2: back.push_back(2); break;
        case MixPosition::L3: back.push_back(3); break;
        case MixPosition::F12: front.push_back(0); front.push_back(1); break;
        case MixPosition::L12: back.push_back(1); back.push_back(2); break;
    }
}

std::string join_sentences(const std::vector<std::string>& sentences) {
    std::string out;
    for (const auto& s : sentences) {
        if (!out.empty()) out.push_back(' ');
        out += s;
    }
    return out;
}

}  // namespace

std::string mixing_attack(const std::string& gpt_text, const std::string& human_text,
                          const MixingSpec& spec) {
    if (spec.positions.empty()) throw ValidationError("mixing spec is empty");
    auto gpt = corpus::sentence_split(gpt_text);
    const auto hum = corpus::sentence_split(human_text);
    std::vector<std::size_t> front, back;
    for (auto p : spec.positions) expand_position(p, front, back);
    for (auto offset : front) {
        if (offset >= gpt.size() || offset >= hum.size())
            throw std::domain_error("mixing position exceeds sentence count");
        gpt[offset] = hum[offset];
    }
    for (auto offset : back) {
        if (offset > gpt.size() || offset > hum.size())
            throw std::domain_error("mixing position exceeds sentence count");
        gpt[gpt.size() - offset] = hum[hum.size() - offset];
    }
    return join_sentences(gpt);
}

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::vector<std::string> clean_tokens(const std::string& text) {
    std::vector<std::string> tokens;
    std::istringstream stream(text);
    std::string raw;
    while (stream >> raw) {
        std::string token;
        for (char c : raw)
            if (std::isalnum(static_cast<unsigned char>(c)))
                token.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
        if (!token.empty()) tokens.push_back(token);
    }
    return tokens;
}

std::vector<ScoredToken> top_scores(const std::map<std::string, double>& rf_a,
                                    const std::map<std::string, double>& rf_b, std::size_t top_n) {
    std::vector<ScoredToken> scored;
    for (const auto& [token, freq] : rf_a) {
        auto it = rf_b.find(token);
        const double score = freq - (it == rf_b.end() ? 0.0 : it->second);
        if (score > 0.0) scored.push_back({token, score});
    }
    std::sort(scored.begin(), scored.end(), [](const ScoredToken& a, const ScoredToken& b) {
        if (a.score != b.score) return a.score > b.score;
        return a.token < b.token;
    });
    if (scored.size() > top_n) scored.resize(top_n);
    return scored;
}

void relative_frequencies(const std::vector<std::string>& corpus,
                          std::map<std::string, double>& unigrams,
                          std::map<std::string, double>& bigrams) {
    std::size_t n_uni = 0, n_bi = 0;
    for (const auto& text : corpus) {
        const auto tokens = clean_tokens(text);
        for (const auto& token : tokens) {
            unigrams[token] += 1.0;
            ++n_uni;
        }
        for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
            bigrams[tokens[i] + " " + tokens[i + 1]] += 1.0;
            ++n_bi;
        }
    }
    for (auto& [_, count] : unigrams) count /= static_cast<double>(std::max<std::size_t>(1, n_uni));
    for (auto& [_, count] : bigrams) count /= static_cast<double>(std::max<std::size_t>(1, n_bi));
}

}  // namespace

VocabReport vocab_discrepancy(const std::vector<std::string>& corpus_a,
                              const std::vector<std::string>& corpus_b, std::size_t top_n) {
    if (corpus_a.empty() || corpus_b.empty())
        throw ValidationError("vocab_discrepancy requires two non-empty corpora");
    std::map<std::string, double> uni_a, bi_a, uni_b, bi_b;
    relative_frequencies(corpus_a, uni_a, bi_a);
    relative_frequencies(corpus_b, uni_b, bi_b);
    VocabReport report;
    report.unigrams_a_over_b = top_scores(uni_a, uni_b, top_n);
    report.bigrams_a_over_b = top_scores(bi_a, bi_b, top_n);
    report.unigrams_b_over_a = top_scores(uni_b, uni_a, top_n);
    report.bigrams_b_over_a = top_scores(bi_b, bi_a, top_n);
    return report;
}

std::vector<RulePair> load_rule_file(const std::string& path) {
    std::ifstream file(path);
    if (!file) throw ConfigError("cannot open rule file: " + path);
    std::vector<RulePair> pairs;
    std::string line;
    std::size_t line_number = 0;
    while (std::getline(file, line)) {
        ++line_number;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream stream(line);
        std::string field;
        while (std::getline(stream, field, '\t')) fields.push_back(field);
        if (fields.empty() || fields[0].empty())
            throw ValidationError("rule with empty pattern at line " + std::to_string(line_number));
        RulePair pair;
        pair.pattern = fields[0];
        if (fields.size() > 1) pair.replacement = fields[1];
        if (fields.size() > 2) {
            std::istringstream flags(fields[2]);
            std::string flag;
            while (flags >> flag) {
                if (flag == "plural") pair.plural = true;
                else if (flag == "verb") pair.verb = true;
                else throw ValidationError("unknown rule flag \"" + flag + "\" at line " +
                                           std::to_string(line_number));
            }
        }
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(' ');
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(' ');
    return s.substr(b, e - b + 1);
}

std::string first_alternative(const std::string& replacement) {
    auto pos = replacement.find('|');
    return pos == std::string::npos ? replacement : replacement.substr(0, pos);
}

bool is_consonant_y(const std::string& w) {
    if (w.size() < 2 || w.back() != 'y') return false;
    char prev = w[w.size() - 2];
    return std::string("aeiou").find(prev) == std::string::npos;
}

std::string inflect_word(const std::string& word, const std::string& form) {
    // Irregulars that actually occur in the shipped rule sets.
    static const std::map<std::pair<std::string, std::string>, std::string> irregular = {
        {{"do", "s"}, "does"},   {{"do", "ed"}, "did"},   {{"do", "ing"}, "doing"},
        {{"show", "s"}, "shows"}, {{"study", "s"}, "studies"}};
    auto it = irregular.find({word, form});
    if (it != irregular.end()) return it->second;
    if (form == "s") {
        if (is_consonant_y(word)) return word.substr(0, word.size() - 1) + "ies";
        if (word.ends_with("s") || word.ends_with("x") || word.ends_with("z") ||
            word.ends_with("ch") || word.ends_with("sh"))
            return word + "es";
        return word + "s";
    }
    if (form == "ed") {
        if (word.ends_with("e")) return word + "d";
        if (is_consonant_y(word)) return word.substr(0, word.size() - 1) + "ied";
        return word + "ed";
    }
    if (form == "ing") {
        if (word.ends_with("e") && !word.ends_with("ee"))
            return word.substr(0, word.size() - 1) + "ing";
        return word + "ing";
    }
    return word;
}

// Applies an inflection to the first word of a phrase.
std::string inflect_phrase(const std::string& phrase, const std::string& form) {
    if (phrase.empty()) return phrase;
    auto space = phrase.find(' ');
    if (space == std::string::npos) return inflect_word(phrase, form);
    return inflect_word(phrase.substr(0, space), form) + phrase.substr(space);
}

std::string capitalize(const std::string& s) {
    if (s.empty()) return s;
    std::string out = s;
    out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
    return out;
}

std::string upper(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return out;
}

bool boundary_before(const std::string& text, std::size_t pos) {
    return pos == 0 || !std::isalnum(static_cast<unsigned char>(text[pos - 1]));
}

bool boundary_after(const std::string& text, std::size_t end) {
    return end >= text.size() || !std::isalnum(static_cast<unsigned char>(text[end]));
}

std::string collapse_spaces(const std::string& text) {
    std::string out;
    out.reserve(text.size());
    for (char c : text) {
        if (c == ' ' && !out.empty() && out.back() == ' ') continue;
        out.push_back(c);
    }
    // A deletion at the start or before punctuation leaves stray spaces.
    while (!out.empty() && out.front() == ' ') out.erase(out.begin());
    std::string fixed;
    for (std::size_t i = 0; i < out.size(); ++i) {
        if (out[i] == ' ' && i + 1 < out.size() &&
            (out[i + 1] == '.' || out[i + 1] == ',' || out[i + 1] == '!' || out[i + 1] == '?'))
            continue;
        fixed.push_back(out[i]);
    }
    return fixed;
}

}  // namespace

std::vector<ReplacementRule> compile_rules(const std::vector<RulePair>& pairs) {
    std::vector<ReplacementRule> rules;
    for (const auto& pair : pairs) {
        const std::string base_pattern = trim(lower(pair.pattern));
        if (base_pattern.empty()) throw ValidationError("rule with empty pattern");
        const std::string base_repl = trim(first_alternative(pair.replacement));

        std::vector<std::pair<std::string, std::string>> forms = {{base_pattern, base_repl}};
        std::vector<std::string> inflections;
        if (pair.plural) inflections = {"s"};
        if (pair.verb) inflections = {"s", "ed", "ing"};
        for (const auto& form : inflections)
            forms.emplace_back(inflect_phrase(base_pattern, form),
                               base_repl.empty() ? "" : inflect_phrase(base_repl, form));

        for (const auto& [pattern, repl] : forms) {
            // lowercase, Capitalized, UPPER variants; deduplicated.
            std::vector<std::pair<std::string, std::string>> cased = {
                {pattern, repl}, {capitalize(pattern), capitalize(repl)}, {upper(pattern), upper(repl)}};
            for (const auto& [p, r] : cased) {
                bool seen = false;
                for (const auto& existing : rules)
                    if (existing.pattern == p) seen = true;
                if (!seen) rules.push_back({p, r});
            }
        }
    }
    std::stable_sort(rules.begin(), rules.end(),
                     [](const ReplacementRule& a, const ReplacementRule& b) {
                         return a.pattern.size() > b.pattern.size();
                     });
    return rules;
}

bool contains_pattern(const std::string& text, const std::string& pattern) {
    std::size_t pos = 0;
    while ((pos = text.find(pattern, pos)) != std::string::npos) {
        if (boundary_before(text, pos) && boundary_after(text, pos + pattern.size())) return true;
        ++pos;
    }
    return false;
}

std::string copyedit(const std::string& text, const std::vector<ReplacementRule>& rules) {
    std::string result = text;
    for (const auto& rule : rules) {
        std::string next;
        next.reserve(result.size());
        std::size_t pos = 0;
        while (pos < result.size()) {
            std::size_t found = result.find(rule.pattern, pos);
            if (found == std::string::npos) {
                next.append(result, pos, std::string::npos);
                break;
            }
            if (!boundary_before(result, found) ||
                !boundary_after(result, found + rule.pattern.size())) {
                next.append(result, pos, found + 1 - pos);
                pos = found + 1;
                continue;
            }
            next.append(result, pos, found - pos);
            next.append(rule.replacement);
            pos = found + rule.pattern.size();
        }
        result = std::move(next);
    }
    return collapse_spaces(result);
}

std::string build_rephrase_prompt(const std::string& text, int round) {
    if (trim(text).empty()) throw std::domain_error("rephrase prompt requires non-empty text");
    if (round == 1)
        return "Here is a paper abstract generated by ChatGPT. Please rewrite it to make it look "
               "more like a human-written abstract. " +
               text;
    if (round == 2)
        return "Please again rewrite the rewritten abstract given in your previous answer. Please "
               "only include the abstract in your response.";
    throw std::domain_error("rephrase round must be 1 or 2");
}

std::string build_avoidance_suffix(const std::vector<std::string>& vocabulary) {
    if (vocabulary.empty()) throw std::domain_error("avoidance vocabulary is empty");
    std::string suffix = "Also, please avoid using the following words and phrases: ";
    for (std::size_t i = 0; i < vocabulary.size(); ++i) {
        if (i > 0) suffix += ", ";
        suffix += vocabulary[i];
    }
    return suffix;
}

}  // namespace aigc::attacks
