#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <vector>

#include "aigc/corpus.hpp"

namespace aigc::attacks {

// Sentence positions for the mixing attack: Fk = k-th sentence from the
// front, Lk = k-th from the back, F12/L12 = the two front/back sentences.
enum class MixPosition { F1, F2, F3, L1, L2, L3, F12, L12 };

struct MixingSpec {
    std::set<MixPosition> positions;
};

MixPosition mix_position_from_string(const std::string& s);
MixingSpec mixing_spec_from_string(const std::string& csv);

// Replaces the selected sentences of gpt_text with the same-position
// sentences of human_text; everything else is untouched.
std::string mixing_attack(const std::string& gpt_text, const std::string& human_text,
                          const MixingSpec& spec);

struct ScoredToken {
    std::string token;
    double score = 0.0;
};

struct VocabReport {
    std::vector<ScoredToken> unigrams_a_over_b;
    std::vector<ScoredToken> bigrams_a_over_b;
    std::vector<ScoredToken> unigrams_b_over_a;
    std::vector<ScoredToken> bigrams_b_over_a;
};

// Relative-frequency discrepancy between two corpora; score(t) =
// relfreq_a(t) - relfreq_b(t), reported top-n in both directions.
VocabReport vocab_discrepancy(const std::vector<std::string>& corpus_a,
                              const std::vector<std::string>& corpus_b, std::size_t top_n);

struct RulePair {
    std::string pattern;      // word or phrase, lowercase in rule files
    std::string replacement;  // may be empty (deletion); '|' separates alternatives
    bool plural = false;
    bool verb = false;
};

struct ReplacementRule {
    std::string pattern;      // concrete variant, matched case-sensitively
    std::string replacement;  // cased to match the variant
};

// Rule file: UTF-8 lines "pattern<TAB>replacement[<TAB>flags]",
// flags in {plural, verb}; '#' lines are comments.
std::vector<RulePair> load_rule_file(const std::string& path);

// Expands case variants (lowercase, Capitalized, UPPER) and flagged
// -s/-ed/-ing inflections, ordered longest-pattern-first.
std::vector<ReplacementRule> compile_rules(const std::vector<RulePair>& pairs);

// Single left-to-right pass per rule in compiled order, word-boundary
// matches only; doubled spaces from deletions are collapsed.
std::string copyedit(const std::string& text, const std::vector<ReplacementRule>& rules);

// True when `pattern` occurs in `text` on word boundaries (case-sensitive).
bool contains_pattern(const std::string& text, const std::string& pattern);

// Rephrasing-attack prompts (round 1 embeds the text, round 2 asks for a
// second rewrite of the previous answer).
std::string build_rephrase_prompt(const std::string& text, int round);

// "Also, please avoid using the following words and phrases: ..." suffix for
// the prompt-engineering attack.
std::string build_avoidance_suffix(const std::vector<std::string>& vocabulary);

}  // namespace aigc::attacks
