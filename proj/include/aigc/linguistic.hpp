#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace aigc::linguistic {

struct ReadabilityRecord {
    double lix = 0.0;
    double smog = 0.0;
    double flesch_kincaid = 0.0;
    double avg_word_length = 0.0;
    double avg_sentence_length = 0.0;
};

struct PosRates {
    double gerund = 0.0;                 // VBG
    double determiner = 0.0;             // DT
    double personal_pronoun = 0.0;       // PRP
    double possessive_pronoun = 0.0;     // PRP$
    double plural_noun = 0.0;            // NNS
    double adjective = 0.0;              // JJ
    double particle = 0.0;               // RP
    double third_singular_present = 0.0; // VBZ
    double non_third_present = 0.0;      // VBP
};

// Pluggable part-of-speech tagger; returns a Penn-style tag for one
// lowercased word, or nothing when the word is untagged.
class PosTagger {
public:
    virtual ~PosTagger() = default;
    virtual std::optional<std::string> tag(const std::string& word) const = 0;
};

// Bundled deterministic fallback: closed-class lexicons plus suffix
// heuristics. Good enough for hermetic tests, not for production fidelity.
std::shared_ptr<PosTagger> fallback_tagger();

double count_syllables(const std::string& word);
std::size_t count_letters(const std::string& text);

double coleman_liau(const std::string& text);
ReadabilityRecord readability(const std::string& text);
PosRates pos_counts(const std::string& text, const PosTagger& tagger);

// Feature schema: readability block, coleman_liau, quote rate, POS rates,
// then reserved lexicon-backed slots (zero-filled when no lexicon dir is
// configured).
const std::vector<std::string>& feature_names();

struct FeatureVector {
    std::vector<double> values;  // aligned with feature_names()
};

// Optional lexicon directory: one UTF-8 word list per reserved slot,
// "<slot>.txt", one token per line.
class LexiconSet {
public:
    static LexiconSet load(const std::string& lexicon_dir);
    static LexiconSet empty();
    double rate(const std::string& slot, const std::vector<std::string>& words) const;

private:
    std::map<std::string, std::vector<std::string>> lists_;
};

FeatureVector extract_features(const std::string& text, const PosTagger& tagger,
                               const LexiconSet& lexicons = LexiconSet::empty());

// ---- Gradient-boosted decision trees (from scratch, exact greedy splits) --

struct TreeNode {
    bool is_leaf = true;
    double value = 0.0;       // leaf output (Newton step on logistic loss)
    std::size_t feature = 0;  // split feature
    double threshold = 0.0;   // goes left when x[feature] <= threshold
    double gain = 0.0;        // variance-reduction gain of this split
    std::int32_t left = -1;
    std::int32_t right = -1;
};

struct Tree {
    std::vector<TreeNode> nodes;  // node 0 is the root
    double predict(const std::vector<double>& x) const;
};

struct GBConfig {
    std::size_t n_trees = 100;
    std::size_t depth = 3;
    double learning_rate = 0.1;
    std::uint64_t seed = 0;
};

struct GBModel {
    std::vector<Tree> trees;
    double learning_rate = 0.1;
    double base_score = 0.0;  // log-odds prior
    std::size_t n_features = 0;
};

struct SplitCandidate {
    bool valid = false;
    std::size_t feature = 0;
    double threshold = 0.0;
    double gain = 0.0;
};

// Exact greedy split over all features and midpoint thresholds; ties broken
// by lowest feature index, then lowest threshold. Exposed so tests can pit it
// against exhaustive enumeration.
SplitCandidate best_split(const std::vector<std::vector<double>>& features,
                          const std::vector<double>& residuals,
                          const std::vector<std::size_t>& indices);

GBModel gb_train(const std::vector<std::vector<double>>& features,
                 const std::vector<int>& labels, const GBConfig& config);

std::pair<double, int> gb_predict(const GBModel& model, const std::vector<double>& x);

// Total split gain per feature, sorted descending.
std::vector<std::pair<std::size_t, double>> gb_importance(const GBModel& model);

}  // namespace aigc::linguistic
