#include "aigc/linguistic.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include "aigc/corpus.hpp"
#include "aigc/errors.hpp"

namespace aigc::linguistic {

namespace {

std::string lower(const std::string& s) {
    std::string out = s;
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return out;
}

std::string strip_punct(const std::string& word) {
    std::size_t begin = 0, end = word.size();
    while (begin < end && !std::isalnum(static_cast<unsigned char>(word[begin]))) ++begin;
    while (end > begin && !std::isalnum(static_cast<unsigned char>(word[end - 1]))) --end;
    return word.substr(begin, end - begin);
}

std::vector<std::string> words_of(const std::string& text) {
    std::vector<std::string> words;
    std::istringstream stream(text);
    std::string token;
    while (stream >> token) {
        std::string clean = strip_punct(token);
        if (!clean.empty()) words.push_back(clean);
    }
    return words;
}

bool is_vowel(char c) {
    switch (std::tolower(static_cast<unsigned char>(c))) {
        case 'a': case 'e': case 'i': case 'o': case 'u': case 'y': return true;
        default: return false;
    }
}

class FallbackTagger final : public PosTagger {
public:
    std::optional<std::string> tag(const std::string& raw) const override {
        const std::string word = lower(strip_punct(raw));
        if (word.empty()) return std::nullopt;
        if (kDeterminers.count(word)) return "DT";
        if (kPersonal.count(word)) return "PRP";
        if (kPossessive.count(word)) return "PRP$";
        if (kParticles.count(word)) return "RP";
        if (kAdjectives.count(word)) return "JJ";
        if (kThirdSingular.count(word)) return "VBZ";
        if (kNonThird.count(word)) return "VBP";
        if (word.size() > 4 && word.ends_with("ing") && !kIngNouns.count(word)) return "VBG";
        if (word.size() > 1 && word.ends_with("s") && kBaseVerbs.count(word.substr(0, word.size() - 1)))
            return "VBZ";
        if (kBaseVerbs.count(word)) return "VBP";
        if (word.size() > 3 && word.ends_with("s") && !word.ends_with("ss")) return "NNS";
        return std::nullopt;
    }

private:
    inline static const std::set<std::string> kDeterminers = {
        "the", "a", "an", "this", "that", "these", "those", "each", "every",
        "some", "any", "no", "all", "both", "either", "neither", "another"};
    inline static const std::set<std::string> kPersonal = {
        "i", "you", "he", "she", "it", "we", "they", "me", "him", "us", "them"};
    inline static const std::set<std::string> kPossessive = {
        "my", "your", "his", "her", "its", "our", "their",
        "mine", "yours", "hers", "ours", "theirs"};
    inline static const std::set<std::string> kParticles = {"up", "off", "out", "down",
                                                            "away", "back", "over"};
    inline static const std::set<std::string> kAdjectives = {
        "new",  "novel",   "good",   "large", "small", "high",  "low",   "important",
        "significant", "effective", "robust", "simple", "complex", "accurate",
        "efficient",   "valuable",  "comprehensive", "innovative", "different", "various"};
    inline static const std::set<std::string> kThirdSingular = {"is", "has", "does", "goes"};
    inline static const std::set<std::string> kNonThird = {"are", "have", "do", "am"};
    inline static const std::set<std::string> kBaseVerbs = {
        "run",  "work", "win",  "make", "say",   "show", "present",  "demonstrate",
        "use",  "provide", "propose", "aim", "examine", "explore", "focus",
        "contribute", "address", "investigate", "introduce", "improve", "describe"};
    inline static const std::set<std::string> kIngNouns = {
        "thing", "something", "anything", "nothing", "everything",
        "morning", "evening", "king", "ring", "spring", "string", "wing"};
};

}  // namespace

std::shared_ptr<PosTagger> fallback_tagger() { return std::make_shared<FallbackTagger>(); }

double count_syllables(const std::string& raw) {
    const std::string word = lower(strip_punct(raw));
    if (word.empty()) return 0.0;
    int groups = 0;
    bool in_group = false;
    for (char c : word) {
        if (is_vowel(c)) {
            if (!in_group) ++groups;
            in_group = true;
        } else {
            in_group = false;
        }
    }
    // Silent final e, except words like "table" where -le carries a syllable.
    if (groups > 1 && word.ends_with("e") && !word.ends_with("le")) --groups;
    return std::max(groups, 1);
}

std::size_t count_letters(const std::string& text) {
    return static_cast<std::size_t>(
        std::count_if(text.begin(), text.end(),
                      [](unsigned char c) { return std::isalpha(c) != 0; }));
}

double coleman_liau(const std::string& text) {
    const auto words = words_of(text);
    if (words.empty()) throw std::domain_error("coleman_liau requires at least one word");
    const double w = static_cast<double>(words.size());
    const double letters = static_cast<double>(count_letters(text));
    const double sentences = static_cast<double>(corpus::sentence_split(text).size());
    const double l = letters / w * 100.0;   // letters per 100 words
    const double s = sentences / w * 100.0; // sentences per 100 words
    return 0.0588 * l - 0.296 * s - 15.8;
}

ReadabilityRecord readability(const std::string& text) {
    const auto words = words_of(text);
    const auto sentences = corpus::sentence_split(text);
    if (words.empty() || sentences.empty())
        throw std::domain_error("readability requires at least one sentence");
    const double w = static_cast<double>(words.size());
    const double s = static_cast<double>(sentences.size());

    std::size_t long_words = 0;
    std::size_t polysyllables = 0;
    double syllables = 0.0;
    std::size_t letters = 0;
    for (const auto& word : words) {
        if (count_letters(word) > 6) ++long_words;
        const double syl = count_syllables(word);
        syllables += syl;
        if (syl >= 3.0) ++polysyllables;
        letters += count_letters(word);
    }

    ReadabilityRecord r;
    r.lix = w / s + 100.0 * static_cast<double>(long_words) / w;
    r.smog = 1.0430 * std::sqrt(static_cast<double>(polysyllables) * 30.0 / s) + 3.1291;
    r.flesch_kincaid = 0.39 * (w / s) + 11.8 * (syllables / w) - 15.59;
    r.avg_word_length = static_cast<double>(letters) / w;
    r.avg_sentence_length = w / s;
    return r;
}

PosRates pos_counts(const std::string& text, const PosTagger& tagger) {
    PosRates rates;
    const auto words = words_of(text);
    if (words.empty()) return rates;
    std::map<std::string, std::size_t> counts;
    for (const auto& word : words) {
        auto tag = tagger.tag(word);
        if (tag) ++counts[*tag];
    }
    const double w = static_cast<double>(words.size());
    rates.gerund = counts["VBG"] / w;
    rates.determiner = counts["DT"] / w;
    rates.personal_pronoun = counts["PRP"] / w;
    rates.possessive_pronoun = counts["PRP$"] / w;
    rates.plural_noun = counts["NNS"] / w;
    rates.adjective = counts["JJ"] / w;
    rates.particle = counts["RP"] / w;
    rates.third_singular_present = counts["VBZ"] / w;
    rates.non_third_present = counts["VBP"] / w;
    return rates;
}

namespace {

const std::vector<std::string> kReservedSlots = {"fairness_virtue", "fairness_vice",
                                                 "care_virtue",     "care_vice",
                                                 "bias_words",      "affect_words"};

}  // namespace

const std::vector<std::string>& feature_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n = {"lix",
                                      "smog",
                                      "flesch_kincaid",
                                      "avg_word_length",
                                      "avg_sentence_length",
                                      "coleman_liau",
                                      "quote_count_norm",
                                      "pos_vbg",
                                      "pos_dt",
                                      "pos_prp",
                                      "pos_prp_poss",
                                      "pos_nns",
                                      "pos_jj",
                                      "pos_rp",
                                      "pos_vbz",
                                      "pos_vbp"};
        n.insert(n.end(), kReservedSlots.begin(), kReservedSlots.end());
        return n;
    }();
    return names;
}

LexiconSet LexiconSet::load(const std::string& lexicon_dir) {
    LexiconSet set;
    namespace fs = std::filesystem;
    for (const auto& slot : kReservedSlots) {
        fs::path path = fs::path(lexicon_dir) / (slot + ".txt");
        std::ifstream file(path);
        if (!file) continue;
        std::vector<std::string> wordlist;
        std::string line;
        while (std::getline(file, line)) {
            std::string word = lower(strip_punct(line));
            if (!word.empty()) wordlist.push_back(word);
        }
        set.lists_[slot] = std::move(wordlist);
    }
    return set;
}

LexiconSet LexiconSet::empty() { return LexiconSet{}; }

double LexiconSet::rate(const std::string& slot, const std::vector<std::string>& words) const {
    auto it = lists_.find(slot);
    if (it == lists_.end() || words.empty()) return 0.0;
    const std::set<std::string> vocab(it->second.begin(), it->second.end());
    std::size_t hits = 0;
    for (const auto& word : words)
        if (vocab.count(lower(word))) ++hits;
    return static_cast<double>(hits) / static_cast<double>(words.size());
}

FeatureVector extract_features(const std::string& text, const PosTagger& tagger,
                               const LexiconSet& lexicons) {
    const auto words = words_of(text);
    if (words.empty()) throw std::domain_error("extract_features requires non-empty text");

    const auto r = readability(text);
    const auto pos = pos_counts(text, tagger);

    // Quote pairs per word; apostrophes inside words do not count.
    std::size_t quote_chars = 0;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char c = text[i];
        if (c == '"') ++quote_chars;
        if (c == '\'') {
            const bool prev_alpha = i > 0 && std::isalpha(static_cast<unsigned char>(text[i - 1]));
            const bool next_alpha =
                i + 1 < text.size() && std::isalpha(static_cast<unsigned char>(text[i + 1]));
            if (!(prev_alpha && next_alpha)) ++quote_chars;
        }
    }
    const double quote_rate =
        static_cast<double>(quote_chars / 2) / static_cast<double>(words.size());

    FeatureVector vec;
    vec.values = {r.lix,
                  r.smog,
                  r.flesch_kincaid,
                  r.avg_word_length,
                  r.avg_sentence_length,
                  coleman_liau(text),
                  quote_rate,
                  pos.gerund,
                  pos.determiner,
                  pos.personal_pronoun,
                  pos.possessive_pronoun,
                  pos.plural_noun,
                  pos.adjective,
                  pos.particle,
                  pos.third_singular_present,
                  pos.non_third_present};
    for (const auto& slot : kReservedSlots) vec.values.push_back(lexicons.rate(slot, words));
    return vec;
}

// ---- gradient boosting ----------------------------------------------------

double Tree::predict(const std::vector<double>& x) const {
    std::size_t node = 0;
    while (!nodes[node].is_leaf) {
        node = x[nodes[node].feature] <= nodes[node].threshold
                   ? static_cast<std::size_t>(nodes[node].left)
                   : static_cast<std::size_t>(nodes[node].right);
    }
    return nodes[node].value;
}

SplitCandidate best_split(const std::vector<std::vector<double>>& features,
                          const std::vector<double>& residuals,
                          const std::vector<std::size_t>& indices) {
    SplitCandidate best;
    if (indices.size() < 2) return best;
    const std::size_t n_features = features.front().size();
    double total_sum = 0.0;
    for (auto i : indices) total_sum += residuals[i];
    const double parent_score = total_sum * total_sum / static_cast<double>(indices.size());

    for (std::size_t f = 0; f < n_features; ++f) {
        std::vector<std::size_t> order(indices);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (features[a][f] != features[b][f]) return features[a][f] < features[b][f];
            return a < b;
        });
        double left_sum = 0.0;
        for (std::size_t k = 0; k + 1 < order.size(); ++k) {
            left_sum += residuals[order[k]];
            const double lo = features[order[k]][f];
            const double hi = features[order[k + 1]][f];
            if (lo == hi) continue;
            const double threshold = 0.5 * (lo + hi);
            const double right_sum = total_sum - left_sum;
            const double n_left = static_cast<double>(k + 1);
            const double n_right = static_cast<double>(order.size() - k - 1);
            const double gain =
                left_sum * left_sum / n_left + right_sum * right_sum / n_right - parent_score;
            // Features and thresholds are visited in ascending order, so
            // keeping the first candidate at equal gain realizes the
            // lowest-feature-then-lowest-threshold tie break. Zero-gain
            // splits are kept: symmetric targets (e.g. xor) need them so
            // the children can realize the gain one level down.
            const bool take = !best.valid || gain > best.gain + 1e-12;
            if (take) {
                best.valid = true;
                best.feature = f;
                best.threshold = threshold;
                best.gain = gain;
            }
        }
    }
    return best;
}

namespace {

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct TreeBuilder {
    const std::vector<std::vector<double>>& features;
    const std::vector<double>& residuals;
    const std::vector<double>& hessians;
    std::size_t max_depth;
    Tree tree;

    std::int32_t build(const std::vector<std::size_t>& indices, std::size_t depth) {
        TreeNode node;
        SplitCandidate split;
        double res_lo = residuals[indices.front()], res_hi = res_lo;
        for (auto i : indices) {
            res_lo = std::min(res_lo, residuals[i]);
            res_hi = std::max(res_hi, residuals[i]);
        }
        if (depth < max_depth && res_hi - res_lo > 1e-12)
            split = best_split(features, residuals, indices);
        if (!split.valid) {
            node.is_leaf = true;
            double grad_sum = 0.0, hess_sum = 0.0;
            for (auto i : indices) {
                grad_sum += residuals[i];
                hess_sum += hessians[i];
            }
            // Newton step on the logistic loss.
            node.value = hess_sum > 1e-12 ? grad_sum / hess_sum : 0.0;
            tree.nodes.push_back(node);
            return static_cast<std::int32_t>(tree.nodes.size() - 1);
        }
        node.is_leaf = false;
        node.feature = split.feature;
        node.threshold = split.threshold;
        node.gain = split.gain;
        const std::int32_t self = static_cast<std::int32_t>(tree.nodes.size());
        tree.nodes.push_back(node);
        std::vector<std::size_t> left, right;
        for (auto i : indices)
            (features[i][split.feature] <= split.threshold ? left : right).push_back(i);
        tree.nodes[self].left = build(left, depth + 1);
        tree.nodes[self].right = build(right, depth + 1);
        return self;
    }
};

}  // namespace

GBModel gb_train(const std::vector<std::vector<double>>& features, const std::vector<int>& labels,
                 const GBConfig& config) {
    if (features.size() != labels.size()) throw ShapeError("gb_train: feature/label size mismatch");
    if (features.size() < 2) throw ValidationError("gb_train requires at least 2 samples");
    const std::size_t positives =
        static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
    if (positives == 0 || positives == labels.size())
        throw ValidationError("gb_train requires both classes present");
    const std::size_t n_features = features.front().size();
    for (const auto& row : features)
        if (row.size() != n_features) throw ShapeError("gb_train: ragged feature matrix");

    GBModel model;
    model.learning_rate = config.learning_rate;
    model.n_features = n_features;
    const double rate = static_cast<double>(positives) / static_cast<double>(labels.size());
    model.base_score = std::log(rate / (1.0 - rate));

    std::vector<double> score(labels.size(), model.base_score);
    std::vector<std::size_t> all(labels.size());
    std::iota(all.begin(), all.end(), 0);
    std::vector<double> residuals(labels.size()), hessians(labels.size());

    for (std::size_t stage = 0; stage < config.n_trees; ++stage) {
        for (std::size_t i = 0; i < labels.size(); ++i) {
            const double p = sigmoid(score[i]);
            residuals[i] = static_cast<double>(labels[i]) - p;
            hessians[i] = p * (1.0 - p);
        }
        TreeBuilder builder{features, residuals, hessians, config.depth, {}};
        builder.build(all, 0);
        // A pure-leaf root means no feature offers any split gain; further
        // stages would only rescale the prior.
        if (builder.tree.nodes.size() == 1) break;
        for (std::size_t i = 0; i < labels.size(); ++i)
            score[i] += config.learning_rate * builder.tree.predict(features[i]);
        model.trees.push_back(std::move(builder.tree));
    }
    return model;
}

std::pair<double, int> gb_predict(const GBModel& model, const std::vector<double>& x) {
    if (x.size() != model.n_features) throw ShapeError("gb_predict: feature width mismatch");
    double score = model.base_score;
    for (const auto& tree : model.trees) score += model.learning_rate * tree.predict(x);
    const double p = sigmoid(score);
    return {p, p >= 0.5 ? 1 : 0};
}

std::vector<std::pair<std::size_t, double>> gb_importance(const GBModel& model) {
    std::map<std::size_t, double> gains;
    for (const auto& tree : model.trees)
        for (const auto& node : tree.nodes)
            if (!node.is_leaf) gains[node.feature] += node.gain;
    std::vector<std::pair<std::size_t, double>> ranked(gains.begin(), gains.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) return a.second > b.second;
        return a.first < b.first;
    });
    return ranked;
}

}  // namespace aigc::linguistic
