#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <vector>

#include "aigc/linguistic.hpp"
#include "aigc/rng.hpp"

using namespace aigc;
namespace fs = std::filesystem;

namespace {

// 20 words, exactly 5 letters each (100 letters), 2 sentences.
std::string probe_text() {
    std::string sentence;
    for (int i = 0; i < 10; ++i) sentence += (i ? " aaaaa" : "Aaaaa");
    sentence += ".";
    return sentence + " " + sentence;
}

std::vector<std::vector<double>> single_feature_data(std::vector<int>& labels) {
    std::vector<std::vector<double>> x;
    labels.clear();
    for (int i = 0; i < 8; ++i) {
        double noise = 0.01 * i;
        x.push_back({i < 4 ? 0.0 + noise : 1.0 + noise, 0.5});
        labels.push_back(i < 4 ? 0 : 1);
    }
    return x;
}

// Exhaustive oracle: every (feature, midpoint threshold) split, same gain
// formula (sum^2/n on both sides minus parent), first-best kept.
linguistic::SplitCandidate exhaustive_split(const std::vector<std::vector<double>>& x,
                                            const std::vector<double>& residuals,
                                            const std::vector<std::size_t>& idx) {
    linguistic::SplitCandidate best;
    double parent_sum = 0.0;
    for (auto i : idx) parent_sum += residuals[i];
    double parent = parent_sum * parent_sum / double(idx.size());
    std::size_t n_features = x.empty() ? 0 : x[0].size();
    for (std::size_t f = 0; f < n_features; ++f) {
        std::vector<double> values;
        for (auto i : idx) values.push_back(x[i][f]);
        std::sort(values.begin(), values.end());
        values.erase(std::unique(values.begin(), values.end()), values.end());
        for (std::size_t v = 0; v + 1 < values.size(); ++v) {
            double thr = 0.5 * (values[v] + values[v + 1]);
            double ls = 0.0, rs = 0.0;
            std::size_t ln = 0, rn = 0;
            for (auto i : idx) {
                if (x[i][f] <= thr) {
                    ls += residuals[i];
                    ++ln;
                } else {
                    rs += residuals[i];
                    ++rn;
                }
            }
            if (ln == 0 || rn == 0) continue;
            double gain = ls * ls / double(ln) + rs * rs / double(rn) - parent;
            if (!best.valid || gain > best.gain + 1e-12) {
                best = {true, f, thr, gain};
            }
        }
    }
    return best;
}

}  // namespace

TEST_CASE("syllable counting heuristic") {
    CHECK(linguistic::count_syllables("cat") == 1);
    CHECK(linguistic::count_syllables("banana") == 3);
    CHECK(linguistic::count_syllables("table") == 2);   // -le after consonant
    CHECK(linguistic::count_syllables("there") == 1);   // silent e
    CHECK(linguistic::count_syllables("rhythm") == 1);  // y as vowel, min 1
}

TEST_CASE("coleman-liau on the fixed probe") {
    CHECK(std::abs(linguistic::coleman_liau(probe_text()) - 10.64) < 0.01);
    CHECK_THROWS_AS(linguistic::coleman_liau(""), std::domain_error);
}

TEST_CASE("coleman-liau degenerate case: one-letter words, one sentence each") {
    // L = 100, S = 100 -> 0.0588*100 - 0.296*100 - 15.8 = -39.52
    CHECK(std::abs(linguistic::coleman_liau("A. A. A.") - (-39.52)) < 0.01);
}

TEST_CASE("self-concatenation leaves ratio features fixed") {
    std::string text = "The quiet harbor keeps many small boats. Fishermen arrive early.";
    std::string doubled = text + " " + text;
    CHECK(linguistic::coleman_liau(doubled) ==
          doctest::Approx(linguistic::coleman_liau(text)).epsilon(1e-9));
    auto r1 = linguistic::readability(text);
    auto r2 = linguistic::readability(doubled);
    CHECK(r2.lix == doctest::Approx(r1.lix).epsilon(1e-9));
    CHECK(r2.flesch_kincaid == doctest::Approx(r1.flesch_kincaid).epsilon(1e-9));
    CHECK(r2.avg_word_length == doctest::Approx(r1.avg_word_length).epsilon(1e-9));
}

TEST_CASE("readability formulas") {
    auto r = linguistic::readability("The cat sat.");
    CHECK(r.lix == doctest::Approx(3.0));
    CHECK(linguistic::readability("cat").avg_word_length == doctest::Approx(3.0));

    std::string smog_text;
    for (int i = 0; i < 30; ++i) smog_text += "Banana. ";
    auto rs = linguistic::readability(smog_text);
    CHECK(rs.smog == doctest::Approx(1.0430 * std::sqrt(30.0) + 3.1291));

    CHECK_THROWS_AS(linguistic::readability(""), std::domain_error);
}

TEST_CASE("pos rates via the fallback tagger") {
    auto tagger = linguistic::fallback_tagger();
    CHECK(linguistic::pos_counts("the a an", *tagger).determiner == doctest::Approx(1.0));
    auto zero = linguistic::pos_counts("", *tagger);
    CHECK(zero.determiner == 0.0);
    CHECK(zero.gerund == 0.0);
    CHECK(linguistic::pos_counts("Running is winning.", *tagger).gerund ==
          doctest::Approx(2.0 / 3.0));
    CHECK(linguistic::pos_counts("Running is winning.", *tagger).third_singular_present ==
          doctest::Approx(1.0 / 3.0));
}

TEST_CASE("feature extraction is deterministic with the declared schema") {
    auto tagger = linguistic::fallback_tagger();
    std::string text = "We describe a small study. It uses three simple parts. Results look good.";
    auto a = linguistic::extract_features(text, *tagger);
    auto b = linguistic::extract_features(text, *tagger);
    CHECK(a.values == b.values);
    CHECK(a.values.size() == linguistic::feature_names().size());
    for (double v : a.values) CHECK(std::isfinite(v));
    CHECK_THROWS_AS(linguistic::extract_features("", *tagger), std::domain_error);

    // Hand-checked slots on the probe.
    std::map<std::string, double> named;
    for (std::size_t i = 0; i < a.values.size(); ++i)
        named[linguistic::feature_names()[i]] = a.values[i];
    CHECK(named.at("avg_sentence_length") == doctest::Approx(13.0 / 3.0));
    CHECK(named.at("pos_dt") == doctest::Approx(1.0 / 13.0));     // "a"
    CHECK(named.at("pos_prp") == doctest::Approx(2.0 / 13.0));    // "We", "It"
    CHECK(named.at("fairness_virtue") == 0.0);                    // no lexicons loaded
}

TEST_CASE("lexicon slots populate from a directory") {
    fs::path dir = fs::temp_directory_path() / "aigc_lexicons";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "bias_words.txt", std::ios::trunc);
        out << "clearly\nobviously\n";
    }
    auto lex = linguistic::LexiconSet::load(dir.string());
    auto tagger = linguistic::fallback_tagger();
    auto fv = linguistic::extract_features("clearly this holds", *tagger, lex);
    std::map<std::string, double> named;
    for (std::size_t i = 0; i < fv.values.size(); ++i)
        named[linguistic::feature_names()[i]] = fv.values[i];
    CHECK(named.at("bias_words") == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("gb: single separating feature reaches accuracy 1, ranked first") {
    std::vector<int> labels;
    auto x = single_feature_data(labels);
    auto model = linguistic::gb_train(x, labels, {20, 2, 0.3, 0});
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(linguistic::gb_predict(model, x[i]).second == labels[i]);
    auto importance = linguistic::gb_importance(model);
    REQUIRE(!importance.empty());
    CHECK(importance[0].first == 0);
    double total = 0.0;
    for (const auto& [f, g] : importance) {
        CHECK(g >= 0.0);
        total += g;
    }
    CHECK(total >= importance[0].second);
}

TEST_CASE("gb: xor needs depth 2") {
    std::vector<std::vector<double>> x = {{0, 0}, {0, 1}, {1, 0}, {1, 1},
                                          {0, 0}, {0, 1}, {1, 0}, {1, 1}};
    std::vector<int> labels = {0, 1, 1, 0, 0, 1, 1, 0};
    auto model = linguistic::gb_train(x, labels, {60, 2, 0.3, 0});
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(linguistic::gb_predict(model, x[i]).second == labels[i]);
}

TEST_CASE("gb: constant features predict the majority class") {
    std::vector<std::vector<double>> x(6, {1.0, 2.0});
    std::vector<int> labels = {1, 1, 1, 1, 0, 0};
    auto model = linguistic::gb_train(x, labels, {10, 3, 0.1, 0});
    CHECK(linguistic::gb_predict(model, {1.0, 2.0}).second == 1);
    for (const auto& [f, g] : linguistic::gb_importance(model)) CHECK(g == 0.0);
}

TEST_CASE("gb: zero trees yield sigmoid(base_score)") {
    std::vector<int> labels;
    auto x = single_feature_data(labels);
    auto model = linguistic::gb_train(x, labels, {0, 3, 0.1, 0});
    CHECK(model.trees.empty());
    CHECK(linguistic::gb_predict(model, x[0]).first == doctest::Approx(0.5));  // balanced
}

TEST_CASE("gb: training errors") {
    std::vector<std::vector<double>> x = {{1.0}, {2.0}};
    CHECK_THROWS(linguistic::gb_train(x, {1, 1}, {5, 2, 0.1, 0}));           // single class
    CHECK_THROWS(linguistic::gb_train({{1.0}}, {1}, {5, 2, 0.1, 0}));        // < 2 samples
    CHECK_THROWS(linguistic::gb_train(x, {0, 1, 1}, {5, 2, 0.1, 0}));        // size mismatch
    CHECK_THROWS(linguistic::gb_predict(linguistic::gb_train(x, {0, 1}, {5, 2, 0.1, 0}),
                                        {1.0, 2.0}));                        // schema mismatch
}

TEST_CASE("gb: determinism") {
    std::vector<int> labels;
    auto x = single_feature_data(labels);
    auto m1 = linguistic::gb_train(x, labels, {15, 3, 0.2, 4});
    auto m2 = linguistic::gb_train(x, labels, {15, 3, 0.2, 4});
    REQUIRE(m1.trees.size() == m2.trees.size());
    for (std::size_t i = 0; i < x.size(); ++i)
        CHECK(linguistic::gb_predict(m1, x[i]).first == linguistic::gb_predict(m2, x[i]).first);
}

TEST_CASE("gb: staged training loss is non-increasing") {
    std::vector<int> labels;
    auto x = single_feature_data(labels);
    auto model = linguistic::gb_train(x, labels, {12, 2, 0.2, 0});
    auto staged_loss = [&](std::size_t n_trees) {
        double loss = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            double margin = model.base_score;
            for (std::size_t t = 0; t < n_trees; ++t)
                margin += model.learning_rate * model.trees[t].predict(x[i]);
            double p = 1.0 / (1.0 + std::exp(-margin));
            loss += labels[i] ? -std::log(std::max(p, 1e-12))
                              : -std::log(std::max(1.0 - p, 1e-12));
        }
        return loss;
    };
    double prev = staged_loss(0);
    for (std::size_t t = 1; t <= model.trees.size(); ++t) {
        double cur = staged_loss(t);
        CHECK(cur <= prev + 1e-9);
        prev = cur;
    }
}

TEST_CASE("greedy split equals exhaustive enumeration on small datasets") {
    Rng rng(99);
    for (int trial = 0; trial < 300; ++trial) {
        std::size_t n = 2 + rng.next_below(7);  // up to 8 samples
        std::size_t f = 1 + rng.next_below(2);  // up to 2 features
        std::vector<std::vector<double>> x(n, std::vector<double>(f));
        std::vector<double> residuals(n);
        std::vector<std::size_t> idx(n);
        for (std::size_t i = 0; i < n; ++i) {
            idx[i] = i;
            residuals[i] = rng.uniform(-1.0, 1.0);
            for (std::size_t j = 0; j < f; ++j) x[i][j] = double(rng.next_below(4));
        }
        auto greedy = linguistic::best_split(x, residuals, idx);
        auto oracle = exhaustive_split(x, residuals, idx);
        CHECK(greedy.valid == oracle.valid);
        if (greedy.valid && oracle.valid) {
            CHECK(greedy.gain == doctest::Approx(oracle.gain).epsilon(1e-9));
            CHECK(greedy.feature == oracle.feature);
            CHECK(greedy.threshold == doctest::Approx(oracle.threshold));
        }
    }
}
