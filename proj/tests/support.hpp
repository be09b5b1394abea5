#pragma once

// Shared synthetic fixtures for unit and acceptance tests: deterministic
// styled corpora whose classes are separable under the hash encoder.

#include <cstdint>
#include <string>
#include <vector>

#include "aigc/corpus.hpp"
#include "aigc/rng.hpp"

namespace testsupport {

// Disjoint per-style vocabularies plus shared neutral filler. None of the
// words appear in the shipped copyedit rule sets.
inline const std::vector<std::vector<std::string>>& style_words() {
    static const std::vector<std::vector<std::string>> pools = {
        {"river", "stone", "meadow", "lantern", "harbor", "willow", "ember", "quiet"},
        {"tensor", "gradient", "kernel", "module", "vector", "scalar", "matrix", "batch"},
        {"sonata", "cadence", "timbre", "chorus", "melody", "rhythm", "octave", "tempo"},
        {"glacier", "basalt", "magma", "seismic", "erosion", "stratum", "fault", "crust"},
    };
    return pools;
}

inline const std::vector<std::vector<std::string>>& shifted_style_words() {
    static const std::vector<std::vector<std::string>> pools = {
        {"orchard", "saddle", "bramble", "copper", "mill", "harvest", "cellar", "twine"},
        {"compiler", "runtime", "opcode", "register", "stack", "heap", "thread", "cache"},
    };
    return pools;
}

inline const std::vector<std::string>& filler_words() {
    static const std::vector<std::string> words = {"beside", "under", "near",  "toward",
                                                   "between", "around", "along", "past"};
    return words;
}

inline aigc::corpus::Label style_label(std::size_t style) {
    using aigc::corpus::Label;
    static const Label labels[] = {Label::HUM, Label::GPT_WRI, Label::GPT_CPL, Label::GPT_POL};
    return labels[style % 4];
}

// n samples cycling through num_styles styles; ~70% style words, 30% filler.
inline aigc::corpus::LabeledCorpus synthetic_corpus(std::size_t n, std::uint64_t seed,
                                                    std::size_t num_styles = 2,
                                                    std::size_t words_per_text = 18) {
    aigc::corpus::LabeledCorpus out;
    const auto& pools = style_words();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t style = i % num_styles;
        aigc::Rng rng(seed ^ aigc::splitmix64_mix(0x5EED0000 + i));
        std::string text;
        for (std::size_t w = 0; w < words_per_text; ++w) {
            const auto& pool = (rng.next_double() < 0.7) ? pools[style] : filler_words();
            if (!text.empty()) text += ' ';
            text += pool[rng.next_below(pool.size())];
        }
        aigc::corpus::TextSample s;
        s.id = "syn-" + std::to_string(i);
        s.text = text;
        s.label = style_label(style);
        s.task = aigc::corpus::task_for_label(s.label);
        out.samples.push_back(std::move(s));
    }
    return out;
}

// Binary corpus from a shifted domain: half the style signal comes from new
// vocabulary, and a noise fraction borrows words from the opposite original
// style, so a model trained on synthetic_corpus transfers imperfectly.
inline aigc::corpus::LabeledCorpus shifted_corpus(std::size_t n, std::uint64_t seed,
                                                  std::size_t words_per_text = 18) {
    aigc::corpus::LabeledCorpus out;
    const auto& original = style_words();
    const auto& shifted = shifted_style_words();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t style = i % 2;
        aigc::Rng rng(seed ^ aigc::splitmix64_mix(0x5A1F7000 + i));
        std::string text;
        for (std::size_t w = 0; w < words_per_text; ++w) {
            double roll = rng.next_double();
            const std::vector<std::string>* pool;
            if (roll < 0.50)
                pool = &shifted[style];
            else if (roll < 0.75)
                pool = &original[1 - style];  // cross-style noise
            else
                pool = &filler_words();
            if (!text.empty()) text += ' ';
            text += (*pool)[rng.next_below(pool->size())];
        }
        aigc::corpus::TextSample s;
        s.id = "shift-" + std::to_string(i);
        s.text = text;
        s.label = style_label(style);
        s.task = aigc::corpus::task_for_label(s.label);
        out.samples.push_back(std::move(s));
    }
    return out;
}

}  // namespace testsupport
