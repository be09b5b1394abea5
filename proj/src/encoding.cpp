#include "aigc/encoding.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "aigc/errors.hpp"
#include "aigc/rng.hpp"

namespace aigc::encoding {

namespace {

std::vector<std::string> whitespace_tokens(const std::string& text, std::size_t limit) {
    std::vector<std::string> tokens;
    std::istringstream stream(text);
    std::string token;
    while (tokens.size() < limit && stream >> token) tokens.push_back(token);
    return tokens;
}

class HashEncoder final : public Encoder {
public:
    HashEncoder(std::uint64_t vocab_seed, std::size_t d, std::size_t max_tokens)
        : vocab_seed_(vocab_seed) {
        if (d < 2) throw ConfigError("hash encoder width must be >= 2");
        descriptor_.name = "hash:" + std::to_string(d) + ":" + std::to_string(vocab_seed);
        descriptor_.d = d;
        descriptor_.max_tokens = max_tokens;
        descriptor_.deterministic = true;
    }

    const EncoderDescriptor& descriptor() const override { return descriptor_; }

    TokenSequence tokenize(const std::string& text, std::size_t limit) const override {
        if (corpus_is_blank(text)) throw std::domain_error("cannot tokenize empty text");
        TokenSequence seq;
        for (const auto& token : whitespace_tokens(text, limit))
            seq.tokens.push_back(static_cast<std::int64_t>(fnv1a64(token) ^ vocab_seed_));
        return seq;
    }

    EmbeddingSequence encode(const TokenSequence& tokens) const override {
        EmbeddingSequence out;
        out.rows = tokens.size();
        out.cols = descriptor_.d;
        out.data.resize(out.rows * out.cols);
        for (std::size_t r = 0; r < out.rows; ++r)
            fill_token_vector(static_cast<std::uint64_t>(tokens.tokens[r]), out.row(r));
        return out;
    }

private:
    static bool corpus_is_blank(const std::string& text) {
        for (char c : text)
            if (!std::isspace(static_cast<unsigned char>(c))) return false;
        return true;
    }

    void fill_token_vector(std::uint64_t token_id, float* out) const {
        std::uint64_t state = token_id ^ (vocab_seed_ * 0x9e3779b97f4a7c15ULL);
        Rng rng(state);
        double norm_sq = 0.0;
        std::vector<double> raw(descriptor_.d);
        for (auto& v : raw) {
            v = rng.uniform(-1.0, 1.0);
            norm_sq += v * v;
        }
        double norm = std::sqrt(norm_sq);
        if (norm == 0.0) {
            raw[0] = 1.0;
            norm = 1.0;
        }
        for (std::size_t i = 0; i < raw.size(); ++i)
            out[i] = static_cast<float>(raw[i] / norm);
    }

    EncoderDescriptor descriptor_;
    std::uint64_t vocab_seed_;
};

class WordVecEncoder final : public Encoder {
public:
    WordVecEncoder(const std::string& name, const std::string& path) {
        std::ifstream file(path);
        if (!file) throw ConfigError("cannot open word-vector file: " + path);
        std::string line;
        std::size_t d = 0;
        while (std::getline(file, line)) {
            if (line.empty()) continue;
            std::istringstream row(line);
            std::string word;
            row >> word;
            std::vector<float> vec;
            float value;
            while (row >> value) vec.push_back(value);
            if (d == 0) d = vec.size();
            if (vec.empty() || vec.size() != d)
                throw ConfigError("inconsistent vector width in " + path);
            std::int64_t id = static_cast<std::int64_t>(vocab_.size());
            vocab_.emplace(word, id);
            table_.insert(table_.end(), vec.begin(), vec.end());
        }
        if (d == 0) throw ConfigError("empty word-vector file: " + path);
        descriptor_.name = name;
        descriptor_.d = d;
        descriptor_.deterministic = true;
        // Trailing row of zeros serves as the out-of-vocabulary embedding.
        oov_id_ = static_cast<std::int64_t>(vocab_.size());
        table_.resize(table_.size() + d, 0.0f);
    }

    const EncoderDescriptor& descriptor() const override { return descriptor_; }

    TokenSequence tokenize(const std::string& text, std::size_t limit) const override {
        TokenSequence seq;
        for (const auto& token : whitespace_tokens(text, limit)) {
            auto it = vocab_.find(token);
            seq.tokens.push_back(it == vocab_.end() ? oov_id_ : it->second);
        }
        if (seq.tokens.empty()) throw std::domain_error("cannot tokenize empty text");
        return seq;
    }

    EmbeddingSequence encode(const TokenSequence& tokens) const override {
        EmbeddingSequence out;
        out.rows = tokens.size();
        out.cols = descriptor_.d;
        out.data.resize(out.rows * out.cols);
        for (std::size_t r = 0; r < out.rows; ++r) {
            auto id = static_cast<std::size_t>(tokens.tokens[r]);
            if (id > static_cast<std::size_t>(oov_id_))
                throw ShapeError("token id out of range for encoder " + descriptor_.name);
            const float* src = table_.data() + id * descriptor_.d;
            std::copy(src, src + descriptor_.d, out.row(r));
        }
        return out;
    }

private:
    EncoderDescriptor descriptor_;
    std::unordered_map<std::string, std::int64_t> vocab_;
    std::vector<float> table_;
    std::int64_t oov_id_ = 0;
};

}  // namespace

std::shared_ptr<Encoder> make_hash_encoder(std::uint64_t vocab_seed, std::size_t d,
                                           std::size_t max_tokens) {
    return std::make_shared<HashEncoder>(vocab_seed, d, max_tokens);
}

std::shared_ptr<Encoder> make_wordvec_encoder(const std::string& name,
                                              const std::string& model_dir) {
    namespace fs = std::filesystem;
    return std::make_shared<WordVecEncoder>(name, (fs::path(model_dir) / (name + ".vec")).string());
}

std::shared_ptr<Encoder> create_encoder(const std::string& name, const std::string& model_dir) {
    if (name == "hash" || name.rfind("hash:", 0) == 0) {
        std::size_t d = 32;
        std::uint64_t seed = 1;
        if (name.size() > 5) {
            std::istringstream params(name.substr(5));
            std::string field;
            if (std::getline(params, field, ':')) d = std::stoul(field);
            if (std::getline(params, field, ':')) seed = std::stoull(field);
        }
        return make_hash_encoder(seed, d);
    }
    std::string dir = model_dir;
    if (dir.empty()) {
        const char* env = std::getenv("AIGC_MODEL_DIR");
        if (env) dir = env;
    }
    if (dir.empty())
        throw ConfigError("unknown encoder \"" + name +
                          "\" and no model directory configured (AIGC_MODEL_DIR)");
    return make_wordvec_encoder(name, dir);
}

}  // namespace aigc::encoding
