#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

namespace aigc::encoding {

inline constexpr std::size_t kDefaultMaxTokens = 512;

struct TokenSequence {
    std::vector<std::int64_t> tokens;

    std::size_t size() const { return tokens.size(); }
};

// Row-major n x d matrix of contextual token representations.
struct EmbeddingSequence {
    std::vector<float> data;
    std::size_t rows = 0;
    std::size_t cols = 0;

    float* row(std::size_t r) { return data.data() + r * cols; }
    const float* row(std::size_t r) const { return data.data() + r * cols; }
};

struct EncoderDescriptor {
    std::string name;
    std::size_t d = 0;
    std::size_t max_tokens = kDefaultMaxTokens;
    bool deterministic = false;
};

// Frozen representation stage. Implementations are immutable after
// construction; encode never mutates encoder state.
class Encoder {
public:
    virtual ~Encoder() = default;
    virtual const EncoderDescriptor& descriptor() const = 0;
    virtual TokenSequence tokenize(const std::string& text, std::size_t limit) const = 0;
    virtual EmbeddingSequence encode(const TokenSequence& tokens) const = 0;

    TokenSequence tokenize(const std::string& text) const {
        return tokenize(text, descriptor().max_tokens);
    }
    EmbeddingSequence encode_text(const std::string& text) const { return encode(tokenize(text)); }
};

// Whitespace-token encoder mapping each token to a fixed pseudo-random
// unit-norm vector of width d. Exists so the head and training loop are
// testable without a pretrained model.
std::shared_ptr<Encoder> make_hash_encoder(std::uint64_t vocab_seed, std::size_t d,
                                           std::size_t max_tokens = kDefaultMaxTokens);

// Word-vector encoder backed by a text file "<name>.vec" (one token per line:
// word followed by d floats) under model_dir. Stand-in slot for pretrained
// representation models.
std::shared_ptr<Encoder> make_wordvec_encoder(const std::string& name, const std::string& model_dir);

// Registry keyed by name. Supported names:
//   "hash"           d=32, seed=1
//   "hash:<d>"       custom width
//   "hash:<d>:<seed>" custom width and seed
//   anything else    word-vector file <name>.vec under model_dir (or the
//                    AIGC_MODEL_DIR environment variable)
std::shared_ptr<Encoder> create_encoder(const std::string& name, const std::string& model_dir = "");

}  // namespace aigc::encoding
