#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>

#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"

using namespace aigc;
namespace fs = std::filesystem;

TEST_CASE("hash encoder shapes") {
    auto enc = encoding::make_hash_encoder(1, 1024);
    auto e = enc->encode_text("one two three four five six seven eight nine ten");
    CHECK(e.rows == 10);
    CHECK(e.cols == 1024);

    auto enc32 = encoding::make_hash_encoder(1, 32);
    auto e1 = enc32->encode_text("solo");
    CHECK(e1.rows == 1);
    CHECK(e1.cols == 32);
}

TEST_CASE("hash encoder is deterministic and unit-norm") {
    auto enc = encoding::make_hash_encoder(1, 32);
    auto a = enc->encode_text("the quick brown fox");
    auto b = enc->encode_text("the quick brown fox");
    CHECK(a.data == b.data);

    for (std::size_t r = 0; r < a.rows; ++r) {
        double norm = 0.0;
        for (std::size_t c = 0; c < a.cols; ++c) norm += double(a.row(r)[c]) * a.row(r)[c];
        CHECK(std::abs(std::sqrt(norm) - 1.0) < 1e-6);
    }
}

TEST_CASE("distinct tokens map to distinct vectors over a test vocabulary") {
    auto enc = encoding::make_hash_encoder(1, 32);
    std::vector<std::string> vocab;
    for (int i = 0; i < 200; ++i) vocab.push_back("w" + std::to_string(i));
    std::set<std::vector<float>> seen;
    for (const auto& w : vocab) {
        auto e = enc->encode_text(w);
        std::vector<float> row(e.row(0), e.row(0) + e.cols);
        CHECK(seen.insert(row).second);  // no collision
    }
    auto ta = enc->encode_text("alpha");
    auto tb = enc->encode_text("beta");
    CHECK(std::vector<float>(ta.data) != std::vector<float>(tb.data));
}

TEST_CASE("token limit truncates; prefix of tokens gives prefix of rows") {
    auto enc = encoding::make_hash_encoder(1, 16, 8);
    std::string text;
    for (int i = 0; i < 20; ++i) text += "tok" + std::to_string(i) + " ";
    auto toks = enc->tokenize(text);
    CHECK(toks.size() == 8);

    auto full = enc->encode(toks);
    encoding::TokenSequence head{{toks.tokens.begin(), toks.tokens.begin() + 3}};
    auto part = enc->encode(head);
    for (std::size_t i = 0; i < part.data.size(); ++i) CHECK(part.data[i] == full.data[i]);
}

TEST_CASE("empty text rejected") {
    auto enc = encoding::make_hash_encoder(1, 16);
    CHECK_THROWS_AS(enc->encode_text(""), std::domain_error);
    CHECK_THROWS_AS(enc->encode_text("   "), std::domain_error);
}

TEST_CASE("registry names") {
    CHECK(encoding::create_encoder("hash")->descriptor().d == 32);
    CHECK(encoding::create_encoder("hash:64")->descriptor().d == 64);
    auto seeded = encoding::create_encoder("hash:16:9");
    CHECK(seeded->descriptor().d == 16);
    CHECK_THROWS_AS(encoding::make_hash_encoder(1, 1), ConfigError);

    // Unknown name with no model dir (and no env var) is a config error.
    const char* saved = std::getenv("AIGC_MODEL_DIR");
    unsetenv("AIGC_MODEL_DIR");
    CHECK_THROWS_AS(encoding::create_encoder("no-such-model"), ConfigError);
    if (saved) setenv("AIGC_MODEL_DIR", saved, 1);
}

TEST_CASE("word-vector encoder loads .vec files, OOV is zero") {
    fs::path dir = fs::temp_directory_path() / "aigc_models";
    fs::create_directories(dir);
    {
        std::ofstream out(dir / "tiny.vec", std::ios::trunc);
        out << "hello 1 0 0\nworld 0 1 0\n";
    }
    auto enc = encoding::create_encoder("tiny", dir.string());
    CHECK(enc->descriptor().d == 3);
    auto e = enc->encode_text("hello unknown world");
    REQUIRE(e.rows == 3);
    CHECK(e.row(0)[0] == 1.0f);
    CHECK(e.row(1)[0] == 0.0f);
    CHECK(e.row(1)[1] == 0.0f);
    CHECK(e.row(1)[2] == 0.0f);
    CHECK(e.row(2)[1] == 1.0f);
}
