#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>

#include "aigc/checkpoint.hpp"
#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"
#include "aigc/training.hpp"
#include "support.hpp"

using namespace aigc;
namespace fs = std::filesystem;

namespace {

training::EncodedDataset encode(const corpus::LabeledCorpus& corp, std::size_t num_classes = 2,
                                std::size_t d = 16) {
    auto enc = encoding::make_hash_encoder(1, d);
    return training::encode_corpus(corp, *enc, num_classes);
}

head::HeadConfig small_head(std::size_t num_classes = 2, std::size_t d = 16) {
    head::HeadConfig cfg;
    cfg.d_in = d;
    cfg.hidden = 8;
    cfg.num_classes = num_classes;
    cfg.dropout_p = 0.1;
    return cfg;
}

training::TrainConfig quick_train(std::size_t epochs = 4) {
    training::TrainConfig cfg;
    cfg.batch_size = 16;
    cfg.max_epochs = epochs;
    cfg.lr0 = 5e-3;
    cfg.seed = 1;
    return cfg;
}

}  // namespace

TEST_CASE("label indexing folds GPT tasks in binary mode") {
    CHECK(training::label_index(corpus::Label::HUM, 2) == 0);
    CHECK(training::label_index(corpus::Label::GPT_WRI, 2) == 1);
    CHECK(training::label_index(corpus::Label::GPT_POL, 2) == 1);
    CHECK(training::label_index(corpus::Label::GPT_CPL, 4) == 2);
    CHECK(training::is_positive_class(1, 2));
    CHECK(!training::is_positive_class(0, 4));
    CHECK(training::is_positive_class(3, 4));
}

TEST_CASE("loss values are exact") {
    CHECK(std::abs(training::bce_loss(std::vector<double>{0.5, 0.5}, 0) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(training::bce_loss(std::vector<double>{0.5, 0.5}, 1) - std::log(2.0)) < 1e-12);
    CHECK(std::abs(training::bce_loss(std::vector<double>{0.9, 0.1}, 0) + std::log(0.9)) < 1e-12);
    CHECK(training::bce_loss(std::vector<double>{1.0, 0.0}, 0) == 0.0);
    CHECK(training::bce_loss(std::vector<double>{0.0, 1.0}, 0) > 20.0);  // clamped, not inf
}

TEST_CASE("cosine schedule endpoints and monotonicity") {
    const double lr0 = 2e-4;
    CHECK(training::cosine_lr(0, 20, lr0) == lr0);
    CHECK(training::cosine_lr(20, 20, lr0) == doctest::Approx(0.0).epsilon(1e-18));
    double prev = lr0;
    for (std::size_t t = 1; t <= 20; ++t) {
        double lr = training::cosine_lr(t, 20, lr0);
        CHECK(lr <= prev + 1e-15);
        prev = lr;
    }
    CHECK_THROWS_AS(training::cosine_lr(21, 20, lr0), std::domain_error);
}

TEST_CASE("early stop fires only after `patience` stale epochs") {
    CHECK(!training::early_stop_check({1.0, 0.9, 0.8}, 5, 1e-4));
    CHECK(training::early_stop_check({1.0, 0.9, 0.91, 0.92, 0.93}, 3, 1e-4));
    CHECK(!training::early_stop_check({1.0, 0.9, 0.91, 0.85}, 3, 1e-4));
    // Improvement below min_delta does not count.
    CHECK(training::early_stop_check({1.0, 0.99995, 0.99991, 0.99990}, 3, 1e-4));
}

TEST_CASE("encode_corpus caches to disk") {
    auto corp = testsupport::synthetic_corpus(10, 3);
    auto enc = encoding::make_hash_encoder(1, 16);
    fs::path cache = fs::temp_directory_path() / "aigc_embed_cache";
    fs::remove_all(cache);
    auto first = training::encode_corpus(corp, *enc, 2, cache.string());
    CHECK(fs::exists(cache));
    CHECK(!fs::is_empty(cache));
    auto second = training::encode_corpus(corp, *enc, 2, cache.string());
    REQUIRE(second.size() == first.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
        CHECK(second[i].label == first[i].label);
        CHECK(second[i].embedding.data == first[i].embedding.data);
    }
}

TEST_CASE("training is deterministic and logs the cosine schedule") {
    auto corp = testsupport::synthetic_corpus(60, 5);
    auto data = encode(corp);
    auto cfg = small_head();
    auto params = head::init_head<float>(cfg, 2);
    auto tc = quick_train();

    auto r1 = training::train(params, data, data, tc);
    auto r2 = training::train(params, data, data, tc);
    CHECK(r1.params.data == r2.params.data);
    REQUIRE(!r1.history.epochs.empty());
    for (std::size_t e = 0; e < r1.history.epochs.size(); ++e) {
        CHECK(r1.history.epochs[e].lr ==
              doctest::Approx(training::cosine_lr(e, tc.max_epochs, tc.lr0)));
    }
}

TEST_CASE("empty train set rejected") {
    training::EncodedDataset empty;
    auto corp = testsupport::synthetic_corpus(8, 5);
    auto val = encode(corp);
    auto params = head::init_head<float>(small_head(), 2);
    CHECK_THROWS_AS(training::train(params, empty, val, quick_train()), ConfigError);
}

TEST_CASE("FT-L touches only the dense layer; FT-A equals train") {
    auto corp = testsupport::synthetic_corpus(40, 6);
    auto data = encode(corp);
    auto params = head::init_head<float>(small_head(), 3);
    auto tc = quick_train(2);

    auto ftl = training::finetune_last_layer(params, data, data, tc);
    bool dense_changed = false;
    for (const auto& s : params.sections) {
        bool is_dense = s.name.rfind("dense", 0) == 0;
        for (std::size_t i = 0; i < s.size(); ++i) {
            float before = params.data[s.offset + i];
            float after = ftl.params.data[s.offset + i];
            if (is_dense) {
                if (before != after) dense_changed = true;
            } else {
                CHECK(before == after);
            }
        }
    }
    CHECK(dense_changed);

    auto fta = training::finetune_all(params, data, data, tc);
    auto full = training::train(params, data, data, tc);
    CHECK(fta.params.data == full.params.data);
}

TEST_CASE("evaluate returns mean loss and accuracy") {
    auto corp = testsupport::synthetic_corpus(30, 8);
    auto data = encode(corp);
    auto params = head::init_head<float>(small_head(), 4);
    auto [loss, acc] = training::evaluate(params, data);
    CHECK(loss > 0.0);
    CHECK(acc >= 0.0);
    CHECK(acc <= 1.0);
}

TEST_CASE("checkpoints round-trip byte-identically") {
    auto params = head::init_head<float>(small_head(), 11);
    training::Checkpoint ck;
    ck.params = params;
    ck.encoder_name = "hash:16";
    ck.epoch = 7;
    ck.metrics["val_loss"] = 0.25;

    fs::path path = fs::temp_directory_path() / "ck_roundtrip.bin";
    training::save_checkpoint(ck, path.string());
    auto back = training::load_checkpoint(path.string());
    CHECK(back.params.data == ck.params.data);
    CHECK(back.encoder_name == "hash:16");
    CHECK(back.epoch == 7);
    CHECK(back.metrics.at("val_loss") == 0.25);

    // Saving the loaded checkpoint again reproduces the file bytes.
    fs::path path2 = fs::temp_directory_path() / "ck_roundtrip2.bin";
    training::save_checkpoint(back, path2.string());
    std::ifstream f1(path, std::ios::binary), f2(path2, std::ios::binary);
    std::string b1((std::istreambuf_iterator<char>(f1)), {});
    std::string b2((std::istreambuf_iterator<char>(f2)), {});
    CHECK(b1 == b2);
}

TEST_CASE("corrupt checkpoint rejected") {
    fs::path path = fs::temp_directory_path() / "ck_bad.bin";
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        out << "not a checkpoint";
    }
    CHECK_THROWS(training::load_checkpoint(path.string()));
    CHECK_THROWS_AS(training::load_checkpoint("/no/such/file.bin"), ConfigError);
}

TEST_CASE("train config validation") {
    training::TrainConfig tc;
    tc.lr0 = 0.0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
    tc = {};
    tc.patience = 0;
    CHECK_THROWS_AS(tc.validate(), ConfigError);
}
