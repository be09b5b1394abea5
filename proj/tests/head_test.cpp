#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numeric>
#include <vector>

#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"
#include "aigc/head.hpp"
#include "aigc/rng.hpp"

using namespace aigc;

namespace {

head::HeadConfig tiny_config() {
    head::HeadConfig cfg;
    cfg.d_in = 8;
    cfg.hidden = 4;
    cfg.num_classes = 2;
    cfg.dropout_p = 0.0;
    return cfg;
}

std::vector<double> random_input(std::size_t rows, std::size_t cols, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<double> v(rows * cols);
    for (auto& x : v) x = rng.uniform(-1.0, 1.0);
    return v;
}

// Brute-force parameter enumeration: walk the layout the way a hand count
// would, one matrix cell at a time.
std::size_t enumerate_params(const head::HeadConfig& cfg) {
    std::size_t total = 0;
    for (const auto& s : head::parameter_layout(cfg)) {
        std::size_t cells = 0;
        for (std::size_t r = 0; r < s.rows; ++r)
            for (std::size_t c = 0; c < s.cols; ++c) ++cells;
        total += cells;
    }
    return total;
}

}  // namespace

TEST_CASE("parameter budget at published defaults") {
    head::HeadConfig cfg;  // d_in 1024, hidden 256, bidirectional, attention, 2 classes
    std::size_t n = head::param_count(cfg);
    CHECK(n == 4205570);
    CHECK(n >= 4150000);
    CHECK(n <= 4260000);
    CHECK(n == enumerate_params(cfg));
    CHECK(cfg.feature_dim() == 1024);
}

TEST_CASE("plain recurrent variant drops exactly the context vectors") {
    head::HeadConfig attn;
    head::HeadConfig plain;
    plain.use_attention = false;
    plain.variant = head::Variant::recurrent_plain;
    CHECK(head::param_count(attn) - head::param_count(plain) == 2 * (2 * attn.hidden));
}

TEST_CASE("param_count equals enumeration across configs") {
    for (std::size_t d : {8ul, 32ul}) {
        for (std::size_t h : {4ul, 16ul}) {
            for (bool bidir : {true, false}) {
                for (auto variant : {head::Variant::recurrent_attn, head::Variant::recurrent_plain,
                                     head::Variant::mlp_pool}) {
                    head::HeadConfig cfg;
                    cfg.d_in = d;
                    cfg.hidden = h;
                    cfg.bidirectional = bidir;
                    cfg.variant = variant;
                    cfg.use_attention = variant == head::Variant::recurrent_attn;
                    CHECK(head::param_count(cfg) == enumerate_params(cfg));
                }
            }
        }
    }
}

TEST_CASE("config validation") {
    head::HeadConfig cfg;
    cfg.hidden = 0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.num_classes = 1;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.dropout_p = 1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = {};
    cfg.variant = head::Variant::recurrent_plain;  // still use_attention=true
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("initialization is deterministic, bounded, dense bias zero") {
    auto cfg = tiny_config();
    auto a = head::init_head<float>(cfg, 99);
    auto b = head::init_head<float>(cfg, 99);
    CHECK(a.data == b.data);
    auto c = head::init_head<float>(cfg, 100);
    CHECK(a.data != c.data);

    float bound = 1.0f / std::sqrt(float(cfg.hidden));
    for (float v : a.data) CHECK(std::abs(v) <= bound + 1e-7f);
    const auto& dense_b = a.section("dense.b");
    for (std::size_t i = 0; i < dense_b.size(); ++i) CHECK(a.view("dense.b")[i] == 0.0f);
}

TEST_CASE("attention pooling: softmax of (ln 3, 0) weighs 0.75/0.25") {
    // width 1, two steps; context [1] makes the scores equal the inputs.
    double h[2] = {std::log(3.0), 0.0};
    double context = 1.0;
    double pooled = 0.0;
    double weights[2];
    head::attention_pool(h, 2, 1, &context, &pooled, weights);
    CHECK(weights[0] == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(weights[1] == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pooled == doctest::Approx(0.75 * std::log(3.0)));
}

TEST_CASE("forward yields a probability distribution and is deterministic in eval") {
    auto cfg = tiny_config();
    auto params = head::init_head<float>(cfg, 5);
    auto enc = encoding::make_hash_encoder(1, cfg.d_in);
    auto e = enc->encode_text("some probe words for the head");
    auto p1 = head::forward(e, params, head::Mode::eval);
    auto p2 = head::forward(e, params, head::Mode::eval);
    CHECK(p1.probs == p2.probs);
    double sum = std::accumulate(p1.probs.begin(), p1.probs.end(), 0.0);
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(p1.feature.size() == cfg.feature_dim());
    CHECK(p1.feature == head::extract_features(e, params));
}

TEST_CASE("dropout only acts in train mode and follows the seed") {
    auto cfg = tiny_config();
    cfg.dropout_p = 0.5;
    auto params = head::init_head<float>(cfg, 5);
    auto enc = encoding::make_hash_encoder(1, cfg.d_in);
    auto e = enc->encode_text("dropout determinism probe");
    auto t1 = head::forward(e, params, head::Mode::train, 42);
    auto t2 = head::forward(e, params, head::Mode::train, 42);
    CHECK(t1.probs == t2.probs);
    auto t3 = head::forward(e, params, head::Mode::train, 43);
    CHECK(t1.probs != t3.probs);  // different mask
}

TEST_CASE("all variants produce valid predictions") {
    auto enc = encoding::make_hash_encoder(1, 8);
    auto e = enc->encode_text("variant smoke probe text");
    for (auto variant : {head::Variant::recurrent_attn, head::Variant::recurrent_plain,
                         head::Variant::mlp_pool}) {
        auto cfg = tiny_config();
        cfg.variant = variant;
        cfg.use_attention = variant == head::Variant::recurrent_attn;
        auto params = head::init_head<float>(cfg, 3);
        auto p = head::forward(e, params, head::Mode::eval);
        double sum = std::accumulate(p.probs.begin(), p.probs.end(), 0.0);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-5));
    }
}

TEST_CASE("analytic gradients match central finite differences") {
    for (auto variant : {head::Variant::recurrent_attn, head::Variant::recurrent_plain,
                         head::Variant::mlp_pool}) {
        auto cfg = tiny_config();
        cfg.variant = variant;
        cfg.use_attention = variant == head::Variant::recurrent_attn;
        auto params = head::init_head<double>(cfg, 7);
        auto input = random_input(5, cfg.d_in, 13);
        head::EmbeddingView<double> view{input.data(), 5, cfg.d_in};

        std::vector<double> grad(params.data.size(), 0.0);
        head::forward_backward(view, params, std::size_t(1), head::Mode::train, 0, grad.data());

        const double step = 1e-5;
        Rng pick(31);
        for (int probe = 0; probe < 60; ++probe) {
            std::size_t i = pick.next_below(params.data.size());
            double saved = params.data[i];
            params.data[i] = saved + step;
            std::vector<double> g_unused(params.data.size(), 0.0);
            double up = head::forward_backward(view, params, std::size_t(1), head::Mode::train, 0,
                                               g_unused.data());
            params.data[i] = saved - step;
            std::fill(g_unused.begin(), g_unused.end(), 0.0);
            double down = head::forward_backward(view, params, std::size_t(1), head::Mode::train, 0,
                                                 g_unused.data());
            params.data[i] = saved;
            double numeric = (up - down) / (2.0 * step);
            double denom = std::max({std::abs(numeric), std::abs(grad[i]), 1e-8});
            CHECK(std::abs(numeric - grad[i]) / denom < 1e-4);
        }
    }
}

TEST_CASE("variant names round-trip") {
    for (auto v : {head::Variant::recurrent_attn, head::Variant::recurrent_plain,
                   head::Variant::mlp_pool}) {
        CHECK(head::variant_from_string(head::to_string(v)) == v);
    }
    CHECK_THROWS_AS(head::variant_from_string("bogus"), ConfigError);
}
