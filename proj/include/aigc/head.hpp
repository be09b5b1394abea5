#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"
#include "aigc/kernels.hpp"
#include "aigc/rng.hpp"

// Classification head: two stacked bidirectional LSTM layers, attention
// pooling after each, concatenation, dropout, dense projection, softmax.
// Everything is templated on the scalar type; training runs float, the
// finite-difference gradient check instantiates double.

namespace aigc::head {

enum class Variant { recurrent_attn, recurrent_plain, mlp_pool };

std::string to_string(Variant v);
Variant variant_from_string(const std::string& s);

struct HeadConfig {
    std::size_t d_in = 1024;
    std::size_t hidden = 256;
    std::size_t num_classes = 2;
    double dropout_p = 0.5;
    bool bidirectional = true;
    bool use_attention = true;
    Variant variant = Variant::recurrent_attn;

    std::size_t directions() const { return bidirectional ? 2 : 1; }
    // Width of one layer's pooled output and of each timestep of h1/h2.
    std::size_t layer_width() const { return directions() * hidden; }
    std::size_t feature_dim() const { return 2 * layer_width(); }

    void validate() const {
        if (hidden == 0) throw ConfigError("hidden must be positive");
        if (num_classes < 2) throw ConfigError("num_classes must be >= 2");
        if (!(dropout_p >= 0.0 && dropout_p < 1.0)) throw ConfigError("dropout_p must lie in [0,1)");
        if (variant == Variant::recurrent_plain && use_attention)
            throw ConfigError("recurrent_plain variant requires use_attention=false");
        if (variant == Variant::recurrent_attn && !use_attention)
            throw ConfigError("recurrent_attn variant requires use_attention=true");
    }
};

struct Section {
    std::string name;
    std::size_t offset = 0;
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::size_t size() const { return rows * cols; }
};

// Fixed parameter layout; initialization, checkpointing, and the FT-L update
// mask all follow this order.
std::vector<Section> parameter_layout(const HeadConfig& config);

std::size_t param_count(const HeadConfig& config);

template <typename T>
struct Parameters {
    HeadConfig config;
    std::vector<Section> sections;
    std::vector<T> data;

    const Section& section(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return s;
        throw ShapeError("no parameter section named " + std::string(name));
    }
    T* view(std::string_view name) { return data.data() + section(name).offset; }
    const T* view(std::string_view name) const { return data.data() + section(name).offset; }
    bool has(std::string_view name) const {
        for (const auto& s : sections)
            if (s.name == name) return true;
        return false;
    }
};

template <typename T>
struct Prediction {
    std::vector<T> probs;
    std::size_t label = 0;
    std::vector<T> feature;  // r1 (+) r2, pre-dropout
};

enum class Mode { train, eval };

namespace detail {

template <typename T>
T sigmoid(T x) {
    return T(1) / (T(1) + std::exp(-x));
}

// Activations of one LSTM direction, kept for backpropagation. All matrices
// are indexed by the original time position, not processing order.
template <typename T>
struct DirCache {
    std::vector<T> gates;   // t x 4H, post-activation [i f g o]
    std::vector<T> cell;    // t x H
    std::vector<T> tanh_c;  // t x H
    std::vector<T> h;       // t x H
};

template <typename T>
struct LayerCache {
    DirCache<T> dir[2];
    std::vector<T> concat;   // t x (dirs*H), both directions side by side
    std::vector<T> weights;  // attention weights, length t
    std::vector<T> pooled;   // dirs*H
};

template <typename T>
struct ForwardCache {
    std::size_t steps = 0;
    LayerCache<T> layer1, layer2;
    std::vector<T> feature;  // pre-dropout
    std::vector<T> dropout_mask;
    std::vector<T> dropped;
    std::vector<T> probs;
    // mlp_pool only
    std::vector<T> pooled_input;
    std::vector<T> mlp_pre;
};

template <typename T>
struct DirParams {
    const T* wx;  // 4H x in
    const T* wh;  // 4H x H
    const T* bi;  // 4H
    const T* bh;  // 4H
};

template <typename T>
DirParams<T> dir_params(const Parameters<T>& p, const std::string& prefix) {
    return {p.view(prefix + ".wx"), p.view(prefix + ".wh"), p.view(prefix + ".bi"),
            p.view(prefix + ".bh")};
}

// Runs one direction over `steps` rows of `input` (row stride in_width).
// forward_dir=false walks the sequence back to front; outputs still land at
// their original time index.
template <typename T>
void run_direction(const T* input, std::size_t steps, std::size_t in_width, std::size_t hidden,
                   const DirParams<T>& p, bool forward_dir, DirCache<T>& cache) {
    const std::size_t g4 = 4 * hidden;
    cache.gates.assign(steps * g4, T(0));
    cache.cell.assign(steps * hidden, T(0));
    cache.tanh_c.assign(steps * hidden, T(0));
    cache.h.assign(steps * hidden, T(0));
    std::vector<T> h_prev(hidden, T(0)), c_prev(hidden, T(0)), z(g4);
    for (std::size_t step = 0; step < steps; ++step) {
        std::size_t t = forward_dir ? step : steps - 1 - step;
        const T* x = input + t * in_width;
        for (std::size_t j = 0; j < g4; ++j) z[j] = p.bi[j] + p.bh[j];
        kernels::gemv_add(p.wx, x, z.data(), g4, in_width);
        kernels::gemv_add(p.wh, h_prev.data(), z.data(), g4, hidden);
        T* gates = cache.gates.data() + t * g4;
        T* c = cache.cell.data() + t * hidden;
        T* tc = cache.tanh_c.data() + t * hidden;
        T* h = cache.h.data() + t * hidden;
        for (std::size_t j = 0; j < hidden; ++j) {
            T gi = sigmoid(z[j]);
            T gf = sigmoid(z[hidden + j]);
            T gg = std::tanh(z[2 * hidden + j]);
            T go = sigmoid(z[3 * hidden + j]);
            gates[j] = gi;
            gates[hidden + j] = gf;
            gates[2 * hidden + j] = gg;
            gates[3 * hidden + j] = go;
            c[j] = gf * c_prev[j] + gi * gg;
            tc[j] = std::tanh(c[j]);
            h[j] = go * tc[j];
        }
        std::copy(h, h + hidden, h_prev.begin());
        std::copy(c, c + hidden, c_prev.begin());
    }
}

// BPTT for one direction. d_h holds dL/dh at each original time index for
// this direction (row stride hidden); gradients are accumulated into the
// grad views and d_input (row stride in_width).
template <typename T>
void backprop_direction(const T* input, std::size_t steps, std::size_t in_width,
                        std::size_t hidden, const DirParams<T>& p, bool forward_dir,
                        const DirCache<T>& cache, const T* d_h, T* d_input, T* d_wx, T* d_wh,
                        T* d_bi, T* d_bh) {
    const std::size_t g4 = 4 * hidden;
    std::vector<T> dh_carry(hidden, T(0)), dc_carry(hidden, T(0)), dz(g4);
    for (std::size_t step_back = 0; step_back < steps; ++step_back) {
        // Reverse of processing order.
        std::size_t step = steps - 1 - step_back;
        std::size_t t = forward_dir ? step : steps - 1 - step;
        std::size_t t_prev = forward_dir ? t - 1 : t + 1;
        bool has_prev = step > 0;
        const T* gates = cache.gates.data() + t * g4;
        const T* tc = cache.tanh_c.data() + t * hidden;
        const T* c_prev = has_prev ? cache.cell.data() + t_prev * hidden : nullptr;
        const T* h_prev = has_prev ? cache.h.data() + t_prev * hidden : nullptr;
        for (std::size_t j = 0; j < hidden; ++j) {
            T gi = gates[j], gf = gates[hidden + j], gg = gates[2 * hidden + j],
              go = gates[3 * hidden + j];
            T dh = d_h[t * hidden + j] + dh_carry[j];
            T dc = dc_carry[j] + dh * go * (T(1) - tc[j] * tc[j]);
            T d_go = dh * tc[j];
            T cp = has_prev ? c_prev[j] : T(0);
            dz[j] = dc * gg * gi * (T(1) - gi);
            dz[hidden + j] = dc * cp * gf * (T(1) - gf);
            dz[2 * hidden + j] = dc * gi * (T(1) - gg * gg);
            dz[3 * hidden + j] = d_go * go * (T(1) - go);
            dc_carry[j] = dc * gf;
        }
        const T* x = input + t * in_width;
        for (std::size_t r = 0; r < g4; ++r) {
            kernels::axpy(dz[r], x, d_wx + r * in_width, in_width);
            if (has_prev) kernels::axpy(dz[r], h_prev, d_wh + r * hidden, hidden);
            d_bi[r] += dz[r];
            d_bh[r] += dz[r];
        }
        kernels::gemv_t_add(p.wx, dz.data(), d_input + t * in_width, g4, in_width);
        std::fill(dh_carry.begin(), dh_carry.end(), T(0));
        kernels::gemv_t_add(p.wh, dz.data(), dh_carry.data(), g4, hidden);
    }
}

}  // namespace detail

// Attention pooling: scores H_t . context, softmax weights, weighted sum.
template <typename T>
void attention_pool(const T* h, std::size_t steps, std::size_t width, const T* context, T* pooled,
                    T* weights) {
    T max_score = -std::numeric_limits<T>::infinity();
    for (std::size_t t = 0; t < steps; ++t) {
        weights[t] = kernels::dot(h + t * width, context, width);
        max_score = std::max(max_score, weights[t]);
    }
    T total = T(0);
    for (std::size_t t = 0; t < steps; ++t) {
        weights[t] = std::exp(weights[t] - max_score);
        total += weights[t];
    }
    std::fill(pooled, pooled + width, T(0));
    for (std::size_t t = 0; t < steps; ++t) {
        weights[t] /= total;
        kernels::axpy(weights[t], h + t * width, pooled, width);
    }
}

template <typename T>
void attention_pool_backward(const T* h, std::size_t steps, std::size_t width, const T* context,
                             const T* weights, const T* d_pooled, T* d_h, T* d_context) {
    std::vector<T> dw(steps);
    T weighted_sum = T(0);
    for (std::size_t t = 0; t < steps; ++t) {
        dw[t] = kernels::dot(h + t * width, d_pooled, width);
        kernels::axpy(weights[t], d_pooled, d_h + t * width, width);
        weighted_sum += weights[t] * dw[t];
    }
    for (std::size_t t = 0; t < steps; ++t) {
        T ds = weights[t] * (dw[t] - weighted_sum);
        kernels::axpy(ds, h + t * width, d_context, width);
        kernels::axpy(ds, context, d_h + t * width, width);
    }
}

template <typename T>
Parameters<T> init_head(const HeadConfig& config, std::uint64_t seed) {
    config.validate();
    Parameters<T> params;
    params.config = config;
    params.sections = parameter_layout(config);
    std::size_t total = 0;
    for (const auto& s : params.sections) total = std::max(total, s.offset + s.size());
    params.data.resize(total);
    Rng rng(seed);
    const double bound = 1.0 / std::sqrt(static_cast<double>(config.hidden));
    for (auto& value : params.data) value = static_cast<T>(rng.uniform(-bound, bound));
    const Section& bias = params.section("dense.b");
    std::fill(params.data.begin() + bias.offset, params.data.begin() + bias.offset + bias.size(),
              T(0));
    return params;
}

template <typename T>
struct EmbeddingView {
    const T* data;
    std::size_t rows;
    std::size_t cols;
};

inline EmbeddingView<float> as_view(const encoding::EmbeddingSequence& e) {
    return {e.data.data(), e.rows, e.cols};
}

template <typename T>
Prediction<T> forward_cached(const EmbeddingView<T>& input, const Parameters<T>& params, Mode mode,
                             std::uint64_t dropout_seed, detail::ForwardCache<T>& cache) {
    const HeadConfig& cfg = params.config;
    if (input.cols != cfg.d_in) throw ShapeError("embedding width does not match head d_in");
    if (input.rows == 0) throw ShapeError("empty embedding sequence");
    const std::size_t steps = input.rows;
    cache.steps = steps;
    const std::size_t feat = cfg.feature_dim();
    cache.feature.assign(feat, T(0));

    if (cfg.variant == Variant::mlp_pool) {
        cache.pooled_input.assign(cfg.d_in, T(0));
        for (std::size_t t = 0; t < steps; ++t)
            kernels::axpy(T(1) / T(steps), input.data + t * cfg.d_in, cache.pooled_input.data(),
                          cfg.d_in);
        cache.mlp_pre.assign(feat, T(0));
        const T* w1 = params.view("mlp.w1");
        const T* b1 = params.view("mlp.b1");
        std::copy(b1, b1 + feat, cache.mlp_pre.begin());
        kernels::gemv_add(w1, cache.pooled_input.data(), cache.mlp_pre.data(), feat, cfg.d_in);
        for (std::size_t j = 0; j < feat; ++j) cache.feature[j] = std::tanh(cache.mlp_pre[j]);
    } else {
        const std::size_t width = cfg.layer_width();
        auto run_layer = [&](const T* layer_input, std::size_t in_width, const std::string& prefix,
                             detail::LayerCache<T>& lc) {
            detail::run_direction(layer_input, steps, in_width, cfg.hidden,
                                  detail::dir_params(params, prefix + "f"), true, lc.dir[0]);
            if (cfg.bidirectional)
                detail::run_direction(layer_input, steps, in_width, cfg.hidden,
                                      detail::dir_params(params, prefix + "b"), false, lc.dir[1]);
            lc.concat.assign(steps * width, T(0));
            for (std::size_t t = 0; t < steps; ++t) {
                std::copy(lc.dir[0].h.begin() + t * cfg.hidden,
                          lc.dir[0].h.begin() + (t + 1) * cfg.hidden,
                          lc.concat.begin() + t * width);
                if (cfg.bidirectional)
                    std::copy(lc.dir[1].h.begin() + t * cfg.hidden,
                              lc.dir[1].h.begin() + (t + 1) * cfg.hidden,
                              lc.concat.begin() + t * width + cfg.hidden);
            }
            lc.pooled.assign(width, T(0));
            if (cfg.use_attention) {
                lc.weights.assign(steps, T(0));
                attention_pool(lc.concat.data(), steps, width,
                               params.view(prefix == "l1" ? "attn1" : "attn2"), lc.pooled.data(),
                               lc.weights.data());
            } else {
                // Last timestep of each direction (position T-1 forward,
                // position 0 backward).
                std::copy(lc.concat.begin() + (steps - 1) * width,
                          lc.concat.begin() + (steps - 1) * width + cfg.hidden, lc.pooled.begin());
                if (cfg.bidirectional)
                    std::copy(lc.concat.begin() + cfg.hidden, lc.concat.begin() + width,
                              lc.pooled.begin() + cfg.hidden);
            }
        };
        run_layer(input.data, cfg.d_in, "l1", cache.layer1);
        run_layer(cache.layer1.concat.data(), width, "l2", cache.layer2);
        std::copy(cache.layer1.pooled.begin(), cache.layer1.pooled.end(), cache.feature.begin());
        std::copy(cache.layer2.pooled.begin(), cache.layer2.pooled.end(),
                  cache.feature.begin() + width);
    }

    // Inverted dropout: train scales kept units by 1/(1-p), eval passes through.
    cache.dropout_mask.assign(feat, T(1));
    if (mode == Mode::train && cfg.dropout_p > 0.0) {
        Rng rng(dropout_seed);
        const T keep_scale = T(1) / static_cast<T>(1.0 - cfg.dropout_p);
        for (auto& m : cache.dropout_mask)
            m = rng.next_double() < cfg.dropout_p ? T(0) : keep_scale;
    }
    cache.dropped.resize(feat);
    for (std::size_t j = 0; j < feat; ++j) cache.dropped[j] = cache.feature[j] * cache.dropout_mask[j];

    const T* dense_w = params.view("dense.w");
    const T* dense_b = params.view("dense.b");
    const std::size_t classes = cfg.num_classes;
    cache.probs.assign(classes, T(0));
    T max_logit = -std::numeric_limits<T>::infinity();
    for (std::size_t c = 0; c < classes; ++c) {
        cache.probs[c] = dense_b[c] + kernels::dot(dense_w + c * feat, cache.dropped.data(), feat);
        max_logit = std::max(max_logit, cache.probs[c]);
    }
    T total = T(0);
    for (auto& p : cache.probs) {
        p = std::exp(p - max_logit);
        total += p;
    }
    for (auto& p : cache.probs) p /= total;

    Prediction<T> prediction;
    prediction.probs = cache.probs;
    prediction.feature = cache.feature;
    prediction.label = static_cast<std::size_t>(
        std::max_element(cache.probs.begin(), cache.probs.end()) - cache.probs.begin());
    return prediction;
}

template <typename T>
Prediction<T> forward(const EmbeddingView<T>& input, const Parameters<T>& params, Mode mode,
                      std::uint64_t dropout_seed = 0) {
    detail::ForwardCache<T> cache;
    return forward_cached(input, params, mode, dropout_seed, cache);
}

inline Prediction<float> forward(const encoding::EmbeddingSequence& input,
                                 const Parameters<float>& params, Mode mode,
                                 std::uint64_t dropout_seed = 0) {
    return forward(as_view(input), params, mode, dropout_seed);
}

template <typename T>
std::vector<T> extract_features(const EmbeddingView<T>& input, const Parameters<T>& params) {
    return forward(input, params, Mode::eval).feature;
}

inline std::vector<float> extract_features(const encoding::EmbeddingSequence& input,
                                           const Parameters<float>& params) {
    return extract_features(as_view(input), params);
}

// Cross-entropy against a one-hot target, with analytic gradients for every
// parameter. Returns the loss; gradient (same layout as params.data) is
// accumulated into `grad`.
template <typename T>
T forward_backward(const EmbeddingView<T>& input, const Parameters<T>& params,
                   std::size_t target_class, Mode mode, std::uint64_t dropout_seed, T* grad) {
    const HeadConfig& cfg = params.config;
    if (target_class >= cfg.num_classes) throw ShapeError("target class out of range");
    detail::ForwardCache<T> cache;
    forward_cached(input, params, mode, dropout_seed, cache);

    const T eps = T(1e-12);
    T loss = -std::log(std::max(cache.probs[target_class], eps));

    const std::size_t feat = cfg.feature_dim();
    const std::size_t classes = cfg.num_classes;
    const std::size_t steps = cache.steps;

    Parameters<T> gview;  // grad indexed through the same layout
    gview.config = cfg;
    gview.sections = params.sections;

    auto gsec = [&](std::string_view name) { return grad + params.section(name).offset; };

    // Softmax + CE: dlogits = p - y.
    std::vector<T> dlogits(cache.probs);
    dlogits[target_class] -= T(1);
    const T* dense_w = params.view("dense.w");
    T* d_dense_w = gsec("dense.w");
    T* d_dense_b = gsec("dense.b");
    std::vector<T> d_feature(feat, T(0));
    for (std::size_t c = 0; c < classes; ++c) {
        kernels::axpy(dlogits[c], cache.dropped.data(), d_dense_w + c * feat, feat);
        d_dense_b[c] += dlogits[c];
        kernels::axpy(dlogits[c], dense_w + c * feat, d_feature.data(), feat);
    }
    for (std::size_t j = 0; j < feat; ++j) d_feature[j] *= cache.dropout_mask[j];

    if (cfg.variant == Variant::mlp_pool) {
        std::vector<T> d_pre(feat);
        for (std::size_t j = 0; j < feat; ++j)
            d_pre[j] = d_feature[j] * (T(1) - cache.feature[j] * cache.feature[j]);
        T* d_w1 = gsec("mlp.w1");
        T* d_b1 = gsec("mlp.b1");
        for (std::size_t r = 0; r < feat; ++r) {
            kernels::axpy(d_pre[r], cache.pooled_input.data(), d_w1 + r * cfg.d_in, cfg.d_in);
            d_b1[r] += d_pre[r];
        }
        return loss;
    }

    const std::size_t width = cfg.layer_width();
    std::vector<T> d_h2(steps * width, T(0));
    std::vector<T> d_h1(steps * width, T(0));

    auto pool_backward = [&](detail::LayerCache<T>& lc, const T* d_pooled, T* d_concat,
                             const char* attn_name) {
        if (cfg.use_attention) {
            attention_pool_backward(lc.concat.data(), steps, width, params.view(attn_name),
                                    lc.weights.data(), d_pooled, d_concat, gsec(attn_name));
        } else {
            for (std::size_t j = 0; j < cfg.hidden; ++j)
                d_concat[(steps - 1) * width + j] += d_pooled[j];
            if (cfg.bidirectional)
                for (std::size_t j = 0; j < cfg.hidden; ++j)
                    d_concat[cfg.hidden + j] += d_pooled[cfg.hidden + j];
        }
    };
    pool_backward(cache.layer1, d_feature.data(), d_h1.data(), "attn1");
    pool_backward(cache.layer2, d_feature.data() + width, d_h2.data(), "attn2");

    // Layer 2 BPTT; its input gradient lands on h1.
    auto layer_backward = [&](const T* layer_input, std::size_t in_width,
                              const std::string& prefix, detail::LayerCache<T>& lc, const T* d_cat,
                              T* d_input) {
        std::vector<T> d_dir(steps * cfg.hidden);
        for (std::size_t dir = 0; dir < cfg.directions(); ++dir) {
            for (std::size_t t = 0; t < steps; ++t)
                std::copy(d_cat + t * width + dir * cfg.hidden,
                          d_cat + t * width + (dir + 1) * cfg.hidden, d_dir.begin() + t * cfg.hidden);
            std::string dp = prefix + (dir == 0 ? "f" : "b");
            detail::backprop_direction(layer_input, steps, in_width, cfg.hidden,
                                       detail::dir_params(params, dp), dir == 0, lc.dir[dir],
                                       d_dir.data(), d_input, gsec(dp + ".wx"), gsec(dp + ".wh"),
                                       gsec(dp + ".bi"), gsec(dp + ".bh"));
        }
    };

    layer_backward(cache.layer1.concat.data(), width, "l2", cache.layer2, d_h2.data(), d_h1.data());
    std::vector<T> d_input_sink(steps * cfg.d_in, T(0));  // embeddings are frozen
    layer_backward(input.data, cfg.d_in, "l1", cache.layer1, d_h1.data(), d_input_sink.data());

    return loss;
}

}  // namespace aigc::head
