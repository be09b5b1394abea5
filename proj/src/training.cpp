#include "aigc/training.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>

#include "aigc/errors.hpp"
#include "aigc/rng.hpp"

namespace aigc::training {

void TrainConfig::validate() const {
    if (!(lr0 > 0.0)) throw ConfigError("lr0 must be positive");
    if (batch_size == 0) throw ConfigError("batch_size must be positive");
    if (patience == 0) throw ConfigError("patience must be >= 1");
}

std::size_t label_index(corpus::Label label, std::size_t num_classes) {
    using corpus::Label;
    if (num_classes == 2) return label == Label::HUM ? 0 : 1;
    switch (label) {
        case Label::HUM: return 0;
        case Label::GPT_WRI: return 1;
        case Label::GPT_CPL: return 2;
        case Label::GPT_POL: return 3;
    }
    return 0;
}

bool is_positive_class(std::size_t index, std::size_t) { return index != 0; }

namespace {

std::string cache_key(const corpus::LabeledCorpus& corpus, const std::string& encoder_name) {
    std::uint64_t h = fnv1a64(encoder_name);
    for (const auto& sample : corpus.samples) {
        h ^= fnv1a64(sample.id);
        h *= 0x100000001b3ULL;
        h ^= fnv1a64(sample.text);
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

bool load_cached(const std::string& path, EncodedDataset& out) {
    std::ifstream in(path, std::ios::binary);
    if (!in) return false;
    std::uint64_t count = 0;
    in.read(reinterpret_cast<char*>(&count), sizeof(count));
    if (!in) return false;
    out.clear();
    out.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        std::uint32_t rows = 0, cols = 0, label = 0;
        in.read(reinterpret_cast<char*>(&rows), sizeof(rows));
        in.read(reinterpret_cast<char*>(&cols), sizeof(cols));
        in.read(reinterpret_cast<char*>(&label), sizeof(label));
        EncodedSample sample;
        sample.label = label;
        sample.embedding.rows = rows;
        sample.embedding.cols = cols;
        sample.embedding.data.resize(static_cast<std::size_t>(rows) * cols);
        in.read(reinterpret_cast<char*>(sample.embedding.data.data()),
                static_cast<std::streamsize>(sample.embedding.data.size() * sizeof(float)));
        if (!in) return false;
        out.push_back(std::move(sample));
    }
    return true;
}

void store_cached(const std::string& path, const EncodedDataset& data) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) return;
        std::uint64_t count = data.size();
        out.write(reinterpret_cast<const char*>(&count), sizeof(count));
        for (const auto& sample : data) {
            std::uint32_t rows = static_cast<std::uint32_t>(sample.embedding.rows);
            std::uint32_t cols = static_cast<std::uint32_t>(sample.embedding.cols);
            std::uint32_t label = static_cast<std::uint32_t>(sample.label);
            out.write(reinterpret_cast<const char*>(&rows), sizeof(rows));
            out.write(reinterpret_cast<const char*>(&cols), sizeof(cols));
            out.write(reinterpret_cast<const char*>(&label), sizeof(label));
            out.write(reinterpret_cast<const char*>(sample.embedding.data.data()),
                      static_cast<std::streamsize>(sample.embedding.data.size() * sizeof(float)));
        }
    }
    std::filesystem::rename(tmp, path);
}

}  // namespace

EncodedDataset encode_corpus(const corpus::LabeledCorpus& corpus,
                             const encoding::Encoder& encoder, std::size_t num_classes,
                             const std::string& cache_dir) {
    std::string cache_path;
    if (!cache_dir.empty()) {
        std::filesystem::create_directories(cache_dir);
        cache_path = (std::filesystem::path(cache_dir) /
                      (cache_key(corpus, encoder.descriptor().name) + "-" +
                       std::to_string(num_classes) + ".emb"))
                         .string();
        EncodedDataset cached;
        if (load_cached(cache_path, cached)) return cached;
    }
    EncodedDataset data;
    data.reserve(corpus.size());
    for (const auto& sample : corpus.samples) {
        EncodedSample encoded;
        encoded.embedding = encoder.encode_text(sample.text);
        encoded.label = label_index(sample.label, num_classes);
        data.push_back(std::move(encoded));
    }
    if (!cache_path.empty()) store_cached(cache_path, data);
    return data;
}

namespace {

template <typename T>
double bce_loss_impl(const std::vector<T>& probs, std::size_t target_class) {
    if (target_class >= probs.size()) throw ShapeError("bce_loss target out of range");
    return -std::log(std::max(static_cast<double>(probs[target_class]), 1e-12));
}

}  // namespace

double bce_loss(const std::vector<double>& probs, std::size_t target_class) {
    return bce_loss_impl(probs, target_class);
}
double bce_loss(const std::vector<float>& probs, std::size_t target_class) {
    return bce_loss_impl(probs, target_class);
}

double cosine_lr(std::size_t step, std::size_t total, double lr0) {
    if (total == 0) throw std::domain_error("cosine_lr requires total >= 1");
    if (step > total) throw std::domain_error("cosine_lr step exceeds total");
    return 0.5 * lr0 *
           (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) /
                           static_cast<double>(total)));
}

bool early_stop_check(const std::vector<double>& val_losses, std::size_t patience,
                      double min_delta) {
    if (patience == 0) throw ConfigError("patience must be >= 1");
    if (val_losses.size() <= patience) return false;
    // Epochs count as improvements when they beat the best loss seen before
    // them by more than min_delta.
    std::size_t stale = 0;
    double best = std::numeric_limits<double>::infinity();
    std::vector<bool> improved(val_losses.size());
    for (std::size_t i = 0; i < val_losses.size(); ++i) {
        improved[i] = val_losses[i] < best - min_delta;
        best = std::min(best, val_losses[i]);
    }
    for (std::size_t i = val_losses.size() - patience; i < val_losses.size(); ++i)
        if (improved[i]) return false;
    (void)stale;
    return true;
}

std::pair<double, double> evaluate(const head::Parameters<float>& params,
                                   const EncodedDataset& data) {
    if (data.empty()) throw ConfigError("cannot evaluate on empty dataset");
    double loss_sum = 0.0;
    std::size_t correct = 0;
    for (const auto& sample : data) {
        auto pred = head::forward(sample.embedding, params, head::Mode::eval);
        loss_sum += bce_loss(pred.probs, sample.label);
        if (pred.label == sample.label) ++correct;
    }
    return {loss_sum / static_cast<double>(data.size()),
            static_cast<double>(correct) / static_cast<double>(data.size())};
}

namespace {

// AdamW over the flat parameter vector; `trainable` (when non-null) gates
// which indices receive updates.
TrainResult train_impl(const head::Parameters<float>& initial, const EncodedDataset& train_set,
                       const EncodedDataset& val_set, const TrainConfig& config,
                       const std::vector<bool>* trainable) {
    config.validate();
    if (train_set.empty()) throw ConfigError("training set is empty");
    if (val_set.empty()) throw ConfigError("validation set is empty");
    for (const auto& s : train_set)
        if (s.embedding.cols != initial.config.d_in)
            throw ShapeError("training sample width does not match head d_in");

    constexpr double beta1 = 0.9, beta2 = 0.999, adam_eps = 1e-8;

    TrainResult result;
    result.params = initial;
    head::Parameters<float> current = initial;
    const std::size_t n_params = current.data.size();
    std::vector<double> m(n_params, 0.0), v(n_params, 0.0);
    std::vector<float> grad(n_params, 0.0f);
    std::vector<std::size_t> order(train_set.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;

    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> val_losses;
    std::uint64_t adam_step = 0;

    for (std::size_t epoch = 0; epoch < config.max_epochs; ++epoch) {
        const double lr = config.schedule == TrainConfig::Schedule::cosine
                              ? cosine_lr(epoch, config.max_epochs, config.lr0)
                              : config.lr0;

        // Deterministic shuffle for this (seed, epoch).
        Rng shuffle_rng(config.seed ^ splitmix64_mix(epoch));
        for (std::size_t i = order.size(); i > 1; --i)
            std::swap(order[i - 1], order[shuffle_rng.next_below(i)]);

        double train_loss_sum = 0.0;
        for (std::size_t start = 0; start < order.size(); start += config.batch_size) {
            const std::size_t end = std::min(order.size(), start + config.batch_size);
            std::fill(grad.begin(), grad.end(), 0.0f);
            for (std::size_t k = start; k < end; ++k) {
                const auto& sample = train_set[order[k]];
                std::uint64_t dropout_seed =
                    splitmix64_mix(config.seed ^ splitmix64_mix(epoch * 0x100000001ULL + k));
                head::EmbeddingView<float> view{sample.embedding.data.data(),
                                                sample.embedding.rows, sample.embedding.cols};
                train_loss_sum += head::forward_backward(view, current, sample.label,
                                                         head::Mode::train, dropout_seed,
                                                         grad.data());
            }
            const float inv_batch = 1.0f / static_cast<float>(end - start);
            ++adam_step;
            const double bc1 = 1.0 - std::pow(beta1, static_cast<double>(adam_step));
            const double bc2 = 1.0 - std::pow(beta2, static_cast<double>(adam_step));
            for (std::size_t i = 0; i < n_params; ++i) {
                if (trainable && !(*trainable)[i]) continue;
                const double g = static_cast<double>(grad[i]) * inv_batch;
                m[i] = beta1 * m[i] + (1.0 - beta1) * g;
                v[i] = beta2 * v[i] + (1.0 - beta2) * g * g;
                const double update = (m[i] / bc1) / (std::sqrt(v[i] / bc2) + adam_eps);
                double value = static_cast<double>(current.data[i]);
                value -= lr * update + lr * config.weight_decay * value;
                current.data[i] = static_cast<float>(value);
            }
        }

        auto [val_loss, val_acc] = evaluate(current, val_set);
        val_losses.push_back(val_loss);
        result.history.epochs.push_back({train_loss_sum / static_cast<double>(order.size()),
                                         val_loss, val_acc, lr});
        if (val_loss < best_val) {
            best_val = val_loss;
            result.params = current;
        }
        if (early_stop_check(val_losses, config.patience, config.min_delta)) break;
    }
    if (result.history.epochs.empty()) result.params = initial;
    return result;
}

}  // namespace

TrainResult train(const head::Parameters<float>& params, const EncodedDataset& train_set,
                  const EncodedDataset& val_set, const TrainConfig& config) {
    return train_impl(params, train_set, val_set, config, nullptr);
}

TrainResult finetune_last_layer(const head::Parameters<float>& params,
                                const EncodedDataset& train_set, const EncodedDataset& val_set,
                                const TrainConfig& config) {
    std::vector<bool> trainable(params.data.size(), false);
    for (const auto& section : params.sections) {
        if (section.name.rfind("dense", 0) != 0) continue;
        std::fill(trainable.begin() + section.offset,
                  trainable.begin() + section.offset + section.size(), true);
    }
    return train_impl(params, train_set, val_set, config, &trainable);
}

TrainResult finetune_all(const head::Parameters<float>& params, const EncodedDataset& train_set,
                         const EncodedDataset& val_set, const TrainConfig& config) {
    return train_impl(params, train_set, val_set, config, nullptr);
}

}  // namespace aigc::training
