#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "aigc/corpus.hpp"
#include "aigc/encoding.hpp"
#include "aigc/head.hpp"

namespace aigc::training {

struct TrainConfig {
    double lr0 = 2e-4;
    std::size_t batch_size = 256;
    std::size_t max_epochs = 20;
    std::size_t patience = 5;
    double min_delta = 1e-4;
    std::uint64_t seed = 0;
    double weight_decay = 1e-2;
    enum class Schedule { cosine, constant } schedule = Schedule::cosine;

    void validate() const;
};

struct EpochRecord {
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_accuracy = 0.0;
    double lr = 0.0;
};

struct TrainHistory {
    std::vector<EpochRecord> epochs;
};

struct EncodedSample {
    encoding::EmbeddingSequence embedding;
    std::size_t label = 0;
};

using EncodedDataset = std::vector<EncodedSample>;

// Class index for a corpus label: binary mode folds all GPT tasks into class
// 1 (GPT positive, HUM negative); 4-ary keeps HUM/WRI/CPL/POL apart.
std::size_t label_index(corpus::Label label, std::size_t num_classes);
bool is_positive_class(std::size_t label_index, std::size_t num_classes);

// Encodes every sample with the frozen encoder. When cache_dir is non-empty
// the result is persisted keyed by (encoder name, corpus content hash) and
// reloaded on later calls.
EncodedDataset encode_corpus(const corpus::LabeledCorpus& corpus, const encoding::Encoder& encoder,
                             std::size_t num_classes, const std::string& cache_dir = "");

// K-class cross entropy against a one-hot target with 1e-12 clamping.
double bce_loss(const std::vector<double>& probs, std::size_t target_class);
double bce_loss(const std::vector<float>& probs, std::size_t target_class);

// lr(t) = 0.5 * lr0 * (1 + cos(pi t / T)), epoch-level steps.
double cosine_lr(std::size_t step, std::size_t total, double lr0);

// True when the last `patience` epochs all failed to improve the running
// best validation loss by more than min_delta.
bool early_stop_check(const std::vector<double>& val_losses, std::size_t patience,
                      double min_delta);

struct TrainResult {
    head::Parameters<float> params;
    TrainHistory history;
};

// AdamW (beta1 0.9, beta2 0.999, eps 1e-8, decoupled decay), deterministic
// shuffling per (seed, epoch), early stop, best-validation-loss selection.
TrainResult train(const head::Parameters<float>& params, const EncodedDataset& train_set,
                  const EncodedDataset& val_set, const TrainConfig& config);

// FT-L: identical loop but only the dense layer is updated.
TrainResult finetune_last_layer(const head::Parameters<float>& params,
                                const EncodedDataset& train_set, const EncodedDataset& val_set,
                                const TrainConfig& config);

// FT-A: the whole head is trainable (the encoder stays frozen either way).
TrainResult finetune_all(const head::Parameters<float>& params, const EncodedDataset& train_set,
                         const EncodedDataset& val_set, const TrainConfig& config);

// Mean eval-mode loss and accuracy over a dataset.
std::pair<double, double> evaluate(const head::Parameters<float>& params,
                                   const EncodedDataset& data);

}  // namespace aigc::training
