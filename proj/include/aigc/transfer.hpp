#pragma once

#include <string>
#include <vector>

#include "aigc/checkpoint.hpp"
#include "aigc/metrics.hpp"
#include "aigc/training.hpp"

namespace aigc::metrics {

struct NamedDataset {
    std::string name;
    std::string encoder_name;
    const training::EncodedDataset* data = nullptr;
};

// Evaluates every checkpoint on every dataset. Each dataset must be encoded
// with the checkpoint's declared encoder.
TransferGrid transfer_grid(const std::vector<training::Checkpoint>& models,
                           const std::vector<NamedDataset>& datasets);

// Binary report of one model over one encoded dataset (GPT = positive).
MetricsReport evaluate_binary(const head::Parameters<float>& params,
                              const training::EncodedDataset& data);

ConfusionMatrix confusion_binary(const head::Parameters<float>& params,
                                 const training::EncodedDataset& data);

}  // namespace aigc::metrics
