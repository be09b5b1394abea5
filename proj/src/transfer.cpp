#include "aigc/transfer.hpp"

#include "aigc/errors.hpp"

namespace aigc::metrics {

ConfusionMatrix confusion_binary(const head::Parameters<float>& params,
                                 const training::EncodedDataset& data) {
    if (data.empty()) throw ShapeError("cannot evaluate on empty dataset");
    ConfusionMatrix cm;
    for (const auto& sample : data) {
        auto pred = head::forward(sample.embedding, params, head::Mode::eval);
        const bool pred_pos = pred.label != 0;
        const bool actual_pos = sample.label != 0;
        if (pred_pos && actual_pos) ++cm.tp;
        else if (pred_pos) ++cm.fp;
        else if (actual_pos) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

MetricsReport evaluate_binary(const head::Parameters<float>& params,
                              const training::EncodedDataset& data) {
    return report(confusion_binary(params, data));
}

TransferGrid transfer_grid(const std::vector<training::Checkpoint>& models,
                           const std::vector<NamedDataset>& datasets) {
    TransferGrid grid;
    for (const auto& dataset : datasets) grid.row_labels.push_back(dataset.name);
    for (const auto& model : models) grid.col_labels.push_back(model.encoder_name);
    grid.f1.assign(datasets.size(), std::vector<double>(models.size(), 0.0));
    for (std::size_t i = 0; i < datasets.size(); ++i) {
        for (std::size_t j = 0; j < models.size(); ++j) {
            if (datasets[i].encoder_name != models[j].encoder_name)
                throw ConfigError("dataset \"" + datasets[i].name +
                                  "\" is not encoded with encoder \"" + models[j].encoder_name +
                                  "\"");
            grid.f1[i][j] = f1(confusion_binary(models[j].params, *datasets[i].data));
        }
    }
    return grid;
}

}  // namespace aigc::metrics
