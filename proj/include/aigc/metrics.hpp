#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace aigc::metrics {

struct ConfusionMatrix {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

struct MetricsReport {
    double tpr = 0.0, tnr = 0.0, accuracy = 0.0, f1 = 0.0;
    std::size_t n = 0;
};

// Binary confusion counts with an explicit positive label.
template <typename Label>
ConfusionMatrix confusion(const std::vector<Label>& predicted, const std::vector<Label>& actual,
                          const Label& positive);

// K x K count matrix; counts[actual][predicted].
std::vector<std::vector<std::size_t>> confusion_multiclass(
    const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& actual,
    std::size_t num_classes);

double tpr(const ConfusionMatrix& cm);
double tnr(const ConfusionMatrix& cm);
double accuracy(const ConfusionMatrix& cm);

// Harmonic mean of precision and recall; 0 when tp = 0 with fp or fn present.
double f1(const ConfusionMatrix& cm);

MetricsReport report(const ConfusionMatrix& cm);

// Per-class one-vs-rest TPR plus overall accuracy for the 4-ary mode.
struct MulticlassReport {
    std::vector<double> per_class_tpr;
    double accuracy = 0.0;
    std::size_t n = 0;
};
MulticlassReport report_multiclass(const std::vector<std::vector<std::size_t>>& counts);

// Cross-domain transfer grid: grid[i][j] = F1 of model j on dataset i.
struct TransferGrid {
    std::vector<std::string> row_labels;  // datasets
    std::vector<std::string> col_labels;  // models
    std::vector<std::vector<double>> f1;
};

// Spearman rank correlation with average ranks for ties.
double spearman(const std::vector<double>& x, const std::vector<double>& y);

std::string to_json(const MetricsReport& r);
std::string to_table(const MetricsReport& r);

}  // namespace aigc::metrics
