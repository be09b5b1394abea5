#include "aigc/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "aigc/errors.hpp"

namespace aigc::metrics {

template <typename Label>
ConfusionMatrix confusion(const std::vector<Label>& predicted, const std::vector<Label>& actual,
                          const Label& positive) {
    if (predicted.size() != actual.size())
        throw ShapeError("confusion: predicted and actual lengths differ");
    if (predicted.empty()) throw ShapeError("confusion: empty inputs");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool pred_pos = predicted[i] == positive;
        const bool actual_pos = actual[i] == positive;
        if (pred_pos && actual_pos) ++cm.tp;
        else if (pred_pos && !actual_pos) ++cm.fp;
        else if (!pred_pos && actual_pos) ++cm.fn;
        else ++cm.tn;
    }
    return cm;
}

template ConfusionMatrix confusion<int>(const std::vector<int>&, const std::vector<int>&,
                                        const int&);
template ConfusionMatrix confusion<std::size_t>(const std::vector<std::size_t>&,
                                                const std::vector<std::size_t>&,
                                                const std::size_t&);
template ConfusionMatrix confusion<std::string>(const std::vector<std::string>&,
                                                const std::vector<std::string>&,
                                                const std::string&);

std::vector<std::vector<std::size_t>> confusion_multiclass(
    const std::vector<std::size_t>& predicted, const std::vector<std::size_t>& actual,
    std::size_t num_classes) {
    if (predicted.size() != actual.size())
        throw ShapeError("confusion: predicted and actual lengths differ");
    std::vector<std::vector<std::size_t>> counts(num_classes,
                                                 std::vector<std::size_t>(num_classes, 0));
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (predicted[i] >= num_classes || actual[i] >= num_classes)
            throw ShapeError("confusion: class index out of range");
        ++counts[actual[i]][predicted[i]];
    }
    return counts;
}

double tpr(const ConfusionMatrix& cm) {
    if (cm.tp + cm.fn == 0) throw UndefinedMetricError("TPR undefined: no positive samples");
    return static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
}

double tnr(const ConfusionMatrix& cm) {
    if (cm.tn + cm.fp == 0) throw UndefinedMetricError("TNR undefined: no negative samples");
    return static_cast<double>(cm.tn) / static_cast<double>(cm.tn + cm.fp);
}

double accuracy(const ConfusionMatrix& cm) {
    if (cm.total() == 0) throw UndefinedMetricError("accuracy undefined: no samples");
    return static_cast<double>(cm.tp + cm.tn) / static_cast<double>(cm.total());
}

double f1(const ConfusionMatrix& cm) {
    if (cm.tp == 0) {
        // Degenerate transfer cells: defined as 0 when any error mass exists.
        if (cm.fp + cm.fn > 0) return 0.0;
        throw UndefinedMetricError("F1 undefined: no positive predictions or samples");
    }
    const double precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    const double recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    return 2.0 * precision * recall / (precision + recall);
}

MetricsReport report(const ConfusionMatrix& cm) {
    MetricsReport r;
    r.tpr = tpr(cm);
    r.tnr = tnr(cm);
    r.accuracy = accuracy(cm);
    r.f1 = f1(cm);
    r.n = cm.total();
    return r;
}

MulticlassReport report_multiclass(const std::vector<std::vector<std::size_t>>& counts) {
    MulticlassReport r;
    std::size_t correct = 0, total = 0;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        std::size_t row_total = std::accumulate(counts[c].begin(), counts[c].end(),
                                                static_cast<std::size_t>(0));
        if (row_total == 0)
            throw UndefinedMetricError("per-class TPR undefined: class " + std::to_string(c) +
                                       " has no samples");
        r.per_class_tpr.push_back(static_cast<double>(counts[c][c]) /
                                  static_cast<double>(row_total));
        correct += counts[c][c];
        total += row_total;
    }
    r.accuracy = static_cast<double>(correct) / static_cast<double>(total);
    r.n = total;
    return r;
}

namespace {

std::vector<double> average_ranks(const std::vector<double>& values) {
    const std::size_t n = values.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    std::vector<double> ranks(n);
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
        const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
        for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
        i = j + 1;
    }
    return ranks;
}

}  // namespace

double spearman(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw ShapeError("spearman: input lengths differ");
    if (x.size() < 2) throw UndefinedMetricError("spearman requires at least 2 points");
    auto is_constant = [](const std::vector<double>& v) {
        return std::all_of(v.begin(), v.end(), [&](double e) { return e == v.front(); });
    };
    if (is_constant(x) || is_constant(y))
        throw UndefinedMetricError("spearman undefined for a constant input");
    const auto rx = average_ranks(x);
    const auto ry = average_ranks(y);
    // Pearson correlation of the ranks; reduces to 1 - 6*sum(d^2)/(n(n^2-1))
    // when there are no ties.
    const double n = static_cast<double>(x.size());
    double mean = (n + 1.0) / 2.0;
    double cov = 0.0, var_x = 0.0, var_y = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        cov += (rx[i] - mean) * (ry[i] - mean);
        var_x += (rx[i] - mean) * (rx[i] - mean);
        var_y += (ry[i] - mean) * (ry[i] - mean);
    }
    return cov / std::sqrt(var_x * var_y);
}

std::string to_json(const MetricsReport& r) {
    nlohmann::json j{{"tpr", r.tpr}, {"tnr", r.tnr}, {"accuracy", r.accuracy},
                     {"f1", r.f1},   {"n", r.n}};
    return j.dump();
}

std::string to_table(const MetricsReport& r) {
    std::ostringstream out;
    out.precision(4);
    out << std::fixed;
    out << "TPR  " << r.tpr << '\n';
    out << "TNR  " << r.tnr << '\n';
    out << "ACC  " << r.accuracy << '\n';
    out << "F1   " << r.f1 << '\n';
    out << "N    " << r.n << '\n';
    return out.str();
}

}  // namespace aigc::metrics
