#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <string>
#include <vector>

#include "aigc/encoding.hpp"
#include "aigc/errors.hpp"
#include "aigc/metrics.hpp"
#include "aigc/rng.hpp"
#include "aigc/training.hpp"
#include "aigc/transfer.hpp"
#include "support.hpp"

using namespace aigc;

TEST_CASE("confusion counts on simple cases") {
    std::vector<std::string> g{"G", "G", "H", "H"};
    auto cm = metrics::confusion(g, g, std::string("G"));
    CHECK(cm.tp == 2);
    CHECK(cm.tn == 2);
    CHECK(cm.fp == 0);
    CHECK(cm.fn == 0);

    std::vector<std::string> all_g{"G", "G"}, actual{"G", "H"};
    auto cm2 = metrics::confusion(all_g, actual, std::string("G"));
    CHECK(cm2.tp == 1);
    CHECK(cm2.fp == 1);

    CHECK_THROWS_AS(metrics::confusion(all_g, g, std::string("G")), ShapeError);
}

TEST_CASE("confusion matches an independent recount on random cases") {
    Rng rng(2024);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t n = 1 + rng.next_below(100);
        std::vector<int> pred(n), actual(n);
        for (std::size_t i = 0; i < n; ++i) {
            pred[i] = int(rng.next_below(2));
            actual[i] = int(rng.next_below(2));
        }
        auto cm = metrics::confusion(pred, actual, 1);
        std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (actual[i] == 1)
                (pred[i] == 1 ? tp : fn)++;
            else
                (pred[i] == 1 ? fp : tn)++;
        }
        CHECK(cm.tp == tp);
        CHECK(cm.fp == fp);
        CHECK(cm.tn == tn);
        CHECK(cm.fn == fn);
        CHECK(cm.total() == n);
    }
}

TEST_CASE("rate formulas and undefined denominators") {
    CHECK(metrics::tpr({8, 0, 0, 2}) == doctest::Approx(0.8));
    CHECK(metrics::tnr({0, 1, 99, 0}) == doctest::Approx(0.99));
    CHECK(metrics::accuracy({50, 0, 50, 0}) == 1.0);
    CHECK_THROWS_AS(metrics::tpr({0, 5, 5, 0}), UndefinedMetricError);
    CHECK_THROWS_AS(metrics::tnr({5, 0, 0, 5}), UndefinedMetricError);
    CHECK_THROWS_AS(metrics::accuracy({0, 0, 0, 0}), UndefinedMetricError);
}

TEST_CASE("f1 values") {
    CHECK(metrics::f1({9, 1, 0, 1}) == doctest::Approx(0.9));
    CHECK(metrics::f1({10, 0, 10, 0}) == 1.0);
    CHECK(metrics::f1({0, 3, 0, 4}) == 0.0);
    CHECK_THROWS_AS(metrics::f1({0, 0, 5, 0}), UndefinedMetricError);
}

TEST_CASE("f1 ignores true negatives") {
    metrics::ConfusionMatrix a{7, 2, 0, 3};
    metrics::ConfusionMatrix b{7, 2, 1000, 3};
    CHECK(metrics::f1(a) == metrics::f1(b));
}

TEST_CASE("report satisfies the accuracy identity") {
    Rng rng(55);
    for (int trial = 0; trial < 50; ++trial) {
        metrics::ConfusionMatrix cm{1 + rng.next_below(50), rng.next_below(50),
                                    1 + rng.next_below(50), rng.next_below(50)};
        auto rep = metrics::report(cm);
        double p = double(cm.tp + cm.fn), n = double(cm.tn + cm.fp);
        CHECK(rep.accuracy == doctest::Approx((rep.tpr * p + rep.tnr * n) / (p + n)));
        CHECK(rep.n == cm.total());
    }
}

TEST_CASE("multiclass confusion and report") {
    std::vector<std::size_t> actual{0, 0, 1, 1, 2, 3};
    std::vector<std::size_t> pred{0, 1, 1, 1, 2, 0};
    auto counts = metrics::confusion_multiclass(pred, actual, 4);
    CHECK(counts[0][0] == 1);
    CHECK(counts[0][1] == 1);
    CHECK(counts[1][1] == 2);
    CHECK(counts[3][0] == 1);
    auto rep = metrics::report_multiclass(counts);
    CHECK(rep.per_class_tpr[0] == doctest::Approx(0.5));
    CHECK(rep.per_class_tpr[1] == doctest::Approx(1.0));
    CHECK(rep.accuracy == doctest::Approx(4.0 / 6.0));
}

TEST_CASE("spearman basic values") {
    CHECK(metrics::spearman({1, 2, 3, 4}, {10, 20, 30, 40}) == doctest::Approx(1.0));
    CHECK(metrics::spearman({1, 2, 3, 4}, {9, 7, 5, 3}) == doctest::Approx(-1.0));
    CHECK(std::abs(metrics::spearman({1, 2, 3}, {2, 1, 3}) - 0.5) < 1e-12);
    CHECK_THROWS_AS(metrics::spearman({1, 1, 1}, {1, 2, 3}), UndefinedMetricError);
    CHECK_THROWS_AS(metrics::spearman({1.0}, {2.0}), UndefinedMetricError);
    CHECK_THROWS_AS(metrics::spearman({1, 2}, {1, 2, 3}), ShapeError);
}

TEST_CASE("spearman handles ties with average ranks") {
    // x ranks: 1, 2.5, 2.5, 4
    double rho = metrics::spearman({1, 2, 2, 3}, {1, 2, 3, 4});
    CHECK(rho > 0.9);
    CHECK(rho < 1.0);
}

TEST_CASE("spearman invariant under monotone transforms") {
    std::vector<double> x{3, 1, 4, 1.5, 9, 2.6};
    std::vector<double> y{2, 7, 1, 8, 2.8, 1.8};
    double base = metrics::spearman(x, y);
    std::vector<double> xt(x.size()), yt(y.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        xt[i] = std::exp(x[i]);
        yt[i] = 3.0 * y[i] + 7.0;
    }
    CHECK(metrics::spearman(xt, yt) == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("report serializations contain the table rows") {
    auto rep = metrics::report({9, 1, 8, 2});
    auto table = metrics::to_table(rep);
    CHECK(table.find("TPR") != std::string::npos);
    CHECK(table.find("TNR") != std::string::npos);
    CHECK(table.find("ACC") != std::string::npos);
    CHECK(table.find("F1") != std::string::npos);
    auto json = metrics::to_json(rep);
    CHECK(json.find("\"tpr\"") != std::string::npos);
}

TEST_CASE("1x1 transfer grid equals direct evaluation") {
    auto corp = testsupport::synthetic_corpus(60, 17);
    auto enc = encoding::make_hash_encoder(1, 16);
    auto data = training::encode_corpus(corp, *enc, 2);

    head::HeadConfig hc;
    hc.d_in = 16;
    hc.hidden = 8;
    hc.dropout_p = 0.1;
    training::TrainConfig tc;
    tc.batch_size = 16;
    tc.max_epochs = 4;
    tc.lr0 = 5e-3;
    auto trained = training::train(head::init_head<float>(hc, 1), data, data, tc);

    training::Checkpoint ck;
    ck.params = trained.params;
    ck.encoder_name = "hash:16";
    metrics::NamedDataset ds{"self", "hash:16", &data};
    auto grid = metrics::transfer_grid({ck}, {ds});
    REQUIRE(grid.f1.size() == 1);
    REQUIRE(grid.f1[0].size() == 1);
    auto direct = metrics::evaluate_binary(trained.params, data);
    CHECK(grid.f1[0][0] == doctest::Approx(direct.f1));

    metrics::NamedDataset wrong{"self", "hash:32", &data};
    CHECK_THROWS_AS(metrics::transfer_grid({ck}, {wrong}), ConfigError);
}
