#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

#include "ambigeo/nbayes.hpp"
#include "ambigeo/random.hpp"
#include "test_util.hpp"

using namespace ambigeo::nbayes;
using ambigeo::ErrorCode;
using ambigeo::Matrix;

TEST_CASE("gaussian naive bayes against reference values") {
    // Reference model fitted with an external implementation using the same
    // smoothing rule (ratio 1e-9 of the largest feature variance).
    const Matrix x(7, 2, std::vector<double>{0, 0, 1, 0.5, 0.5, 1, 4, 4, 5, 4.5, 4.5, 5.5, 2, 2.5});
    const std::vector<std::string> y{"a", "a", "a", "b", "b", "b", "a"};
    const auto model = fit_gnb(x, y);
    CHECK(model.classes == std::vector<std::string>{"a", "b"});
    CHECK(model.priors[0] == doctest::Approx(4.0 / 7.0));
    CHECK(model.epsilon == doctest::Approx(3.959183673469387e-09).epsilon(1e-12));
    CHECK(model.variances(0, 0) == doctest::Approx(0.5468750039591836).epsilon(1e-14));
    CHECK(model.variances(1, 1) == doctest::Approx(0.38888889284807254).epsilon(1e-14));

    const Matrix t(3, 2, std::vector<double>{0.2, 0.1, 4.8, 4.9, 2.6, 2.6});
    const auto pred = predict_gnb(model, t);
    CHECK(pred.labels == std::vector<std::string>{"a", "b", "a"});
    const double expected[3][2] = {{-2.9083882192980064, -83.59991995691648},
                                   {-24.805530940252705, -1.657064397603495},
                                   {-6.2123881980930715, -17.638492662983946}};
    for (std::size_t i = 0; i < 3; ++i) {
        for (std::size_t c = 0; c < 2; ++c) {
            CHECK(pred.log_scores(i, c) == doctest::Approx(expected[i][c]).epsilon(1e-10));
        }
    }
}

TEST_CASE("constant features still get positive variance") {
    const Matrix x(4, 2, std::vector<double>{1, 3, 1, 3, 1, 3, 1, 3});
    const auto model = fit_gnb(x, {"p", "p", "q", "q"}, 1e-9);
    CHECK(model.epsilon == 1e-9);
    for (double v : model.variances.data()) CHECK(v > 0.0);
    // Identical scores: the earlier class wins.
    const auto pred = predict_gnb(model, Matrix(1, 2, std::vector<double>{1, 3}));
    CHECK(pred.labels[0] == "p");
}

TEST_CASE("midpoint ties go to the earlier class") {
    const Matrix x(4, 1, std::vector<double>{-1, -3, 1, 3});
    const auto model = fit_gnb(x, {"left", "left", "right", "right"});
    const auto pred = predict_gnb(model, Matrix(1, 1, std::vector<double>{0.0}));
    CHECK(pred.log_scores(0, 0) == pred.log_scores(0, 1));
    CHECK(pred.labels[0] == "left");
}

TEST_CASE("classifier separates well-separated clusters") {
    ambigeo::Rng rng(0);
    const std::size_t per = 100, d = 8;
    Matrix x(3 * per, d);
    std::vector<std::string> y;
    for (std::size_t i = 0; i < 3 * per; ++i) {
        const std::size_t c = i / per;
        for (std::size_t k = 0; k < d; ++k) x(i, k) = rng.normal() + (k == c ? 8.0 : 0.0);
        y.push_back("k" + std::to_string(c));
    }
    const auto plan = split_half(x.rows(), 0.5, 3);
    auto take = [&](const std::vector<std::size_t>& idx, Matrix& xs, std::vector<std::string>& ys) {
        xs = Matrix(idx.size(), d);
        for (std::size_t r = 0; r < idx.size(); ++r) {
            for (std::size_t k = 0; k < d; ++k) xs(r, k) = x(idx[r], k);
            ys.push_back(y[idx[r]]);
        }
    };
    Matrix xtr, xte;
    std::vector<std::string> ytr, yte;
    take(plan.train_indices, xtr, ytr);
    take(plan.test_indices, xte, yte);
    const auto model = fit_gnb(xtr, ytr);
    const auto pred = predict_gnb(model, xte);
    CHECK(accuracy(pred.labels, yte) == 1.0);
    CHECK_ERROR(predict_gnb(model, Matrix(1, 3)), ErrorCode::Shape);
}

TEST_CASE("split_half") {
    const auto plan = split_half(11, 0.5, 42);
    CHECK(plan.test_indices.size() == 6);  // round(5.5)
    CHECK(plan.train_indices.size() == 5);
    std::set<std::size_t> all(plan.test_indices.begin(), plan.test_indices.end());
    all.insert(plan.train_indices.begin(), plan.train_indices.end());
    CHECK(all.size() == 11);
    CHECK(*all.rbegin() == 10);
    const auto again = split_half(11, 0.5, 42);
    CHECK(again.test_indices == plan.test_indices);
    CHECK(split_half(11, 0.5, 43).test_indices != plan.test_indices);
    CHECK_ERROR(split_half(1, 0.5, 0), ErrorCode::Split);
    CHECK_ERROR(split_half(3, 0.1, 0), ErrorCode::Split);
    CHECK_ERROR(split_half(10, 1.0, 0), ErrorCode::Split);
}

TEST_CASE("split_stratified keeps label proportions") {
    std::vector<std::string> labels;
    for (int i = 0; i < 10; ++i) labels.push_back("a");
    for (int i = 0; i < 6; ++i) labels.push_back("b");
    for (int i = 0; i < 3; ++i) labels.push_back("c");
    const auto plan = split_stratified(labels, 0.5, 1);
    CHECK(plan.test_indices.size() == 10);  // round(9.5)
    std::map<std::string, int> test_counts;
    for (auto i : plan.test_indices) ++test_counts[labels[i]];
    CHECK(test_counts["a"] == 5);
    CHECK(test_counts["b"] == 3);
    CHECK(test_counts["c"] == 2);
    CHECK(plan.train_indices.size() + plan.test_indices.size() == labels.size());
}

TEST_CASE("classification report") {
    const Matrix x(4, 1, std::vector<double>{0, 0.1, 5, 5.1});
    const auto model = fit_gnb(x, {"a", "a", "b", "b"});
    const std::vector<std::string> truth{"a", "b", "z"};
    const std::vector<std::string> predicted{"a", "a", "b"};
    const auto r = classification_report(model, predicted, truth);
    CHECK(r.labels == std::vector<std::string>{"a", "b", "z"});
    CHECK(r.unseen_truth_labels == std::vector<std::string>{"z"});
    CHECK(r.accuracy == doctest::Approx(1.0 / 3.0));
    CHECK(r.support == std::vector<std::size_t>{1, 1, 1});
    CHECK(r.confusion[1][0] == 1);
    CHECK(r.confusion[2][1] == 1);
    CHECK(to_json(r).find("\"unseen_truth_labels\": [\n    \"z\"") != std::string::npos);
    CHECK_ERROR(model.class_index("z"), ErrorCode::UnknownClass);
    CHECK_ERROR(accuracy({"a"}, {"a", "b"}), ErrorCode::Shape);
}
