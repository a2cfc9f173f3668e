#include "ambigeo/nbayes.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <set>

#include "ambigeo/error.hpp"
#include "ambigeo/random.hpp"
#include "ambigeo/textio.hpp"

namespace ambigeo::nbayes {

namespace {

void check_fraction(double test_fraction) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0)) {
        throw Error(ErrorCode::Split, "test fraction must be in (0, 1)");
    }
}

void shuffle(std::vector<std::size_t>& v, Rng& rng) {
    for (std::size_t i = v.size(); i > 1; --i) {
        const std::size_t j = rng.below(i);
        std::swap(v[i - 1], v[j]);
    }
}

std::size_t test_count(std::size_t n, double test_fraction) {
    return static_cast<std::size_t>(std::lround(static_cast<double>(n) * test_fraction));
}

void check_sides(const SplitPlan& plan) {
    if (plan.train_indices.empty() || plan.test_indices.empty()) {
        throw Error(ErrorCode::Split, "split would leave the " +
                                          std::string(plan.train_indices.empty() ? "train" : "test") +
                                          " side empty");
    }
}

}  // namespace

SplitPlan split_half(std::size_t n, double test_fraction, std::uint64_t seed) {
    check_fraction(test_fraction);
    if (n < 2) throw Error(ErrorCode::Split, "split needs at least 2 rows");
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    shuffle(order, rng);
    const std::size_t n_test = test_count(n, test_fraction);

    SplitPlan plan;
    plan.seed = seed;
    plan.test_fraction = test_fraction;
    plan.test_indices.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(std::min(n_test, n)));
    plan.train_indices.assign(order.begin() + static_cast<std::ptrdiff_t>(std::min(n_test, n)), order.end());
    check_sides(plan);
    return plan;
}

SplitPlan split_stratified(const std::vector<std::string>& labels, double test_fraction, std::uint64_t seed) {
    check_fraction(test_fraction);
    const std::size_t n = labels.size();
    if (n < 2) throw Error(ErrorCode::Split, "split needs at least 2 rows");
    std::map<std::string, std::vector<std::size_t>> by_label;
    for (std::size_t i = 0; i < n; ++i) by_label[labels[i]].push_back(i);

    struct Quota {
        std::size_t count;
        double remainder;
        std::size_t order;
    };
    std::vector<Quota> quotas;
    std::size_t assigned = 0;
    for (const auto& [label, rows] : by_label) {
        const double exact = static_cast<double>(rows.size()) * test_fraction;
        const auto whole = static_cast<std::size_t>(std::floor(exact));
        quotas.push_back({whole, exact - static_cast<double>(whole), quotas.size()});
        assigned += whole;
    }
    std::size_t leftover = test_count(n, test_fraction) - std::min(assigned, test_count(n, test_fraction));
    std::vector<Quota*> ranked;
    for (auto& q : quotas) ranked.push_back(&q);
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const Quota* a, const Quota* b) { return a->remainder > b->remainder; });
    for (auto* q : ranked) {
        if (leftover == 0) break;
        ++q->count;
        --leftover;
    }

    SplitPlan plan;
    plan.seed = seed;
    plan.test_fraction = test_fraction;
    Rng rng(seed);
    std::size_t c = 0;
    for (auto& [label, rows] : by_label) {
        shuffle(rows, rng);
        const std::size_t take = std::min(quotas[c++].count, rows.size());
        plan.test_indices.insert(plan.test_indices.end(), rows.begin(), rows.begin() + static_cast<std::ptrdiff_t>(take));
        plan.train_indices.insert(plan.train_indices.end(), rows.begin() + static_cast<std::ptrdiff_t>(take), rows.end());
    }
    check_sides(plan);
    return plan;
}

std::size_t GnbModel::class_index(const std::string& label) const {
    const auto it = std::lower_bound(classes.begin(), classes.end(), label);
    if (it == classes.end() || *it != label) throw Error(ErrorCode::UnknownClass, "label '" + label + "' not in model");
    return static_cast<std::size_t>(it - classes.begin());
}

GnbModel fit_gnb(const Matrix& x, const std::vector<std::string>& y, double smoothing_eps_ratio) {
    const std::size_t n = x.rows();
    const std::size_t d = x.cols();
    if (n == 0) throw Error(ErrorCode::EmptyDataset, "cannot fit on an empty training set");
    if (d == 0) throw Error(ErrorCode::Shape, "training matrix has zero columns");
    if (y.size() != n) throw Error(ErrorCode::Shape, "labels are not aligned with training rows");
    if (!(smoothing_eps_ratio > 0.0)) throw Error(ErrorCode::Precondition, "smoothing ratio must be positive");

    GnbModel model;
    const std::set<std::string> distinct(y.begin(), y.end());
    model.classes.assign(distinct.begin(), distinct.end());
    const std::size_t c = model.classes.size();

    std::vector<std::size_t> counts(c, 0);
    std::vector<std::size_t> row_class(n);
    model.means = Matrix(c, d);
    for (std::size_t i = 0; i < n; ++i) {
        row_class[i] = model.class_index(y[i]);
        ++counts[row_class[i]];
        for (std::size_t k = 0; k < d; ++k) model.means(row_class[i], k) += x(i, k);
    }
    for (std::size_t ci = 0; ci < c; ++ci) {
        for (std::size_t k = 0; k < d; ++k) model.means(ci, k) /= static_cast<double>(counts[ci]);
    }
    model.variances = Matrix(c, d);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < d; ++k) {
            const double diff = x(i, k) - model.means(row_class[i], k);
            model.variances(row_class[i], k) += diff * diff;
        }
    }

    double max_variance = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += x(i, k);
        m /= static_cast<double>(n);
        double ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) ss += (x(i, k) - m) * (x(i, k) - m);
        max_variance = std::max(max_variance, ss / static_cast<double>(n));
    }
    model.epsilon = smoothing_eps_ratio * (max_variance > 0.0 ? max_variance : 1.0);
    for (std::size_t ci = 0; ci < c; ++ci) {
        for (std::size_t k = 0; k < d; ++k) {
            model.variances(ci, k) = model.variances(ci, k) / static_cast<double>(counts[ci]) + model.epsilon;
        }
        model.priors.push_back(static_cast<double>(counts[ci]) / static_cast<double>(n));
    }
    return model;
}

Prediction predict_gnb(const GnbModel& model, const Matrix& x) {
    if (x.cols() != model.dim()) {
        throw Error(ErrorCode::Shape, "input has " + std::to_string(x.cols()) + " dimensions, model has " +
                                          std::to_string(model.dim()));
    }
    const std::size_t c = model.classes.size();
    const std::size_t d = model.dim();
    std::vector<double> base(c);
    for (std::size_t ci = 0; ci < c; ++ci) {
        double log_norm = 0.0;
        for (std::size_t k = 0; k < d; ++k) log_norm += std::log(2.0 * std::numbers::pi * model.variances(ci, k));
        base[ci] = std::log(model.priors[ci]) - 0.5 * log_norm;
    }

    Prediction out;
    out.log_scores = Matrix(x.rows(), c);
    out.labels.reserve(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) {
        std::size_t best = 0;
        for (std::size_t ci = 0; ci < c; ++ci) {
            double quad = 0.0;
            for (std::size_t k = 0; k < d; ++k) {
                const double diff = x(i, k) - model.means(ci, k);
                quad += diff * diff / model.variances(ci, k);
            }
            out.log_scores(i, ci) = base[ci] - 0.5 * quad;
            if (out.log_scores(i, ci) > out.log_scores(i, best)) best = ci;
        }
        out.labels.push_back(model.classes[best]);
    }
    return out;
}

double accuracy(const std::vector<std::string>& predicted, const std::vector<std::string>& truth) {
    if (predicted.size() != truth.size()) throw Error(ErrorCode::Shape, "prediction and truth lengths differ");
    if (truth.empty()) throw Error(ErrorCode::InsufficientData, "accuracy of zero predictions");
    std::size_t hits = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) hits += predicted[i] == truth[i] ? 1 : 0;
    return static_cast<double>(hits) / static_cast<double>(truth.size());
}

ClassificationReport classification_report(const GnbModel& model, const std::vector<std::string>& predicted,
                                           const std::vector<std::string>& truth) {
    ClassificationReport report;
    report.accuracy = accuracy(predicted, truth);
    report.test_size = truth.size();
    std::set<std::string> all(model.classes.begin(), model.classes.end());
    std::set<std::string> unseen;
    for (const auto& t : truth) {
        if (!std::binary_search(model.classes.begin(), model.classes.end(), t)) unseen.insert(t);
        all.insert(t);
    }
    report.unseen_truth_labels.assign(unseen.begin(), unseen.end());
    report.labels.assign(all.begin(), all.end());
    std::map<std::string, std::size_t> index;
    for (std::size_t i = 0; i < report.labels.size(); ++i) index[report.labels[i]] = i;
    report.support.assign(report.labels.size(), 0);
    report.confusion.assign(report.labels.size(), std::vector<std::size_t>(report.labels.size(), 0));
    for (std::size_t i = 0; i < truth.size(); ++i) {
        const std::size_t t = index.at(truth[i]);
        ++report.support[t];
        ++report.confusion[t][index.at(predicted[i])];
    }
    return report;
}

std::string to_json(const ClassificationReport& r) {
    nlohmann::ordered_json j;
    j["accuracy"] = r.accuracy;
    j["train_size"] = r.train_size;
    j["test_size"] = r.test_size;
    j["labels"] = r.labels;
    auto per_class = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < r.labels.size(); ++i) {
        const std::size_t correct = r.confusion[i][i];
        nlohmann::ordered_json c;
        c["label"] = r.labels[i];
        c["support"] = r.support[i];
        c["correct"] = correct;
        c["recall"] = r.support[i] > 0 ? textio::json_number(static_cast<double>(correct) / r.support[i])
                                       : nlohmann::ordered_json(nullptr);
        per_class.push_back(std::move(c));
    }
    j["per_class"] = std::move(per_class);
    j["confusion"] = r.confusion;
    j["unseen_truth_labels"] = r.unseen_truth_labels;
    return j.dump(2) + "\n";
}

std::string to_json(const GnbModel& model) {
    nlohmann::ordered_json j;
    j["classes"] = model.classes;
    j["priors"] = model.priors;
    j["epsilon"] = model.epsilon;
    std::vector<std::vector<double>> means, variances;
    for (std::size_t c = 0; c < model.classes.size(); ++c) {
        means.emplace_back(model.means.row(c).begin(), model.means.row(c).end());
        variances.emplace_back(model.variances.row(c).begin(), model.variances.row(c).end());
    }
    j["means"] = means;
    j["variances"] = variances;
    return j.dump(2) + "\n";
}

}  // namespace ambigeo::nbayes
