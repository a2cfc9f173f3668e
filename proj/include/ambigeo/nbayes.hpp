#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ambigeo/matrix.hpp"

namespace ambigeo::nbayes {

struct SplitPlan {
    std::vector<std::size_t> train_indices;
    std::vector<std::size_t> test_indices;
    std::uint64_t seed = 0;
    double test_fraction = 0.5;
};

/// Fisher-Yates shuffle of 0..n-1 with the library Rng; the first
/// round(n * test_fraction) shuffled indices form the test side.
SplitPlan split_half(std::size_t n, double test_fraction = 0.5, std::uint64_t seed = 0);

/// Per-label variant: each label's rows are shuffled separately and the test
/// quota round(n * test_fraction) is apportioned by largest remainder.
SplitPlan split_stratified(const std::vector<std::string>& labels, double test_fraction = 0.5,
                           std::uint64_t seed = 0);

struct GnbModel {
    std::vector<std::string> classes;  // sorted
    std::vector<double> priors;
    Matrix means;      // classes x dim
    Matrix variances;  // classes x dim, smoothed, > 0
    double epsilon = 0.0;

    std::size_t dim() const noexcept { return means.cols(); }
    /// Throws UnknownClass for labels the model was not trained on.
    std::size_t class_index(const std::string& label) const;
};

/// Per-class means and population variances; every variance is raised by
/// smoothing_eps_ratio times the largest per-dimension variance of the
/// whole training matrix (or by the ratio itself if that variance is 0).
GnbModel fit_gnb(const Matrix& x, const std::vector<std::string>& y, double smoothing_eps_ratio = 1e-9);

struct Prediction {
    std::vector<std::string> labels;
    Matrix log_scores;  // rows x classes: log prior + Gaussian log likelihood
};

/// Argmax of the log scores; ties go to the earlier class.
Prediction predict_gnb(const GnbModel& model, const Matrix& x);

double accuracy(const std::vector<std::string>& predicted, const std::vector<std::string>& truth);

struct ClassificationReport {
    std::vector<std::string> labels;  // union of model classes and truth labels, sorted
    std::vector<std::size_t> support; // truth count per label
    std::vector<std::vector<std::size_t>> confusion;  // [truth][predicted]
    std::vector<std::string> unseen_truth_labels;     // in truth, absent from training
    double accuracy = 0.0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
};

ClassificationReport classification_report(const GnbModel& model, const std::vector<std::string>& predicted,
                                           const std::vector<std::string>& truth);

std::string to_json(const ClassificationReport& report);
std::string to_json(const GnbModel& model);

}  // namespace ambigeo::nbayes
