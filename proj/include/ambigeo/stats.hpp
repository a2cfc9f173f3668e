#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "ambigeo/matrix.hpp"

namespace ambigeo::stats {

double mean(std::span<const double> values);
/// Unbiased (n - 1) sample variance.
double sample_variance(std::span<const double> values);

struct OlsFit {
    std::vector<double> coefficients;
    std::vector<double> standard_errors;
    std::vector<double> t_values;
    std::vector<double> p_values;
    std::vector<double> standardized_beta;  // 0 for constant (intercept) columns
    double r_squared = 0.0;
    double residual_ss = 0.0;
    std::size_t n = 0;
    std::size_t df_residual = 0;
};

/// Least squares of y on the columns of `predictors`, which must already
/// contain the intercept column. Column-pivoted QR is used for the solve and
/// for rank detection; p-values come from t with n - k degrees of freedom.
/// Standardized coefficients equal a refit on z-scored outcome and
/// non-constant predictors.
OlsFit ols(std::span<const double> y, const Matrix& predictors);

struct AnovaResult {
    double f_value = 0.0;  // +inf when within-group variance is zero but groups differ
    std::size_t df_between = 0;
    std::size_t df_within = 0;
    double p_value = 1.0;
    double partial_eta_sq = 0.0;
    double ss_between = 0.0;
    double ss_within = 0.0;
};

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups);

struct WelchResult {
    double t = 0.0;  // sign follows mean(a) - mean(b)
    double df = 0.0;
    double p = 1.0;
};

WelchResult welch_t(std::span<const double> a, std::span<const double> b);

struct MeanCi {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

/// Normal-approximation interval mean +- z * sd / sqrt(n).
MeanCi mean_ci(std::span<const double> values, double level);

/// Pair-level interaction model: similarity ~ 1 + within + word_type +
/// within * word_type. `within` and `word_type` are 0/1 codes.
struct InteractionFit {
    static constexpr const char* kTerms[4] = {"intercept", "within", "word_type", "within:word_type"};
    OlsFit fit;
    double interaction() const { return fit.coefficients.at(3); }
};

InteractionFit fit_interaction(std::span<const double> similarity, std::span<const double> within,
                               std::span<const double> word_type);

}  // namespace ambigeo::stats
