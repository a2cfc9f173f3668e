#include "ambigeo/stats.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Dense>

#include "ambigeo/distributions.hpp"
#include "ambigeo/error.hpp"

namespace ambigeo::stats {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

double ratio_or_sentinel(double num, double den) {
    if (den > 0.0) return num / den;
    if (num == 0.0) return 0.0;
    return num > 0.0 ? std::numeric_limits<double>::infinity() : -std::numeric_limits<double>::infinity();
}

}  // namespace

double mean(std::span<const double> values) {
    if (values.empty()) throw Error(ErrorCode::InsufficientData, "mean of empty sample");
    double sum = 0.0;
    for (double v : values) sum += v;
    return sum / static_cast<double>(values.size());
}

double sample_variance(std::span<const double> values) {
    if (values.size() < 2) throw Error(ErrorCode::InsufficientData, "variance needs at least 2 values");
    const double m = mean(values);
    double ss = 0.0;
    for (double v : values) ss += (v - m) * (v - m);
    return ss / static_cast<double>(values.size() - 1);
}

OlsFit ols(std::span<const double> y, const Matrix& predictors) {
    const std::size_t n = predictors.rows();
    const std::size_t k = predictors.cols();
    if (y.size() != n) throw Error(ErrorCode::Shape, "outcome length does not match predictor rows");
    if (k == 0) throw Error(ErrorCode::Shape, "no predictor columns");
    if (n <= k) {
        throw Error(ErrorCode::InsufficientData,
                    std::to_string(n) + " observations for " + std::to_string(k) + " coefficients");
    }

    const Eigen::Map<const RowMajor> X(predictors.data().data(), static_cast<Eigen::Index>(n),
                                       static_cast<Eigen::Index>(k));
    const Eigen::Map<const Eigen::VectorXd> Y(y.data(), static_cast<Eigen::Index>(n));
    const Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
    if (qr.rank() < static_cast<Eigen::Index>(k)) {
        throw Error(ErrorCode::Singularity, "design matrix has rank " + std::to_string(qr.rank()) + " < " +
                                                std::to_string(k));
    }
    const Eigen::VectorXd b = qr.solve(Y);
    const Eigen::VectorXd residuals = Y - X * b;

    OlsFit fit;
    fit.n = n;
    fit.df_residual = n - k;
    fit.residual_ss = residuals.squaredNorm();
    const double sigma2 = fit.residual_ss / static_cast<double>(fit.df_residual);

    // (X'X)^-1 = P R^-1 R^-T P'
    const auto kk = static_cast<Eigen::Index>(k);
    const Eigen::MatrixXd r = qr.matrixR().topLeftCorner(kk, kk).triangularView<Eigen::Upper>();
    const Eigen::MatrixXd r_inv =
        r.triangularView<Eigen::Upper>().solve(Eigen::MatrixXd::Identity(kk, kk));
    const Eigen::MatrixXd xtx_inv_perm = r_inv * r_inv.transpose();
    const auto& perm = qr.colsPermutation();
    const Eigen::MatrixXd xtx_inv = perm * xtx_inv_perm * perm.transpose();

    const double y_mean = mean(y);
    double tss = 0.0;
    for (double v : y) tss += (v - y_mean) * (v - y_mean);
    const double y_sd = std::sqrt(tss / static_cast<double>(n - 1));
    fit.r_squared = tss > 0.0 ? 1.0 - fit.residual_ss / tss : 0.0;

    for (std::size_t j = 0; j < k; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        const double coef = b(jj);
        const double se = std::sqrt(std::max(0.0, sigma2 * xtx_inv(jj, jj)));
        const double t = ratio_or_sentinel(coef, se);
        fit.coefficients.push_back(coef);
        fit.standard_errors.push_back(se);
        fit.t_values.push_back(t);
        fit.p_values.push_back(t_two_sided_p(t, static_cast<double>(fit.df_residual)));

        double x_mean = 0.0;
        for (std::size_t i = 0; i < n; ++i) x_mean += predictors(i, j);
        x_mean /= static_cast<double>(n);
        double x_ss = 0.0;
        for (std::size_t i = 0; i < n; ++i) x_ss += (predictors(i, j) - x_mean) * (predictors(i, j) - x_mean);
        const double x_sd = std::sqrt(x_ss / static_cast<double>(n - 1));
        fit.standardized_beta.push_back(x_sd > 0.0 && y_sd > 0.0 ? coef * x_sd / y_sd : 0.0);
    }
    return fit;
}

AnovaResult one_way_anova(const std::vector<std::vector<double>>& groups) {
    if (groups.size() < 2) throw Error(ErrorCode::InsufficientData, "anova needs at least 2 groups");
    std::size_t total = 0;
    double grand_sum = 0.0;
    bool has_replicate = false;
    for (const auto& g : groups) {
        if (g.empty()) throw Error(ErrorCode::InsufficientData, "anova group is empty");
        has_replicate = has_replicate || g.size() >= 2;
        total += g.size();
        for (double v : g) grand_sum += v;
    }
    if (!has_replicate) throw Error(ErrorCode::InsufficientData, "anova needs a group with 2 or more values");
    const double grand_mean = grand_sum / static_cast<double>(total);

    AnovaResult result;
    for (const auto& g : groups) {
        const double m = mean(g);
        result.ss_between += static_cast<double>(g.size()) * (m - grand_mean) * (m - grand_mean);
        for (double v : g) result.ss_within += (v - m) * (v - m);
    }
    result.df_between = groups.size() - 1;
    result.df_within = total - groups.size();
    const double ms_between = result.ss_between / static_cast<double>(result.df_between);
    const double ms_within = result.ss_within / static_cast<double>(result.df_within);
    result.f_value = ratio_or_sentinel(ms_between, ms_within);
    result.p_value =
        f_upper_p(result.f_value, static_cast<double>(result.df_between), static_cast<double>(result.df_within));
    const double ss_total = result.ss_between + result.ss_within;
    result.partial_eta_sq = ss_total > 0.0 ? result.ss_between / ss_total : 0.0;
    return result;
}

WelchResult welch_t(std::span<const double> a, std::span<const double> b) {
    if (a.size() < 2 || b.size() < 2) throw Error(ErrorCode::Domain, "welch t needs 2 or more values per sample");
    const double va = sample_variance(a);
    const double vb = sample_variance(b);
    if (!(va > 0.0) || !(vb > 0.0)) throw Error(ErrorCode::Domain, "welch t needs nonzero variance in both samples");
    const double na = static_cast<double>(a.size());
    const double nb = static_cast<double>(b.size());
    const double sa = va / na;
    const double sb = vb / nb;
    WelchResult r;
    r.t = (mean(a) - mean(b)) / std::sqrt(sa + sb);
    r.df = (sa + sb) * (sa + sb) / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
    r.p = t_two_sided_p(r.t, r.df);
    return r;
}

MeanCi mean_ci(std::span<const double> values, double level) {
    if (!(level > 0.0 && level < 1.0)) throw Error(ErrorCode::Precondition, "confidence level must be in (0, 1)");
    if (values.size() < 2) throw Error(ErrorCode::InsufficientData, "confidence interval needs 2 or more values");
    const double m = mean(values);
    const double half = normal_quantile(0.5 * (1.0 + level)) * std::sqrt(sample_variance(values)) /
                        std::sqrt(static_cast<double>(values.size()));
    return {m, m - half, m + half};
}

InteractionFit fit_interaction(std::span<const double> similarity, std::span<const double> within,
                               std::span<const double> word_type) {
    const std::size_t n = similarity.size();
    if (within.size() != n || word_type.size() != n) {
        throw Error(ErrorCode::Shape, "interaction inputs differ in length");
    }
    Matrix design(n, 4);
    for (std::size_t i = 0; i < n; ++i) {
        design(i, 0) = 1.0;
        design(i, 1) = within[i];
        design(i, 2) = word_type[i];
        design(i, 3) = within[i] * word_type[i];
    }
    return {ols(similarity, design)};
}

}  // namespace ambigeo::stats
