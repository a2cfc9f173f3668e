#include <doctest.h>

#include <cmath>

#include "ambigeo/distributions.hpp"
#include "ambigeo/stats.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ambigeo::stats;
using ambigeo::ErrorCode;
using ambigeo::Matrix;

TEST_CASE("distribution functions against reference values") {
    // Reference values computed with an external statistics package.
    CHECK(t_two_sided_p(2.0, 10) == doctest::Approx(0.07338803477074039).epsilon(1e-10));
    CHECK(t_two_sided_p(-2.0, 10) == doctest::Approx(0.07338803477074039).epsilon(1e-10));
    CHECK(t_two_sided_p(0.3, 2.5) == doctest::Approx(0.7873423714951973).epsilon(1e-10));
    CHECK(t_two_sided_p(0.0, 5) == 1.0);
    CHECK(f_upper_p(8.0, 1, 2) == doctest::Approx(0.10557280900008414).epsilon(1e-10));
    CHECK(f_upper_p(3.5, 3, 17) == doctest::Approx(0.03839971815314919).epsilon(1e-10));
    CHECK(f_upper_p(INFINITY, 3, 17) == 0.0);
    CHECK(incomplete_beta(2.5, 1.5, 0.3) == doctest::Approx(0.08894372317066562).epsilon(1e-10));
    CHECK(normal_cdf(1.3) == doctest::Approx(0.9031995154143897).epsilon(1e-12));
    CHECK(normal_quantile(0.995) == doctest::Approx(2.5758293035489004).epsilon(1e-13));
    CHECK(normal_quantile(1e-10) == doctest::Approx(-6.361340902404056).epsilon(1e-12));
    for (double p : {0.001, 0.2, 0.5, 0.77, 0.999}) {
        CHECK(normal_cdf(normal_quantile(p)) == doctest::Approx(p).epsilon(1e-13));
    }
}

TEST_CASE("ols worked example") {
    // y = (1, 2, 2) on x = (1, 2, 3): slope 1/2, intercept 2/3.
    const std::vector<double> y{1, 2, 2};
    Matrix x(3, 2, std::vector<double>{1, 1, 1, 2, 1, 3});
    const auto fit = ols(y, x);
    CHECK(fit.coefficients[0] == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(fit.r_squared == doctest::Approx(0.75).epsilon(1e-12));
    CHECK(fit.residual_ss == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
    CHECK(fit.df_residual == 1);
    CHECK(fit.standardized_beta[0] == 0.0);
    CHECK(fit.standardized_beta[1] == doctest::Approx(std::sqrt(0.75)).epsilon(1e-12));
}

TEST_CASE("ols exact fit") {
    const std::vector<double> y{3, 5, 7, 9};
    Matrix x(4, 2, std::vector<double>{1, 1, 1, 2, 1, 3, 1, 4});
    const auto fit = ols(y, x);
    CHECK(fit.coefficients[0] == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(fit.coefficients[1] == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.residual_ss == doctest::Approx(0.0).epsilon(1e-20));
    CHECK(fit.r_squared == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ols matches the normal-equation oracle") {
    ambigeo::Rng rng(2024);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t k = 2 + rng.below(4);
        const std::size_t n = k + 3 + rng.below(40);
        Matrix x = oracle::random_matrix(n, k, rng);
        for (std::size_t i = 0; i < n; ++i) x(i, 0) = 1.0;
        std::vector<double> y(n);
        for (std::size_t i = 0; i < n; ++i) {
            y[i] = rng.normal();
            for (std::size_t j = 0; j < k; ++j) y[i] += 0.5 * static_cast<double>(j) * x(i, j);
        }
        const auto fit = ols(y, x);
        const auto ref = oracle::naive_ols(y, x);
        for (std::size_t j = 0; j < k; ++j) {
            CHECK(fit.coefficients[j] == doctest::Approx(ref.b[j]).epsilon(1e-8));
            CHECK(fit.standard_errors[j] == doctest::Approx(ref.se[j]).epsilon(1e-8));
            CHECK(fit.t_values[j] == doctest::Approx(ref.t[j]).epsilon(1e-8));
            CHECK(fit.standardized_beta[j] == doctest::Approx(ref.beta[j]).epsilon(1e-8));
            CHECK(fit.p_values[j] >= 0.0);
            CHECK(fit.p_values[j] <= 1.0);
        }
        CHECK(fit.r_squared == doctest::Approx(ref.r2).epsilon(1e-8));
    }
}

TEST_CASE("ols failure modes") {
    const std::vector<double> y{1, 2, 3};
    Matrix square(3, 3, std::vector<double>{1, 0, 0, 1, 1, 0, 1, 0, 1});
    CHECK_ERROR(ols(y, square), ErrorCode::InsufficientData);
    const std::vector<double> y4{1, 2, 3, 5};
    Matrix collinear(4, 3, std::vector<double>{1, 1, 2, 1, 2, 4, 1, 3, 6, 1, 4, 8});
    CHECK_ERROR(ols(y4, collinear), ErrorCode::Singularity);
    Matrix dup_intercept(4, 3, std::vector<double>{1, 1, 0, 1, 1, 1, 1, 1, 2, 1, 1, 3});
    CHECK_ERROR(ols(y4, dup_intercept), ErrorCode::Singularity);
    Matrix short_x(2, 1, std::vector<double>{1, 1});
    CHECK_ERROR(ols(y, short_x), ErrorCode::Shape);
}

TEST_CASE("anova worked example and oracle") {
    const auto r = one_way_anova({{0, 1}, {2, 3}});
    CHECK(r.f_value == doctest::Approx(8.0).epsilon(1e-12));
    CHECK(r.partial_eta_sq == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(r.df_between == 1);
    CHECK(r.df_within == 2);
    CHECK(r.p_value == doctest::Approx(0.10557280900008414).epsilon(1e-10));

    ambigeo::Rng rng(8);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<std::vector<double>> groups(2 + rng.below(4));
        for (std::size_t g = 0; g < groups.size(); ++g) {
            groups[g].resize(2 + rng.below(15));
            for (double& v : groups[g]) v = rng.normal() + 0.3 * static_cast<double>(g);
        }
        const auto got = one_way_anova(groups);
        const auto ref = oracle::naive_anova(groups);
        CHECK(got.f_value == doctest::Approx(ref.f).epsilon(1e-8));
        CHECK(got.partial_eta_sq == doctest::Approx(ref.eta).epsilon(1e-8));
        CHECK(got.ss_within == doctest::Approx(ref.ssw).epsilon(1e-8));
    }
}

TEST_CASE("two-group anova F equals the squared pooled t") {
    ambigeo::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<double> a(3 + rng.below(20)), b(3 + rng.below(20));
        for (double& v : a) v = rng.normal();
        for (double& v : b) v = rng.normal() + 0.5;
        const double t = oracle::pooled_t(a, b);
        CHECK(one_way_anova({a, b}).f_value == doctest::Approx(t * t).epsilon(1e-9));
    }
}

TEST_CASE("anova degenerate cases") {
    const auto r = one_way_anova({{1, 1}, {2, 2}});
    CHECK(std::isinf(r.f_value));
    CHECK(r.p_value == 0.0);
    const auto same = one_way_anova({{1, 1}, {1, 1}});
    CHECK(same.f_value == 0.0);
    CHECK(same.p_value == 1.0);
    CHECK_ERROR(one_way_anova({{1, 2}}), ErrorCode::InsufficientData);
    CHECK_ERROR(one_way_anova({{1}, {2}}), ErrorCode::InsufficientData);
    CHECK_ERROR(one_way_anova({{1, 2}, {}}), ErrorCode::InsufficientData);
}

TEST_CASE("welch t") {
    const std::vector<double> a{1, 2, 3, 4, 10}, b{2, 2.5, 3.1};
    const auto r = welch_t(a, b);
    CHECK(r.t == doctest::Approx(0.9093937595040233).epsilon(1e-12));
    CHECK(r.df == doctest::Approx(4.31597881656101).epsilon(1e-12));
    CHECK(r.p == doctest::Approx(0.4110503267019326).epsilon(1e-9));
    CHECK(welch_t(b, a).t == doctest::Approx(-r.t));
    const std::vector<double> flat{2, 2, 2};
    CHECK_ERROR(welch_t(a, flat), ErrorCode::Domain);
    const std::vector<double> one{2};
    CHECK_ERROR(welch_t(a, one), ErrorCode::Domain);
}

TEST_CASE("mean_ci") {
    const std::vector<double> v{0, 1};
    const auto ci = mean_ci(v, 0.99);
    CHECK(ci.mean == 0.5);
    CHECK(ci.hi - ci.mean == doctest::Approx(1.2879146517744502).epsilon(1e-12));
    CHECK(ci.mean - ci.lo == doctest::Approx(1.2879146517744502).epsilon(1e-12));
    CHECK_ERROR(mean_ci(v, 1.0), ErrorCode::Precondition);
    const std::vector<double> one{1};
    CHECK_ERROR(mean_ci(one, 0.9), ErrorCode::InsufficientData);
}

TEST_CASE("interaction model recovers cell means") {
    // Cell means: (within, type) -> 0.2, 0.5, 0.3, 0.9. Interaction = 0.9-0.3-0.5+0.2.
    std::vector<double> sim, within, type;
    const double cell[2][2] = {{0.2, 0.3}, {0.5, 0.9}};
    for (int w = 0; w < 2; ++w) {
        for (int t = 0; t < 2; ++t) {
            for (double noise : {-0.01, 0.0, 0.01}) {
                sim.push_back(cell[w][t] + noise);
                within.push_back(w);
                type.push_back(t);
            }
        }
    }
    const auto fit = fit_interaction(sim, within, type);
    CHECK(fit.fit.coefficients[0] == doctest::Approx(0.2).epsilon(1e-12));
    CHECK(fit.fit.coefficients[1] == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(fit.fit.coefficients[2] == doctest::Approx(0.1).epsilon(1e-12));
    CHECK(fit.interaction() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(std::string(InteractionFit::kTerms[3]) == "within:word_type");
}
