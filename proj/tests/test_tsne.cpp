#include <doctest.h>

#include <cmath>

#include "ambigeo/random.hpp"
#include "ambigeo/tsne.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ambigeo::tsne;
using ambigeo::ErrorCode;
using ambigeo::Matrix;

namespace {

// KL(P||Q) straight from the definition, for finite differences.
double naive_kl(const Matrix& p, const Matrix& y) {
    const std::size_t n = y.rows();
    double z = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
            z += 1.0 / (1.0 + dx * dx + dy * dy);
        }
    }
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j || p(i, j) <= 0.0) continue;
            const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
            const double q = 1.0 / (1.0 + dx * dx + dy * dy) / z;
            kl += p(i, j) * std::log(p(i, j) / q);
        }
    }
    return kl;
}

Matrix two_blobs(std::size_t per, ambigeo::Rng& rng) {
    Matrix x(2 * per, 5);
    for (std::size_t i = 0; i < 2 * per; ++i) {
        for (std::size_t k = 0; k < 5; ++k) x(i, k) = rng.normal() + (i < per ? 0.0 : 10.0);
    }
    return x;
}

}  // namespace

TEST_CASE("conditional affinities hit the requested perplexity") {
    ambigeo::Rng rng(1);
    for (double perplexity : {2.0, 5.0, 15.0}) {
        const Matrix x = oracle::random_matrix(40, 6, rng);
        const auto cond = conditional_affinities(x, perplexity);
        for (std::size_t i = 0; i < x.rows(); ++i) {
            double sum = 0.0, h = 0.0;
            CHECK(cond.p(i, i) == 0.0);
            for (std::size_t j = 0; j < x.rows(); ++j) {
                const double v = cond.p(i, j);
                sum += v;
                if (v > 0.0) h -= v * std::log(v);
            }
            CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
            CHECK(std::exp(h) == doctest::Approx(perplexity).epsilon(1e-3 / perplexity));
            CHECK(cond.precision[i] > 0.0);
        }
    }
}

TEST_CASE("joint affinities are a symmetric distribution") {
    ambigeo::Rng rng(2);
    const Matrix x = oracle::random_matrix(25, 4, rng);
    const Matrix p = hd_affinities(x, 5.0);
    double total = 0.0;
    for (std::size_t i = 0; i < 25; ++i) {
        CHECK(p(i, i) == 0.0);
        for (std::size_t j = 0; j < 25; ++j) {
            CHECK(p(i, j) == p(j, i));
            total += p(i, j);
        }
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("analytic gradient matches central differences") {
    ambigeo::Rng rng(3);
    for (int trial = 0; trial < 20; ++trial) {
        const std::size_t n = 5 + rng.below(15);
        const Matrix x = oracle::random_matrix(n, 3, rng);
        const Matrix p = hd_affinities(x, 2.0 + rng.uniform() * (static_cast<double>(n) / 3.0));
        Matrix y = oracle::random_matrix(n, 2, rng);
        const Matrix g = kl_gradient(p, y);
        CHECK(kl_divergence(p, y) == doctest::Approx(naive_kl(p, y)).epsilon(1e-10));
        const double h = 1e-5;
        for (std::size_t k = 0; k < y.data().size(); ++k) {
            const double keep = y.data()[k];
            y.data()[k] = keep + h;
            const double up = naive_kl(p, y);
            y.data()[k] = keep - h;
            const double down = naive_kl(p, y);
            y.data()[k] = keep;
            const double fd = (up - down) / (2 * h);
            CHECK(std::fabs(g.data()[k] - fd) <= 1e-4 * std::fabs(fd) + 1e-9);
        }
    }
}

TEST_CASE("gradient vanishes when Q equals P") {
    // Q computed from a layout is itself a valid joint distribution.
    ambigeo::Rng rng(12);
    const Matrix y = oracle::random_matrix(8, 2, rng);
    Matrix q(8, 8);
    double z = 0.0;
    for (std::size_t i = 0; i < 8; ++i) {
        for (std::size_t j = 0; j < 8; ++j) {
            if (i == j) continue;
            const double dx = y(i, 0) - y(j, 0), dy = y(i, 1) - y(j, 1);
            q(i, j) = 1.0 / (1.0 + dx * dx + dy * dy);
            z += q(i, j);
        }
    }
    for (double& v : q.data()) v /= z;
    const Matrix grad = kl_gradient(q, y);
    for (double g : grad.data()) CHECK(std::fabs(g) < 1e-14);
    CHECK(kl_divergence(q, y) == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("embedding is deterministic and centred") {
    ambigeo::Rng rng(4);
    const Matrix x = two_blobs(15, rng);
    TsneConfig cfg;
    cfg.perplexity = 8;
    cfg.iterations = 300;
    cfg.seed = 17;
    const auto a = tsne_embed(x, cfg);
    cfg.threads = 3;
    const auto b = tsne_embed(x, cfg);
    CHECK(a.layout == b.layout);
    CHECK(a.kl_trace == b.kl_trace);
    CHECK(a.kl_trace.size() == 300);
    for (std::size_t c = 0; c < 2; ++c) {
        double m = 0.0;
        for (std::size_t i = 0; i < x.rows(); ++i) m += a.layout(i, c);
        CHECK(std::fabs(m / static_cast<double>(x.rows())) < 1e-9);
    }
    cfg.seed = 18;
    CHECK(tsne_embed(x, cfg).layout != a.layout);
    for (double kl : a.kl_trace) {
        CHECK(std::isfinite(kl));
        CHECK(kl >= 0.0);
    }
}

TEST_CASE("KL after the full run is no worse than after exaggeration") {
    ambigeo::Rng rng(8);
    const Matrix x = two_blobs(20, rng);
    TsneConfig cfg;
    cfg.perplexity = 10;
    const auto r = tsne_embed(x, cfg);
    REQUIRE(r.kl_trace.size() == 1000);
    CHECK(r.kl_trace[999] <= r.kl_trace[299]);
}

TEST_CASE("separated blobs stay separated") {
    ambigeo::Rng rng(5);
    const Matrix x = two_blobs(20, rng);
    TsneConfig cfg;
    cfg.perplexity = 10;
    cfg.iterations = 500;
    const auto r = tsne_embed(x, cfg);
    std::size_t pure = 0;
    for (std::size_t i = 0; i < 40; ++i) {
        std::size_t best = i;
        double best_d = INFINITY;
        for (std::size_t j = 0; j < 40; ++j) {
            if (j == i) continue;
            const double dx = r.layout(i, 0) - r.layout(j, 0), dy = r.layout(i, 1) - r.layout(j, 1);
            if (dx * dx + dy * dy < best_d) {
                best_d = dx * dx + dy * dy;
                best = j;
            }
        }
        pure += (i < 20) == (best < 20);
    }
    CHECK(pure == 40);
    CHECK(r.kl_trace.back() < r.kl_trace[cfg.exaggeration_iterations]);
}

TEST_CASE("t-SNE input checks") {
    Matrix same(5, 3, 1.0);
    TsneConfig cfg;
    cfg.perplexity = 2;
    cfg.iterations = 300;
    CHECK_ERROR(tsne_embed(same, cfg), ErrorCode::DegenerateInput);
    ambigeo::Rng rng(6);
    const Matrix x = oracle::random_matrix(10, 3, rng);
    cfg.perplexity = 10;
    CHECK_ERROR(tsne_embed(x, cfg), ErrorCode::Precondition);
    CHECK_ERROR(tsne_embed(oracle::random_matrix(2, 3, rng), cfg), ErrorCode::InsufficientData);
    cfg.perplexity = 3;
    cfg.iterations = 0;
    CHECK_ERROR(tsne_embed(x, cfg), ErrorCode::Configuration);
}
