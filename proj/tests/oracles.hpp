#pragma once

// Brute-force reference implementations used only by the tests. Each one
// follows the textbook definition directly and shares no code with the
// library path it checks.

#include <cmath>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ambigeo/matrix.hpp"
#include "ambigeo/random.hpp"

namespace oracle {

// Gauss-Jordan inverse with partial pivoting.
inline std::vector<std::vector<double>> invert(std::vector<std::vector<double>> a) {
    const std::size_t n = a.size();
    std::vector<std::vector<double>> inv(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1.0;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t pivot = col;
        for (std::size_t r = col + 1; r < n; ++r) {
            if (std::fabs(a[r][col]) > std::fabs(a[pivot][col])) pivot = r;
        }
        std::swap(a[col], a[pivot]);
        std::swap(inv[col], inv[pivot]);
        const double d = a[col][col];
        for (std::size_t c = 0; c < n; ++c) {
            a[col][c] /= d;
            inv[col][c] /= d;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col) continue;
            const double f = a[r][col];
            for (std::size_t c = 0; c < n; ++c) {
                a[r][c] -= f * a[col][c];
                inv[r][c] -= f * inv[col][c];
            }
        }
    }
    return inv;
}

struct NaiveOls {
    std::vector<double> b, se, t, beta;
    double r2 = 0.0;
};

// b = (X'X)^-1 X'y, se from sigma^2 (X'X)^-1, beta from a refit on z-scores.
inline NaiveOls naive_ols(const std::vector<double>& y, const ambigeo::Matrix& x) {
    const std::size_t n = x.rows(), k = x.cols();
    std::vector<std::vector<double>> xtx(k, std::vector<double>(k, 0.0));
    std::vector<double> xty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            xty[a] += x(i, a) * y[i];
            for (std::size_t b = 0; b < k; ++b) xtx[a][b] += x(i, a) * x(i, b);
        }
    }
    const auto inv = invert(xtx);
    NaiveOls out;
    out.b.assign(k, 0.0);
    for (std::size_t a = 0; a < k; ++a) {
        for (std::size_t b = 0; b < k; ++b) out.b[a] += inv[a][b] * xty[b];
    }
    double rss = 0.0, ym = 0.0;
    for (double v : y) ym += v;
    ym /= static_cast<double>(n);
    double tss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fitted = 0.0;
        for (std::size_t a = 0; a < k; ++a) fitted += x(i, a) * out.b[a];
        rss += (y[i] - fitted) * (y[i] - fitted);
        tss += (y[i] - ym) * (y[i] - ym);
    }
    const double sigma2 = rss / static_cast<double>(n - k);
    for (std::size_t a = 0; a < k; ++a) {
        out.se.push_back(std::sqrt(sigma2 * inv[a][a]));
        out.t.push_back(out.b[a] / out.se.back());
    }
    out.r2 = 1.0 - rss / tss;

    // Refit on z-scored data (constant columns kept as the intercept).
    auto sd = [n](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m += e;
        m /= static_cast<double>(n);
        double s = 0.0;
        for (double e : v) s += (e - m) * (e - m);
        return std::pair{m, std::sqrt(s / static_cast<double>(n - 1))};
    };
    const auto [my, sy] = sd(y);
    std::vector<double> zy(n);
    for (std::size_t i = 0; i < n; ++i) zy[i] = (y[i] - my) / sy;
    ambigeo::Matrix zx(n, k);
    std::vector<bool> constant(k, false);
    for (std::size_t a = 0; a < k; ++a) {
        std::vector<double> col(n);
        for (std::size_t i = 0; i < n; ++i) col[i] = x(i, a);
        const auto [m, s] = sd(col);
        constant[a] = s == 0.0;
        for (std::size_t i = 0; i < n; ++i) zx(i, a) = constant[a] ? 1.0 : (col[i] - m) / s;
    }
    std::vector<std::vector<double>> ztz(k, std::vector<double>(k, 0.0));
    std::vector<double> zty(k, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t a = 0; a < k; ++a) {
            zty[a] += zx(i, a) * zy[i];
            for (std::size_t b = 0; b < k; ++b) ztz[a][b] += zx(i, a) * zx(i, b);
        }
    }
    const auto zinv = invert(ztz);
    for (std::size_t a = 0; a < k; ++a) {
        double v = 0.0;
        for (std::size_t b = 0; b < k; ++b) v += zinv[a][b] * zty[b];
        out.beta.push_back(constant[a] ? 0.0 : v);
    }
    return out;
}

struct NaiveAnova {
    double f = 0.0, eta = 0.0, ssb = 0.0, ssw = 0.0;
};

// Sums of squares from their definitions: total minus within.
inline NaiveAnova naive_anova(const std::vector<std::vector<double>>& groups) {
    std::size_t n = 0;
    double grand = 0.0;
    for (const auto& g : groups) {
        for (double v : g) {
            grand += v;
            ++n;
        }
    }
    grand /= static_cast<double>(n);
    double sst = 0.0, ssw = 0.0;
    for (const auto& g : groups) {
        double m = 0.0;
        for (double v : g) m += v;
        m /= static_cast<double>(g.size());
        for (double v : g) {
            sst += (v - grand) * (v - grand);
            ssw += (v - m) * (v - m);
        }
    }
    NaiveAnova out;
    out.ssw = ssw;
    out.ssb = sst - ssw;
    const double dfb = static_cast<double>(groups.size() - 1);
    const double dfw = static_cast<double>(n - groups.size());
    out.f = (out.ssb / dfb) / (ssw / dfw);
    out.eta = out.ssb / sst;
    return out;
}

// Classical pooled-variance two-sample t.
inline double pooled_t(const std::vector<double>& a, const std::vector<double>& b) {
    auto mv = [](const std::vector<double>& v) {
        double m = 0.0;
        for (double e : v) m += e;
        m /= static_cast<double>(v.size());
        double s = 0.0;
        for (double e : v) s += (e - m) * (e - m);
        return std::pair{m, s};
    };
    const auto [ma, ssa] = mv(a);
    const auto [mb, ssb] = mv(b);
    const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
    const double sp2 = (ssa + ssb) / (na + nb - 2.0);
    return (ma - mb) / std::sqrt(sp2 * (1.0 / na + 1.0 / nb));
}

using Column = std::vector<std::optional<std::string>>;

// Krippendorff's nominal alpha by explicit pair enumeration:
//   D_o = sum over units, over ordered pairs of values from distinct coders,
//         of mismatch / (m_u - 1), divided by n
//   D_e = mismatches over all ordered pairs of pairable values, / (n (n - 1))
inline double brute_alpha(const std::vector<Column>& columns) {
    std::vector<std::string> pool;
    double observed = 0.0;
    const std::size_t units = columns.front().size();
    for (std::size_t u = 0; u < units; ++u) {
        std::vector<std::string> values;
        for (const auto& c : columns) {
            if (c[u]) values.push_back(*c[u]);
        }
        if (values.size() < 2) continue;
        for (std::size_t i = 0; i < values.size(); ++i) {
            for (std::size_t j = 0; j < values.size(); ++j) {
                if (i != j && values[i] != values[j]) observed += 1.0 / static_cast<double>(values.size() - 1);
            }
        }
        pool.insert(pool.end(), values.begin(), values.end());
    }
    const double n = static_cast<double>(pool.size());
    double expected = 0.0;
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = 0; j < pool.size(); ++j) {
            if (i != j && pool[i] != pool[j]) expected += 1.0;
        }
    }
    return 1.0 - (observed / n) / (expected / (n * (n - 1.0)));
}

inline ambigeo::Matrix random_matrix(std::size_t rows, std::size_t cols, ambigeo::Rng& rng) {
    ambigeo::Matrix m(rows, cols);
    for (double& v : m.data()) v = rng.normal();
    return m;
}

}  // namespace oracle
