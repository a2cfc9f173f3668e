#include "ambigeo/tsne.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ambigeo/error.hpp"
#include "ambigeo/parallel.hpp"
#include "ambigeo/random.hpp"

namespace ambigeo::tsne {

namespace {

constexpr int kMaxBisectionSteps = 100;
constexpr double kPerplexityTolerance = 1e-5;
constexpr double kMinGain = 0.01;

void check_input(const Matrix& x, double perplexity) {
    const std::size_t n = x.rows();
    if (n < 3) throw Error(ErrorCode::InsufficientData, "t-SNE needs at least 3 points");
    if (x.cols() == 0) throw Error(ErrorCode::Shape, "t-SNE input has zero columns");
    if (!(perplexity > 0.0) || !(perplexity < static_cast<double>(n))) {
        throw Error(ErrorCode::Precondition, "perplexity must be in (0, n) with n = " + std::to_string(n));
    }
    for (double v : x.data()) {
        if (!std::isfinite(v)) throw Error(ErrorCode::Validation, "t-SNE input contains non-finite values");
    }
}

Matrix squared_distances(const Matrix& x) {
    const std::size_t n = x.rows();
    Matrix d(n, n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            double s = 0.0;
            for (std::size_t k = 0; k < x.cols(); ++k) {
                const double diff = x(i, k) - x(j, k);
                s += diff * diff;
            }
            d(i, j) = s;
            d(j, i) = s;
        }
    }
    return d;
}

// Student-t kernel values (1 + |y_i - y_j|^2)^-1 with zero diagonal, and their total.
struct Kernel {
    Matrix num;
    double total = 0.0;
};

Kernel student_kernel(const Matrix& y, unsigned threads) {
    const std::size_t n = y.rows();
    Kernel k{Matrix(n, n), 0.0};
    std::vector<double> row_sums(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        double sum = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dx = y(i, 0) - y(j, 0);
            const double dy = y(i, 1) - y(j, 1);
            const double v = 1.0 / (1.0 + dx * dx + dy * dy);
            k.num(i, j) = v;
            sum += v;
        }
        row_sums[i] = sum;
    });
    for (double s : row_sums) k.total += s;
    return k;
}

double kl_from_kernel(const Matrix& p, const Kernel& k) {
    const std::size_t n = p.rows();
    double kl = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            const double pij = p(i, j);
            if (i == j || pij <= 0.0) continue;
            kl += pij * std::log(pij * k.total / k.num(i, j));
        }
    }
    return std::max(0.0, kl);
}

void gradient_from_kernel(const Matrix& p, const Matrix& y, const Kernel& k, double p_scale, Matrix& grad,
                          unsigned threads) {
    const std::size_t n = p.rows();
    parallel_for(n, threads, [&](std::size_t i) {
        double gx = 0.0;
        double gy = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double num = k.num(i, j);
            const double coeff = (p_scale * p(i, j) - num / k.total) * num;
            gx += coeff * (y(i, 0) - y(j, 0));
            gy += coeff * (y(i, 1) - y(j, 1));
        }
        grad(i, 0) = 4.0 * gx;
        grad(i, 1) = 4.0 * gy;
    });
}

void check_layout(const Matrix& p, const Matrix& y) {
    if (p.rows() != p.cols()) throw Error(ErrorCode::Shape, "affinity matrix is not square");
    if (y.rows() != p.rows() || y.cols() != 2) {
        throw Error(ErrorCode::Shape, "layout must be n x 2 matching the affinity matrix");
    }
}

void recentre(Matrix& y) {
    const std::size_t n = y.rows();
    for (std::size_t c = 0; c < 2; ++c) {
        double m = 0.0;
        for (std::size_t i = 0; i < n; ++i) m += y(i, c);
        m /= static_cast<double>(n);
        for (std::size_t i = 0; i < n; ++i) y(i, c) -= m;
    }
}

}  // namespace

ConditionalAffinities conditional_affinities(const Matrix& x, double perplexity) {
    check_input(x, perplexity);
    const std::size_t n = x.rows();
    const Matrix dist = squared_distances(x);
    const double target_entropy = std::log(perplexity);

    ConditionalAffinities out{Matrix(n, n), std::vector<double>(n, 1.0)};
    std::vector<double> row(n);
    for (std::size_t i = 0; i < n; ++i) {
        double d_min = std::numeric_limits<double>::infinity();
        double d_max = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            d_min = std::min(d_min, dist(i, j));
            d_max = std::max(d_max, dist(i, j));
        }
        if (!(d_max > 0.0)) {
            throw Error(ErrorCode::DegenerateInput,
                        "row " + std::to_string(i) + " has zero distance to every other point");
        }

        double beta = 1.0 / (d_max - d_min > 0.0 ? d_max - d_min : d_max);
        double beta_lo = 0.0;
        double beta_hi = std::numeric_limits<double>::infinity();
        for (int step = 0; step < kMaxBisectionSteps; ++step) {
            // Shifting by d_min keeps the nearest neighbour's weight at 1.
            double sum = 0.0;
            double weighted = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                if (j == i) {
                    row[j] = 0.0;
                    continue;
                }
                const double shifted = dist(i, j) - d_min;
                row[j] = std::exp(-beta * shifted);
                sum += row[j];
                weighted += shifted * row[j];
            }
            const double entropy = std::log(sum) + beta * weighted / sum;
            for (std::size_t j = 0; j < n; ++j) out.p(i, j) = row[j] / sum;
            out.precision[i] = beta;

            if (std::fabs(std::exp(entropy) - perplexity) < kPerplexityTolerance) break;
            if (entropy > target_entropy) {
                beta_lo = beta;
                beta = std::isinf(beta_hi) ? beta * 2.0 : 0.5 * (beta + beta_hi);
            } else {
                beta_hi = beta;
                beta = 0.5 * (beta + beta_lo);
            }
        }
    }
    return out;
}

Matrix hd_affinities(const Matrix& x, double perplexity) {
    const Matrix cond = conditional_affinities(x, perplexity).p;
    const std::size_t n = cond.rows();
    Matrix p(n, n);
    const double scale = 1.0 / (2.0 * static_cast<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = (cond(i, j) + cond(j, i)) * scale;
            p(i, j) = v;
            p(j, i) = v;
        }
    }
    return p;
}

double kl_divergence(const Matrix& p, const Matrix& y) {
    check_layout(p, y);
    return kl_from_kernel(p, student_kernel(y, 1));
}

Matrix kl_gradient(const Matrix& p, const Matrix& y) {
    check_layout(p, y);
    Matrix grad(y.rows(), 2);
    gradient_from_kernel(p, y, student_kernel(y, 1), 1.0, grad, 1);
    return grad;
}

TsneResult tsne_embed(const Matrix& x, const TsneConfig& config) {
    check_input(x, config.perplexity);
    if (config.iterations == 0) throw Error(ErrorCode::Configuration, "t-SNE needs at least one iteration");
    if (!(config.learning_rate > 0.0)) throw Error(ErrorCode::Configuration, "learning rate must be positive");
    if (config.early_exaggeration != 1.0 && config.iterations < config.exaggeration_iterations) {
        throw Error(ErrorCode::Configuration, "iterations must cover the early-exaggeration phase");
    }
    const std::size_t n = x.rows();
    bool all_identical = true;
    for (std::size_t i = 1; i < n && all_identical; ++i) {
        all_identical = std::equal(x.row(i).begin(), x.row(i).end(), x.row(0).begin());
    }
    if (all_identical) throw Error(ErrorCode::DegenerateInput, "all t-SNE input points are identical");

    const Matrix p = hd_affinities(x, config.perplexity);
    Rng rng(config.seed);
    Matrix y(n, 2);
    for (double& v : y.data()) v = config.init_sd * rng.normal();

    Matrix grad(n, 2);
    Matrix update(n, 2);
    Matrix gains(n, 2, 1.0);
    TsneResult result;
    result.kl_trace.reserve(config.iterations);
    Kernel kernel = student_kernel(y, config.threads);
    for (std::size_t it = 0; it < config.iterations; ++it) {
        const double exaggeration = it < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
        const double momentum = it < config.momentum_switch ? config.initial_momentum : config.final_momentum;
        gradient_from_kernel(p, y, kernel, exaggeration, grad, config.threads);
        for (std::size_t k = 0; k < grad.data().size(); ++k) {
            double& gain = gains.data()[k];
            const double g = grad.data()[k];
            double& u = update.data()[k];
            gain = (g > 0.0) != (u > 0.0) ? gain + 0.2 : gain * 0.8;
            gain = std::max(gain, kMinGain);
            u = momentum * u - config.learning_rate * gain * g;
            y.data()[k] += u;
        }
        recentre(y);
        kernel = student_kernel(y, config.threads);
        result.kl_trace.push_back(kl_from_kernel(p, kernel));
    }
    recentre(y);
    result.layout = std::move(y);
    return result;
}

}  // namespace ambigeo::tsne
