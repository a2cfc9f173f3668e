#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ambigeo/matrix.hpp"

namespace ambigeo::tsne {

struct TsneConfig {
    double perplexity = 30.0;
    std::size_t iterations = 1000;
    double learning_rate = 200.0;
    double early_exaggeration = 12.0;
    std::size_t exaggeration_iterations = 250;
    double initial_momentum = 0.5;
    double final_momentum = 0.8;
    std::size_t momentum_switch = 250;
    double init_sd = 1e-4;
    std::uint64_t seed = 0;
    unsigned threads = 1;
};

struct TsneResult {
    Matrix layout;                // n x 2, column means zero
    std::vector<double> kl_trace; // one value per iteration, unexaggerated P
};

struct ConditionalAffinities {
    Matrix p;                       // row-stochastic, zero diagonal
    std::vector<double> precision;  // Gaussian 1 / (2 sigma^2) per row
};

/// Per-row Gaussian conditionals with bandwidth bisected (at most 100 steps)
/// until exp(entropy) matches the perplexity. A row whose distances are all
/// zero has no usable bandwidth and raises DegenerateInput naming the row.
ConditionalAffinities conditional_affinities(const Matrix& x, double perplexity);

/// Joint affinities (P + P^T) / (2n): symmetric, zero diagonal, sums to 1.
Matrix hd_affinities(const Matrix& x, double perplexity);

/// KL(P || Q) with Q from the Student-t (one degree of freedom) kernel.
double kl_divergence(const Matrix& p, const Matrix& y);

/// dKL/dY: 4 * sum_j (p_ij - q_ij) (1 + |y_i - y_j|^2)^-1 (y_i - y_j).
Matrix kl_gradient(const Matrix& p, const Matrix& y);

/// Exact O(n^2) t-SNE in two dimensions. Gradient descent with momentum and
/// per-coordinate adaptive gains; P is multiplied by the exaggeration factor
/// for the first exaggeration_iterations steps. The layout is recentred
/// after every step. Deterministic for a fixed (x, config).
TsneResult tsne_embed(const Matrix& x, const TsneConfig& config);

}  // namespace ambigeo::tsne
