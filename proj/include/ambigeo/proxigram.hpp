#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "ambigeo/embstore.hpp"
#include "ambigeo/matrix.hpp"

namespace ambigeo::proxigram {

struct Edge {
    std::size_t from = 0;
    std::size_t to = 0;
    double hd_distance = 0.0;  // cosine distance in the original space
    std::size_t rank = 1;      // 1 = nearest

    bool operator==(const Edge&) const = default;
};

struct ProxigramGraph {
    Matrix layout;  // n x 2
    std::vector<std::string> context_ids;
    std::vector<std::string> labels;  // empty, or one per point
    std::vector<Edge> edges;          // grouped by `from`, ranked
    std::size_t k = 0;                // effective neighbours per point, min(k, n - 1)

    std::size_t size() const noexcept { return layout.rows(); }
};

/// Each point's k nearest neighbours by high-dimensional cosine distance;
/// ties go to the lower index. k is capped at n - 1.
ProxigramGraph knn_graph(const embstore::EmbeddingSet& high_dim, const Matrix& layout, std::size_t k,
                         std::vector<std::string> labels = {});

struct Rgb {
    unsigned char r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

Rgb parse_colour(std::string_view hex);  // "#rrggbb"
std::string to_hex(Rgb c);

struct Palette {
    Rgb near{255, 0, 0};
    Rgb far{0, 0, 255};
};

/// Linear interpolation in raw distance over [min_d, max_d]. A zero-width
/// range maps everything to the near colour.
Rgb edge_colour(double distance, double min_d, double max_d, const Palette& palette);

/// SVG 1.1 document: edges as <line> (drawn first), points as <circle> with
/// a <title> carrying the context id. Coordinates are mapped with a uniform
/// scale into a 1000x1000 viewBox leaving a 5% margin. Byte-deterministic.
std::string render_proxigram(const ProxigramGraph& graph, const Palette& palette = {});

std::string to_json(const ProxigramGraph& graph);

}  // namespace ambigeo::proxigram
