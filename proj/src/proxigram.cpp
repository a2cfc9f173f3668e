#include "ambigeo/proxigram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>

#include "ambigeo/error.hpp"
#include "ambigeo/geometry.hpp"
#include "ambigeo/textio.hpp"

namespace ambigeo::proxigram {

namespace {

constexpr double kViewBox = 1000.0;
constexpr double kMargin = 0.05 * kViewBox;

// Category colours for point fills, cycled by sorted label order.
constexpr std::array<std::string_view, 10> kLabelColours = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr std::string_view kUnlabelledColour = "#555555";

std::string coord(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

int hex_digit(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

}  // namespace

ProxigramGraph knn_graph(const embstore::EmbeddingSet& high_dim, const Matrix& layout, std::size_t k,
                         std::vector<std::string> labels) {
    const std::size_t n = high_dim.count();
    if (n < 2) throw Error(ErrorCode::InsufficientData, "proxigram needs at least 2 points");
    if (k == 0) throw Error(ErrorCode::Precondition, "proxigram needs k >= 1");
    if (layout.rows() != n || layout.cols() != 2) {
        throw Error(ErrorCode::Shape, "layout must be n x 2 matching the embedding rows");
    }
    if (!labels.empty() && labels.size() != n) throw Error(ErrorCode::Shape, "labels are not aligned with points");

    const auto norms = geometry::row_norms(high_dim);
    ProxigramGraph graph;
    graph.layout = layout;
    graph.context_ids = high_dim.context_ids;
    graph.labels = std::move(labels);
    graph.k = std::min(k, n - 1);
    graph.edges.reserve(n * graph.k);

    std::vector<std::pair<double, std::size_t>> candidates;
    candidates.reserve(n - 1);
    for (std::size_t i = 0; i < n; ++i) {
        candidates.clear();
        const auto ui = high_dim.row(i);
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const auto uj = high_dim.row(j);
            double dot = 0.0;
            for (std::size_t c = 0; c < ui.size(); ++c) dot += static_cast<double>(ui[c]) * uj[c];
            const double cos = std::clamp(dot / (norms[i] * norms[j]), -1.0, 1.0);
            candidates.emplace_back(1.0 - cos, j);
        }
        std::partial_sort(candidates.begin(), candidates.begin() + static_cast<std::ptrdiff_t>(graph.k),
                          candidates.end());
        for (std::size_t r = 0; r < graph.k; ++r) {
            graph.edges.push_back({i, candidates[r].second, candidates[r].first, r + 1});
        }
    }
    return graph;
}

Rgb parse_colour(std::string_view hex) {
    if (hex.size() != 7 || hex[0] != '#') throw Error(ErrorCode::Format, "colour must look like #rrggbb");
    unsigned char channels[3];
    for (int c = 0; c < 3; ++c) {
        const int hi = hex_digit(hex[1 + 2 * c]);
        const int lo = hex_digit(hex[2 + 2 * c]);
        if (hi < 0 || lo < 0) throw Error(ErrorCode::Format, "colour must look like #rrggbb");
        channels[c] = static_cast<unsigned char>(hi * 16 + lo);
    }
    return {channels[0], channels[1], channels[2]};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r, c.g, c.b);
    return buf;
}

Rgb edge_colour(double distance, double min_d, double max_d, const Palette& palette) {
    if (!(max_d > min_d)) return palette.near;
    const double t = std::clamp((distance - min_d) / (max_d - min_d), 0.0, 1.0);
    auto mix = [t](unsigned char a, unsigned char b) {
        return static_cast<unsigned char>(std::lround(a + t * (static_cast<double>(b) - a)));
    };
    return {mix(palette.near.r, palette.far.r), mix(palette.near.g, palette.far.g), mix(palette.near.b, palette.far.b)};
}

std::string render_proxigram(const ProxigramGraph& graph, const Palette& palette) {
    const std::size_t n = graph.size();
    if (n == 0) throw Error(ErrorCode::EmptyDataset, "cannot render an empty proxigram");

    double min_x = graph.layout(0, 0), max_x = min_x;
    double min_y = graph.layout(0, 1), max_y = min_y;
    for (std::size_t i = 1; i < n; ++i) {
        min_x = std::min(min_x, graph.layout(i, 0));
        max_x = std::max(max_x, graph.layout(i, 0));
        min_y = std::min(min_y, graph.layout(i, 1));
        max_y = std::max(max_y, graph.layout(i, 1));
    }
    const double extent = std::max(max_x - min_x, max_y - min_y);
    const double scale = extent > 0.0 ? (kViewBox - 2.0 * kMargin) / extent : 0.0;
    const double mid_x = 0.5 * (min_x + max_x);
    const double mid_y = 0.5 * (min_y + max_y);
    auto px = [&](std::size_t i) { return coord(0.5 * kViewBox + scale * (graph.layout(i, 0) - mid_x)); };
    auto py = [&](std::size_t i) { return coord(0.5 * kViewBox - scale * (graph.layout(i, 1) - mid_y)); };

    double min_d = 0.0, max_d = 0.0;
    if (!graph.edges.empty()) {
        const auto [lo, hi] = std::minmax_element(graph.edges.begin(), graph.edges.end(),
                                                  [](const Edge& a, const Edge& b) { return a.hd_distance < b.hd_distance; });
        min_d = lo->hd_distance;
        max_d = hi->hd_distance;
    }

    std::map<std::string, std::string_view> fill;
    for (const auto& label : graph.labels) fill.emplace(label, kUnlabelledColour);
    std::size_t next = 0;
    for (auto& [label, colour] : fill) colour = kLabelColours[next++ % kLabelColours.size()];

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" height=\"1000\" "
           "viewBox=\"0 0 1000 1000\">\n";
    svg += "<rect x=\"0\" y=\"0\" width=\"1000\" height=\"1000\" fill=\"#ffffff\"/>\n";
    svg += "<g stroke-width=\"1\" stroke-opacity=\"0.8\">\n";
    for (const auto& e : graph.edges) {
        svg += "<line x1=\"" + px(e.from) + "\" y1=\"" + py(e.from) + "\" x2=\"" + px(e.to) + "\" y2=\"" + py(e.to) +
               "\" stroke=\"" + to_hex(edge_colour(e.hd_distance, min_d, max_d, palette)) + "\"/>\n";
    }
    svg += "</g>\n<g stroke=\"#000000\" stroke-width=\"0.5\">\n";
    for (std::size_t i = 0; i < n; ++i) {
        const bool labelled = !graph.labels.empty();
        const std::string_view colour = labelled ? fill.at(graph.labels[i]) : kUnlabelledColour;
        std::string title = i < graph.context_ids.size() ? graph.context_ids[i] : std::to_string(i);
        if (labelled) title += " (" + graph.labels[i] + ")";
        svg += "<circle cx=\"" + px(i) + "\" cy=\"" + py(i) + "\" r=\"5\" fill=\"" + std::string(colour) +
               "\"><title>" + xml_escape(title) + "</title></circle>\n";
    }
    svg += "</g>\n</svg>\n";
    return svg;
}

std::string to_json(const ProxigramGraph& graph) {
    nlohmann::ordered_json j;
    j["k"] = graph.k;
    auto points = nlohmann::ordered_json::array();
    for (std::size_t i = 0; i < graph.size(); ++i) {
        nlohmann::ordered_json p;
        p["context_id"] = graph.context_ids[i];
        if (!graph.labels.empty()) p["label"] = graph.labels[i];
        p["x"] = graph.layout(i, 0);
        p["y"] = graph.layout(i, 1);
        points.push_back(std::move(p));
    }
    j["points"] = std::move(points);
    auto edges = nlohmann::ordered_json::array();
    for (const auto& e : graph.edges) {
        edges.push_back({{"from", e.from}, {"to", e.to}, {"rank", e.rank}, {"hd_distance", e.hd_distance}});
    }
    j["edges"] = std::move(edges);
    return j.dump(2) + "\n";
}

}  // namespace ambigeo::proxigram
