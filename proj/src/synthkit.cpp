#include "ambigeo/synthkit.hpp"

#include <cmath>
#include <numbers>

#include <json.hpp>

#include "ambigeo/error.hpp"
#include "ambigeo/parallel.hpp"
#include "ambigeo/random.hpp"
#include "ambigeo/textio.hpp"

namespace ambigeo::synthkit {

namespace {

// Random orthonormal vectors by Gram-Schmidt over Gaussian draws.
std::vector<std::vector<double>> random_orthonormal(std::size_t count, std::size_t dim, Rng& rng) {
    std::vector<std::vector<double>> basis;
    while (basis.size() < count) {
        std::vector<double> v(dim);
        for (double& x : v) x = rng.normal();
        for (const auto& b : basis) {
            double dot = 0.0;
            for (std::size_t i = 0; i < dim; ++i) dot += v[i] * b[i];
            for (std::size_t i = 0; i < dim; ++i) v[i] -= dot * b[i];
        }
        double norm = 0.0;
        for (double x : v) norm += x * x;
        norm = std::sqrt(norm);
        if (norm < 1e-8) continue;
        for (double& x : v) x /= norm;
        basis.push_back(std::move(v));
    }
    return basis;
}

ClusterSpec parse_spec(const nlohmann::json& j, const ClusterSpec& defaults) {
    ClusterSpec s = defaults;
    s.n_clusters = j.value("n_clusters", s.n_clusters);
    s.points_per_cluster = j.value("points_per_cluster", s.points_per_cluster);
    s.dim = j.value("dim", s.dim);
    s.centre_separation = j.value("centre_separation", s.centre_separation);
    s.within_spread = j.value("within_spread", s.within_spread);
    s.seed = j.value("seed", s.seed);
    validate(s);
    return s;
}

}  // namespace

void validate(const ClusterSpec& spec) {
    if (spec.n_clusters == 0) throw Error(ErrorCode::Configuration, "n_clusters must be at least 1");
    if (spec.points_per_cluster == 0) throw Error(ErrorCode::Configuration, "points_per_cluster must be at least 1");
    if (spec.dim == 0) throw Error(ErrorCode::Configuration, "dim must be at least 1");
    if (!(spec.centre_separation > 0.0) || spec.centre_separation > std::numbers::sqrt2) {
        throw Error(ErrorCode::Configuration, "centre_separation must be in (0, sqrt(2)] for unit-norm centres");
    }
    if (!(spec.within_spread > 0.0)) throw Error(ErrorCode::Configuration, "within_spread must be positive");
    if (spec.n_clusters > 1 && spec.dim < spec.n_clusters + 1) {
        throw Error(ErrorCode::Configuration, "dim " + std::to_string(spec.dim) + " cannot hold " +
                                                  std::to_string(spec.n_clusters) +
                                                  " orthogonal centre offsets plus a shared direction");
    }
}

embstore::LabeledEmbeddingSet gen_cluster_set(const ClusterSpec& spec, const std::string& word) {
    validate(spec);
    Rng rng(spec.seed);
    const std::size_t k = spec.n_clusters;
    const std::size_t d = spec.dim;
    const auto basis = random_orthonormal(k == 1 ? 1 : k + 1, d, rng);

    std::vector<std::vector<double>> centres;
    if (k == 1) {
        centres.push_back(basis[0]);
    } else {
        const double s = spec.centre_separation / std::numbers::sqrt2;
        const double a = std::sqrt(std::max(0.0, 1.0 - s * s));
        for (std::size_t c = 0; c < k; ++c) {
            std::vector<double> centre(d);
            for (std::size_t i = 0; i < d; ++i) centre[i] = a * basis[0][i] + s * basis[c + 1][i];
            centres.push_back(std::move(centre));
        }
    }

    const std::size_t n = k * spec.points_per_cluster;
    embstore::LabeledEmbeddingSet out;
    out.set.word = word;
    out.set.vectors = FloatMatrix(n, d);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t p = 0; p < spec.points_per_cluster; ++p) {
            const std::size_t row = c * spec.points_per_cluster + p;
            auto dst = out.set.vectors.row(row);
            double norm = 0.0;
            do {
                norm = 0.0;
                for (std::size_t i = 0; i < d; ++i) {
                    dst[i] = static_cast<float>(centres[c][i] + spec.within_spread * rng.normal());
                    norm += static_cast<double>(dst[i]) * dst[i];
                }
            } while (!(norm > 0.0));
            out.set.context_ids.push_back(word + "#" + std::to_string(row));
            out.labels.push_back("c" + std::to_string(c));
        }
    }
    return out;
}

ExperimentResult simulate_ambiguity_experiment(const std::vector<Condition>& conditions,
                                               std::size_t words_per_condition, std::uint64_t seed,
                                               unsigned threads) {
    if (conditions.size() < 2) throw Error(ErrorCode::Precondition, "experiment needs at least 2 conditions");
    if (words_per_condition < 2) throw Error(ErrorCode::Precondition, "experiment needs at least 2 words per condition");

    ExperimentResult result;
    result.words.resize(conditions.size() * words_per_condition);
    parallel_for(result.words.size(), threads, [&](std::size_t slot) {
        const std::size_t c = slot / words_per_condition;
        const std::size_t w = slot % words_per_condition;
        ClusterSpec spec = conditions[c].spec;
        spec.seed = derive_seed(seed, {c, w});
        const std::string word = conditions[c].name + "_" + std::to_string(w);
        const auto set = gen_cluster_set(spec, word);
        result.words[slot] = {conditions[c].name, geometry::embedding_diversity(set.set)};
    });

    std::vector<std::vector<double>> groups(conditions.size());
    for (std::size_t slot = 0; slot < result.words.size(); ++slot) {
        groups[slot / words_per_condition].push_back(result.words[slot].record.diversity);
    }
    for (std::size_t c = 0; c < conditions.size(); ++c) {
        result.conditions.push_back({conditions[c].name, groups[c].size(), stats::mean(groups[c]),
                                     std::sqrt(stats::sample_variance(groups[c]))});
    }
    result.omnibus = stats::one_way_anova(groups);
    for (std::size_t a = 0; a < conditions.size(); ++a) {
        for (std::size_t b = a + 1; b < conditions.size(); ++b) {
            result.contrasts.push_back({conditions[a].name, conditions[b].name, stats::welch_t(groups[a], groups[b]),
                                        stats::one_way_anova({groups[a], groups[b]})});
        }
    }
    return result;
}

namespace {

nlohmann::ordered_json anova_json(const stats::AnovaResult& a) {
    nlohmann::ordered_json j;
    j["F"] = textio::json_number(a.f_value);
    j["df"] = {a.df_between, a.df_within};
    j["p"] = textio::json_number(a.p_value);
    j["partial_eta_sq"] = textio::json_number(a.partial_eta_sq);
    return j;
}

}  // namespace

std::string to_json(const ExperimentResult& r) {
    nlohmann::ordered_json j;
    auto conds = nlohmann::ordered_json::array();
    for (const auto& c : r.conditions) {
        conds.push_back({{"name", c.name},
                         {"words", c.words},
                         {"mean_diversity", textio::json_number(c.mean_diversity)},
                         {"sd_diversity", textio::json_number(c.sd_diversity)}});
    }
    j["conditions"] = std::move(conds);
    j["omnibus"] = anova_json(r.omnibus);
    auto contrasts = nlohmann::ordered_json::array();
    for (const auto& c : r.contrasts) {
        nlohmann::ordered_json cj;
        cj["first"] = c.first;
        cj["second"] = c.second;
        cj["welch"] = {{"t", textio::json_number(c.welch.t)},
                       {"df", textio::json_number(c.welch.df)},
                       {"p", textio::json_number(c.welch.p)}};
        cj["anova"] = anova_json(c.anova);
        contrasts.push_back(std::move(cj));
    }
    j["contrasts"] = std::move(contrasts);
    return j.dump(2) + "\n";
}

SynthConfig parse_synth_config(const std::string& json_text) {
    SynthConfig config;
    try {
        const auto j = nlohmann::json::parse(json_text);
        config.seed = j.value("seed", config.seed);
        config.words_per_condition = j.value("words_per_condition", config.words_per_condition);
        const ClusterSpec defaults = j.contains("defaults") ? parse_spec(j["defaults"], ClusterSpec{}) : ClusterSpec{};
        for (const auto& c : j.at("conditions")) {
            Condition cond;
            cond.name = c.at("name").get<std::string>();
            cond.spec = parse_spec(c, defaults);
            cond.n_senses = c.value("n_senses", static_cast<double>(cond.spec.n_clusters));
            cond.n_meanings = c.value("n_meanings", 1.0);
            config.conditions.push_back(std::move(cond));
        }
        if (j.contains("fixtures")) {
            for (const auto& f : j["fixtures"]) {
                config.fixtures.emplace_back(f.at("name").get<std::string>(), parse_spec(f, defaults));
            }
        }
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("synth config: ") + e.what());
    }
    if (config.conditions.size() < 2) throw Error(ErrorCode::Configuration, "synth config needs at least 2 conditions");
    return config;
}

std::vector<Condition> reference_conditions() {
    constexpr double spread = 0.1;
    constexpr std::size_t dim = 16;
    return {
        {"unambiguous", {1, 60, dim, 6 * spread, spread, 0}, 1.0, 1.0},
        {"homonym", {2, 30, dim, 6 * spread, spread, 0}, 2.0, 2.0},
        {"polyseme", {6, 10, dim, 3 * spread, spread, 0}, 6.0, 1.0},
    };
}

namespace oracle {

double naive_diversity(const embstore::EmbeddingSet& set) {
    const std::size_t n = set.count();
    double sum = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            if (i == j) continue;
            double dot = 0.0, ni = 0.0, nj = 0.0;
            for (std::size_t k = 0; k < set.dim(); ++k) {
                const double a = set.vectors(i, k);
                const double b = set.vectors(j, k);
                dot += a * b;
                ni += a * a;
                nj += b * b;
            }
            sum += 1.0 - dot / std::sqrt(ni * nj);
            ++pairs;
        }
    }
    return sum / static_cast<double>(pairs);
}

}  // namespace oracle

}  // namespace ambigeo::synthkit
