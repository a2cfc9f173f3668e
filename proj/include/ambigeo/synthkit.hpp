#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ambigeo/embstore.hpp"
#include "ambigeo/geometry.hpp"
#include "ambigeo/stats.hpp"

namespace ambigeo::synthkit {

/// Gaussian clusters around unit-norm centres. Centres are a*b + s*e_i for a
/// shared random direction b and orthonormal directions e_i orthogonal to it,
/// with s = centre_separation / sqrt(2) and a = sqrt(1 - s^2), so every centre
/// has norm 1 and every pair of centres is centre_separation apart.
struct ClusterSpec {
    std::size_t n_clusters = 2;
    std::size_t points_per_cluster = 30;
    std::size_t dim = 16;
    double centre_separation = 0.6;  // at most sqrt(2)
    double within_spread = 0.1;      // isotropic per-coordinate sd
    std::uint64_t seed = 0;
};

void validate(const ClusterSpec& spec);

/// Labels are "c0".."c{k-1}", context ids "<word>#<row>". Same spec and seed
/// give bit-identical output.
embstore::LabeledEmbeddingSet gen_cluster_set(const ClusterSpec& spec, const std::string& word = "synthetic");

struct Condition {
    std::string name;
    ClusterSpec spec;
    double n_senses = 1.0;
    double n_meanings = 1.0;
};

struct WordResult {
    std::string condition;
    geometry::DiversityRecord record;
};

struct ConditionSummary {
    std::string name;
    std::size_t words = 0;
    double mean_diversity = 0.0;
    double sd_diversity = 0.0;
};

struct Contrast {
    std::string first;
    std::string second;
    stats::WelchResult welch;  // t follows mean(first) - mean(second)
    stats::AnovaResult anova;
};

struct ExperimentResult {
    std::vector<WordResult> words;
    std::vector<ConditionSummary> conditions;
    stats::AnovaResult omnibus;
    std::vector<Contrast> contrasts;  // every ordered pair first < second
};

/// Generates words_per_condition sets per condition with per-word seeds
/// derive_seed(seed, {condition index, word index}), measures their
/// diversity, and compares conditions (omnibus ANOVA plus pairwise Welch t
/// and two-group ANOVA).
ExperimentResult simulate_ambiguity_experiment(const std::vector<Condition>& conditions,
                                               std::size_t words_per_condition, std::uint64_t seed,
                                               unsigned threads = 1);

std::string to_json(const ExperimentResult& result);

/// Parsed synth profile file.
struct SynthConfig {
    std::uint64_t seed = 0;
    std::size_t words_per_condition = 30;
    std::vector<Condition> conditions;
    std::vector<std::pair<std::string, ClusterSpec>> fixtures;  // exported as EMBV1 + labels
};

SynthConfig parse_synth_config(const std::string& json_text);

/// Reference profiles: unambiguous (1 cluster), homonym (2 clusters,
/// separation 6x spread) and polyseme (6 clusters, separation 3x spread).
std::vector<Condition> reference_conditions();

namespace oracle {

/// Straightforward double loop over all ordered pairs i != j, recomputing
/// both norms every time. Independent of geometry::embedding_diversity.
double naive_diversity(const embstore::EmbeddingSet& set);

}  // namespace oracle

}  // namespace ambigeo::synthkit
