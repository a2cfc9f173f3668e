#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "ambigeo/embstore.hpp"

namespace ambigeo::geometry {

/// dot(u, v) / (|u| |v|) accumulated in double and clamped to [-1, 1].
double cosine_similarity(std::span<const double> u, std::span<const double> v);
double cosine_similarity(std::span<const float> u, std::span<const float> v);

inline double cosine_distance(std::span<const float> u, std::span<const float> v) {
    return 1.0 - cosine_similarity(u, v);
}

/// Euclidean norm of each row in double precision. Throws Domain naming the
/// first zero-norm row.
std::vector<double> row_norms(const embstore::EmbeddingSet& set);

struct DiversityRecord {
    std::string word;
    std::size_t context_count = 0;
    double diversity = 0.0;  // mean of 1 - cos over unordered distinct pairs
};

/// Mean pairwise cosine distance. Row i's partial sum over j > i is computed
/// independently (optionally in parallel) and partials are added in row
/// order, so the result is identical for any thread count.
DiversityRecord embedding_diversity(const embstore::EmbeddingSet& set, unsigned threads = 1);

void write_diversity_csv(std::ostream& out, const std::vector<DiversityRecord>& records);
std::vector<DiversityRecord> read_diversity_csv(std::istream& in);

enum class GroupStatus { Within, Between };

const char* to_string(GroupStatus status);

struct PairRecord {
    std::string word;
    GroupStatus group_status = GroupStatus::Within;
    double similarity = 0.0;
    std::size_t first = 0;  // row indices within the labeled set
    std::size_t second = 0;
};

/// One record per unordered pair (i < j), enumerated row-major.
std::vector<PairRecord> pairwise_records(const embstore::LabeledEmbeddingSet& data);

void write_pairs_csv(std::ostream& out, const std::vector<PairRecord>& pairs);
std::vector<PairRecord> read_pairs_csv(std::istream& in);

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

struct GroupSimilarityReport {
    std::string word;
    double within_mean = 0.0;
    double between_mean = 0.0;
    std::size_t within_pairs = 0;
    std::size_t between_pairs = 0;
    std::map<std::string, double> per_group_within;  // groups with 2+ members only
    double ci_level = 0.99;
    Interval within_ci;
    Interval between_ci;
};

/// Aggregates pair records into within/between means with normal-approximation
/// confidence intervals over the pair populations. Pairs that share a row are
/// treated as independent.
GroupSimilarityReport summarize_pairs(const std::vector<PairRecord>& pairs,
                                      const std::vector<std::string>& labels, double ci_level = 0.99);

GroupSimilarityReport group_similarity(const embstore::LabeledEmbeddingSet& data, double ci_level = 0.99);

std::string to_json(const GroupSimilarityReport& report);

}  // namespace ambigeo::geometry
