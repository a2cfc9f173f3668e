#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "ambigeo/matrix.hpp"

namespace ambigeo::embstore {

inline constexpr std::string_view kMagic = "EMBV1\n";
inline constexpr std::string_view kOtherLabel = "other";
inline constexpr std::string_view kAutoSource = "auto-translation";

/// Contextual embeddings of one target word, one row per context.
struct EmbeddingSet {
    std::string word;
    std::vector<std::string> context_ids;
    FloatMatrix vectors;  // count x dim

    std::size_t count() const noexcept { return vectors.rows(); }
    std::size_t dim() const noexcept { return vectors.cols(); }
    std::span<const float> row(std::size_t i) const { return vectors.row(i); }

    bool operator==(const EmbeddingSet&) const = default;
};

/// Throws Validation unless the set is non-empty, ids are unique and match
/// the row count, and every value is finite.
void validate(const EmbeddingSet& set);

/// Serializes to EMBV1: magic, u32le header length, JSON header, then
/// count*dim f32le values row-major. Returns the number of bytes written.
std::size_t write_embv1(const EmbeddingSet& set, std::ostream& sink);
EmbeddingSet read_embv1(std::istream& source);

void save_embv1(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet load_embv1(const std::filesystem::path& path);

struct SenseLabeling {
    std::string target;
    std::string source;  // "auto-translation" or "rater:<id>"
    std::map<std::string, std::string> entries;  // context_id -> label

    bool operator==(const SenseLabeling&) const = default;
};

/// Label JSONL: {"context_id","target","source","label"} per line. A file
/// holds exactly one (target, source) labeling.
SenseLabeling read_labels_jsonl(std::istream& in);
void write_labels_jsonl(std::ostream& out, const SenseLabeling& labeling);
SenseLabeling load_labels(const std::filesystem::path& path);

struct LabeledEmbeddingSet {
    EmbeddingSet set;
    std::vector<std::string> labels;  // aligned to rows

    std::size_t count() const noexcept { return set.count(); }
};

/// Keeps rows whose context_id is labeled, in original order.
LabeledEmbeddingSet attach_labels(const EmbeddingSet& set, const SenseLabeling& labeling);

}  // namespace ambigeo::embstore
