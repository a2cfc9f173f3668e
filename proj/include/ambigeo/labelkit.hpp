#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "ambigeo/embstore.hpp"

namespace ambigeo::labelkit {

using embstore::SenseLabeling;

/// original label -> canonical label
using MergeMap = std::map<std::string, std::string>;

/// Rewrites merged labels; labels outside the map pass through. A canonical
/// label equal to the reserved "other" raises ReservedLabel.
SenseLabeling merge_labels(const SenseLabeling& labeling, const MergeMap& merges);

MergeMap read_merge_map(const std::string& json_text);

std::set<std::string> distinct_labels(const SenseLabeling& labeling);

using LabelColumn = std::vector<std::optional<std::string>>;

/// Labels from several sources aligned over the union of their contexts.
/// Missing cells are nullopt.
struct RaterTable {
    std::string target;
    std::vector<std::string> context_ids;           // sorted union
    std::map<std::string, LabelColumn> columns;     // source -> cells
    std::set<std::string> allowed_labels;           // always contains "other"

    /// Rater columns only ("rater:<id>" sources), in source order.
    std::vector<std::string> rater_sources() const;
};

/// Builds a table from labelings of one target. If `allowed` is non-empty,
/// every cell must be in it (plus "other"); otherwise the alphabet is the
/// union of observed labels.
RaterTable make_rater_table(const std::vector<SenseLabeling>& labelings, std::set<std::string> allowed = {});

/// Contexts where at least min_agree raters chose the same non-"other"
/// label. If two labels both reach min_agree the context is excluded.
SenseLabeling majority_label(const RaterTable& table, std::size_t min_agree = 2);

/// Krippendorff's alpha for nominal data over any number of coder columns
/// (equal length, nullopt = missing). Units with fewer than two values are
/// not pairable and are ignored.
double krippendorff_alpha(const std::vector<LabelColumn>& columns);

struct AgreementReport {
    std::vector<std::pair<std::string, double>> pairwise;  // rater source -> alpha vs auto
    double average = 0.0;
};

/// Mean of the two-column alpha between `auto_column` and each rater.
AgreementReport average_pairwise_alpha(const LabelColumn& auto_column,
                                       const std::vector<std::pair<std::string, LabelColumn>>& raters);

std::string to_json(const AgreementReport& report);

}  // namespace ambigeo::labelkit
