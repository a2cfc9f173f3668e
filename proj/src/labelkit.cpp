#include "ambigeo/labelkit.hpp"

#include <algorithm>

#include <json.hpp>

#include "ambigeo/error.hpp"
#include "ambigeo/textio.hpp"

namespace ambigeo::labelkit {

using embstore::kAutoSource;
using embstore::kOtherLabel;

SenseLabeling merge_labels(const SenseLabeling& labeling, const MergeMap& merges) {
    for (const auto& [from, to] : merges) {
        if (to == kOtherLabel) {
            throw Error(ErrorCode::ReservedLabel, "merge of '" + from + "' targets the reserved label 'other'");
        }
        if (to.empty()) throw Error(ErrorCode::Validation, "merge of '" + from + "' targets an empty label");
    }
    SenseLabeling out = labeling;
    for (auto& [id, label] : out.entries) {
        if (auto it = merges.find(label); it != merges.end()) label = it->second;
    }
    return out;
}

MergeMap read_merge_map(const std::string& json_text) {
    try {
        return nlohmann::json::parse(json_text).get<MergeMap>();
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Format, std::string("merge map must be a JSON object of strings: ") + e.what());
    }
}

std::set<std::string> distinct_labels(const SenseLabeling& labeling) {
    std::set<std::string> out;
    for (const auto& [id, label] : labeling.entries) out.insert(label);
    return out;
}

std::vector<std::string> RaterTable::rater_sources() const {
    std::vector<std::string> out;
    for (const auto& [source, column] : columns) {
        if (source != kAutoSource) out.push_back(source);
    }
    return out;
}

RaterTable make_rater_table(const std::vector<SenseLabeling>& labelings, std::set<std::string> allowed) {
    if (labelings.empty()) throw Error(ErrorCode::Precondition, "rater table needs at least one labeling");
    RaterTable table;
    table.target = labelings.front().target;
    std::set<std::string> ids;
    for (const auto& l : labelings) {
        if (l.target != table.target) {
            throw Error(ErrorCode::Validation, "labelings disagree on target: '" + l.target + "' vs '" + table.target + "'");
        }
        if (table.columns.count(l.source)) throw Error(ErrorCode::Validation, "duplicate source " + l.source);
        table.columns[l.source];
        for (const auto& [id, label] : l.entries) ids.insert(id);
    }
    table.context_ids.assign(ids.begin(), ids.end());

    const bool restricted = !allowed.empty();
    table.allowed_labels = std::move(allowed);
    table.allowed_labels.insert(std::string(kOtherLabel));
    for (const auto& l : labelings) {
        auto& column = table.columns[l.source];
        column.assign(table.context_ids.size(), std::nullopt);
        for (std::size_t i = 0; i < table.context_ids.size(); ++i) {
            const auto it = l.entries.find(table.context_ids[i]);
            if (it == l.entries.end()) continue;
            if (restricted && !table.allowed_labels.count(it->second)) {
                throw Error(ErrorCode::Validation,
                            "label '" + it->second + "' from " + l.source + " is not an allowed choice");
            }
            if (!restricted) table.allowed_labels.insert(it->second);
            column[i] = it->second;
        }
    }
    return table;
}

SenseLabeling majority_label(const RaterTable& table, std::size_t min_agree) {
    if (min_agree == 0) throw Error(ErrorCode::Precondition, "min_agree must be at least 1");
    const auto raters = table.rater_sources();
    if (raters.size() < min_agree) {
        throw Error(ErrorCode::Precondition, std::to_string(raters.size()) + " rater columns for min_agree " +
                                                 std::to_string(min_agree));
    }
    SenseLabeling out;
    out.target = table.target;
    out.source = "majority";
    for (std::size_t i = 0; i < table.context_ids.size(); ++i) {
        std::map<std::string, std::size_t> votes;
        for (const auto& r : raters) {
            const auto& cell = table.columns.at(r)[i];
            if (cell && *cell != kOtherLabel) ++votes[*cell];
        }
        const std::string* winner = nullptr;
        bool contested = false;
        for (const auto& [label, count] : votes) {
            if (count < min_agree) continue;
            if (winner) contested = true;
            winner = &label;
        }
        if (winner && !contested) out.entries[table.context_ids[i]] = *winner;
    }
    return out;
}

double krippendorff_alpha(const std::vector<LabelColumn>& columns) {
    if (columns.size() < 2) throw Error(ErrorCode::Precondition, "alpha needs at least two columns");
    const std::size_t units = columns.front().size();
    for (const auto& c : columns) {
        if (c.size() != units) throw Error(ErrorCode::Shape, "label columns differ in length");
    }

    std::map<std::string, std::size_t> index;
    for (const auto& c : columns) {
        for (const auto& cell : c) {
            if (cell) index.emplace(*cell, 0);
        }
    }
    std::size_t next = 0;
    for (auto& [label, i] : index) i = next++;
    const std::size_t v = index.size();

    // Coincidence matrix o[c][k]: each ordered pair of values from different
    // coders within a unit contributes 1 / (m_u - 1).
    std::vector<double> o(v * v, 0.0);
    std::size_t pairable_units = 0;
    std::vector<std::size_t> counts(v);
    for (std::size_t u = 0; u < units; ++u) {
        std::fill(counts.begin(), counts.end(), 0);
        std::size_t m = 0;
        for (const auto& c : columns) {
            if (c[u]) {
                ++counts[index.at(*c[u])];
                ++m;
            }
        }
        if (m < 2) continue;
        ++pairable_units;
        const double w = 1.0 / static_cast<double>(m - 1);
        for (std::size_t a = 0; a < v; ++a) {
            if (!counts[a]) continue;
            for (std::size_t b = 0; b < v; ++b) {
                const double pairs = a == b ? static_cast<double>(counts[a]) * (counts[a] - 1)
                                            : static_cast<double>(counts[a]) * counts[b];
                o[a * v + b] += pairs * w;
            }
        }
    }
    if (pairable_units < 2) throw Error(ErrorCode::InsufficientData, "alpha needs at least two pairable items");

    std::vector<double> marginal(v, 0.0);
    double total = 0.0;
    double observed = 0.0;
    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = 0; b < v; ++b) {
            marginal[a] += o[a * v + b];
            if (a != b) observed += o[a * v + b];
        }
        total += marginal[a];
    }
    double expected = 0.0;
    for (std::size_t a = 0; a < v; ++a) {
        for (std::size_t b = 0; b < v; ++b) {
            if (a != b) expected += marginal[a] * marginal[b];
        }
    }
    expected /= total - 1.0;
    if (!(expected > 0.0)) throw Error(ErrorCode::UndefinedAlpha, "only one distinct label among pairable values");
    return 1.0 - observed / expected;
}

AgreementReport average_pairwise_alpha(const LabelColumn& auto_column,
                                       const std::vector<std::pair<std::string, LabelColumn>>& raters) {
    if (raters.empty()) throw Error(ErrorCode::Precondition, "agreement needs at least one rater");
    AgreementReport report;
    double sum = 0.0;
    for (const auto& [source, column] : raters) {
        double alpha = 0.0;
        try {
            alpha = krippendorff_alpha({auto_column, column});
        } catch (const Error& e) {
            throw Error(e.code(), "rater " + source + ": " + e.what());
        }
        report.pairwise.emplace_back(source, alpha);
        sum += alpha;
    }
    report.average = sum / static_cast<double>(raters.size());
    return report;
}

std::string to_json(const AgreementReport& report) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json pairwise = nlohmann::ordered_json::object();
    for (const auto& [source, alpha] : report.pairwise) pairwise[source] = textio::json_number(alpha);
    j["pairwise"] = std::move(pairwise);
    j["average"] = textio::json_number(report.average);
    return j.dump(2) + "\n";
}

}  // namespace ambigeo::labelkit
