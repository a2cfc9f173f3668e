#include "ambigeo/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <ostream>
#include <set>

#include "ambigeo/error.hpp"
#include "ambigeo/parallel.hpp"
#include "ambigeo/stats.hpp"
#include "ambigeo/textio.hpp"

namespace ambigeo::geometry {

namespace {

template <typename T>
double cosine_impl(std::span<const T> u, std::span<const T> v) {
    if (u.size() != v.size()) {
        throw Error(ErrorCode::Shape, "cosine of vectors with dimensions " + std::to_string(u.size()) + " and " +
                                          std::to_string(v.size()));
    }
    double dot = 0.0;
    double uu = 0.0;
    double vv = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double a = u[i];
        const double b = v[i];
        dot += a * b;
        uu += a * a;
        vv += b * b;
    }
    if (!(uu > 0.0) || !(vv > 0.0)) throw Error(ErrorCode::Domain, "cosine of a zero-norm vector");
    return std::clamp(dot / (std::sqrt(uu) * std::sqrt(vv)), -1.0, 1.0);
}

double dot_rows(std::span<const float> a, std::span<const float> b) {
    double dot = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) dot += static_cast<double>(a[i]) * static_cast<double>(b[i]);
    return dot;
}

}  // namespace

double cosine_similarity(std::span<const double> u, std::span<const double> v) {
    return cosine_impl(u, v);
}

double cosine_similarity(std::span<const float> u, std::span<const float> v) {
    return cosine_impl(u, v);
}

const char* to_string(GroupStatus status) {
    return status == GroupStatus::Within ? "within" : "between";
}

std::vector<double> row_norms(const embstore::EmbeddingSet& set) {
    std::vector<double> norms(set.count());
    for (std::size_t i = 0; i < set.count(); ++i) {
        norms[i] = std::sqrt(dot_rows(set.row(i), set.row(i)));
        if (!(norms[i] > 0.0)) {
            const std::string id = i < set.context_ids.size() ? set.context_ids[i] : "?";
            throw Error(ErrorCode::Domain, "row " + std::to_string(i) + " (" + id + ") has zero norm");
        }
    }
    return norms;
}

DiversityRecord embedding_diversity(const embstore::EmbeddingSet& set, unsigned threads) {
    const std::size_t n = set.count();
    if (n < 2) {
        throw Error(ErrorCode::InsufficientData,
                    "diversity of '" + set.word + "' needs at least 2 contexts, got " + std::to_string(n));
    }
    const auto norms = row_norms(set);
    std::vector<double> partial(n, 0.0);
    parallel_for(n, threads, [&](std::size_t i) {
        double sum = 0.0;
        const auto ui = set.row(i);
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cos = std::clamp(dot_rows(ui, set.row(j)) / (norms[i] * norms[j]), -1.0, 1.0);
            sum += 1.0 - cos;
        }
        partial[i] = sum;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    const double pairs = 0.5 * static_cast<double>(n) * static_cast<double>(n - 1);
    return {set.word, n, total / pairs};
}

void write_diversity_csv(std::ostream& out, const std::vector<DiversityRecord>& records) {
    out << "word,context_count,diversity\n";
    for (const auto& r : records) {
        out << textio::csv_field(r.word) << ',' << r.context_count << ',' << textio::format_double(r.diversity)
            << '\n';
    }
}

std::vector<DiversityRecord> read_diversity_csv(std::istream& in) {
    const auto table = textio::read_csv(in);
    const int word = table.column("word");
    const int count = table.column("context_count");
    const int div = table.column("diversity");
    if (word < 0 || count < 0 || div < 0) {
        throw Error(ErrorCode::Format, "diversity CSV needs columns word,context_count,diversity");
    }
    std::vector<DiversityRecord> records;
    for (const auto& row : table.rows) {
        records.push_back({row[word], static_cast<std::size_t>(textio::parse_int(row[count], "context_count")),
                           textio::parse_double(row[div], "diversity")});
    }
    return records;
}

std::vector<PairRecord> pairwise_records(const embstore::LabeledEmbeddingSet& data) {
    const auto& set = data.set;
    const std::size_t n = set.count();
    if (data.labels.size() != n) throw Error(ErrorCode::Shape, "labels are not aligned with embedding rows");
    const std::set<std::string> distinct(data.labels.begin(), data.labels.end());
    if (distinct.size() < 2) {
        throw Error(ErrorCode::NoBetweenPairs, "all rows of '" + set.word + "' share one label");
    }
    const auto norms = row_norms(set);
    std::vector<PairRecord> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double cos = std::clamp(dot_rows(set.row(i), set.row(j)) / (norms[i] * norms[j]), -1.0, 1.0);
            const auto status = data.labels[i] == data.labels[j] ? GroupStatus::Within : GroupStatus::Between;
            pairs.push_back({set.word, status, cos, i, j});
        }
    }
    return pairs;
}

void write_pairs_csv(std::ostream& out, const std::vector<PairRecord>& pairs) {
    out << "word,group_status,similarity,first,second\n";
    for (const auto& p : pairs) {
        out << textio::csv_field(p.word) << ',' << to_string(p.group_status) << ','
            << textio::format_double(p.similarity) << ',' << p.first << ',' << p.second << '\n';
    }
}

std::vector<PairRecord> read_pairs_csv(std::istream& in) {
    const auto table = textio::read_csv(in);
    const int word = table.column("word");
    const int status = table.column("group_status");
    const int sim = table.column("similarity");
    if (word < 0 || status < 0 || sim < 0) {
        throw Error(ErrorCode::Format, "pairs CSV needs columns word,group_status,similarity");
    }
    const int first = table.column("first");
    const int second = table.column("second");
    std::vector<PairRecord> pairs;
    pairs.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        PairRecord p;
        p.word = row[word];
        if (row[status] == "within") {
            p.group_status = GroupStatus::Within;
        } else if (row[status] == "between") {
            p.group_status = GroupStatus::Between;
        } else {
            throw Error(ErrorCode::Format, "unknown group_status '" + row[status] + "'");
        }
        p.similarity = textio::parse_double(row[sim], "similarity");
        if (first >= 0) p.first = static_cast<std::size_t>(textio::parse_int(row[first], "first"));
        if (second >= 0) p.second = static_cast<std::size_t>(textio::parse_int(row[second], "second"));
        pairs.push_back(std::move(p));
    }
    return pairs;
}

GroupSimilarityReport summarize_pairs(const std::vector<PairRecord>& pairs, const std::vector<std::string>& labels,
                                      double ci_level) {
    if (!(ci_level > 0.0 && ci_level < 1.0)) {
        throw Error(ErrorCode::Precondition, "confidence level must be in (0, 1)");
    }
    std::vector<double> within;
    std::vector<double> between;
    std::map<std::string, std::pair<double, std::size_t>> per_group;
    for (const auto& p : pairs) {
        if (p.group_status == GroupStatus::Within) {
            within.push_back(p.similarity);
            if (p.first < labels.size()) {
                auto& acc = per_group[labels[p.first]];
                acc.first += p.similarity;
                acc.second += 1;
            }
        } else {
            between.push_back(p.similarity);
        }
    }
    if (between.empty()) throw Error(ErrorCode::NoBetweenPairs, "no between-group pairs");
    if (within.empty()) throw Error(ErrorCode::InsufficientData, "no group has two or more members");

    auto interval = [ci_level](const std::vector<double>& values) {
        if (values.size() < 2) return Interval{values.front(), values.front()};
        const auto ci = stats::mean_ci(values, ci_level);
        return Interval{ci.lo, ci.hi};
    };

    GroupSimilarityReport report;
    report.word = pairs.front().word;
    report.within_mean = stats::mean(within);
    report.between_mean = stats::mean(between);
    report.within_pairs = within.size();
    report.between_pairs = between.size();
    report.ci_level = ci_level;
    report.within_ci = interval(within);
    report.between_ci = interval(between);
    for (const auto& [label, acc] : per_group) {
        report.per_group_within[label] = acc.first / static_cast<double>(acc.second);
    }
    return report;
}

GroupSimilarityReport group_similarity(const embstore::LabeledEmbeddingSet& data, double ci_level) {
    return summarize_pairs(pairwise_records(data), data.labels, ci_level);
}

std::string to_json(const GroupSimilarityReport& r) {
    nlohmann::ordered_json j;
    j["word"] = r.word;
    j["within_mean"] = textio::json_number(r.within_mean);
    j["between_mean"] = textio::json_number(r.between_mean);
    j["within_pairs"] = r.within_pairs;
    j["between_pairs"] = r.between_pairs;
    j["ci_level"] = r.ci_level;
    j["within_ci"] = {textio::json_number(r.within_ci.lo), textio::json_number(r.within_ci.hi)};
    j["between_ci"] = {textio::json_number(r.between_ci.lo), textio::json_number(r.between_ci.hi)};
    nlohmann::ordered_json groups = nlohmann::ordered_json::object();
    for (const auto& [label, m] : r.per_group_within) groups[label] = textio::json_number(m);
    j["per_group_within"] = groups;
    return j.dump(2) + "\n";
}

}  // namespace ambigeo::geometry
