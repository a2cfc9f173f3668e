#include <doctest.h>

#include <cmath>

#include "ambigeo/labelkit.hpp"
#include "ambigeo/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace ambigeo::labelkit;
using ambigeo::ErrorCode;

namespace {

LabelColumn column(std::initializer_list<const char*> cells) {
    LabelColumn out;
    for (const char* c : cells) {
        out.push_back(c ? std::optional<std::string>(c) : std::nullopt);
    }
    return out;
}

SenseLabeling labeling(const std::string& source, std::map<std::string, std::string> entries) {
    return {"bark", source, std::move(entries)};
}

}  // namespace

TEST_CASE("alpha worked example") {
    const auto a = column({"A", "A", "B", "B"});
    const auto b = column({"A", "A", "B", "A"});
    CHECK(krippendorff_alpha({a, b}) == doctest::Approx(16.0 / 30.0).epsilon(1e-12));
    CHECK(krippendorff_alpha({a, a}) == 1.0);
}

TEST_CASE("alpha on the classic four-coder reliability data") {
    // 12 units, 4 coders, missing cells; published nominal alpha 0.743.
    const auto a = column({"1", "2", "3", "3", "2", "1", "4", "1", "2", nullptr, nullptr, nullptr});
    const auto b = column({"1", "2", "3", "3", "2", "2", "4", "1", "2", "5", nullptr, "3"});
    const auto c = column({nullptr, "3", "3", "3", "2", "3", "4", "2", "2", "5", "1", nullptr});
    const auto d = column({"1", "2", "3", "3", "2", "4", "4", "1", "2", "5", "1", nullptr});
    CHECK(krippendorff_alpha({a, b, c, d}) == doctest::Approx(0.743421052631579).epsilon(1e-12));
}

TEST_CASE("alpha agrees with pair enumeration") {
    ambigeo::Rng rng(31);
    const char* alphabet[] = {"x", "y", "z", "w"};
    int checked = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t coders = 2 + rng.below(4);
        const std::size_t units = 2 + rng.below(30);
        const std::size_t symbols = 2 + rng.below(3);
        std::vector<LabelColumn> cols(coders, LabelColumn(units));
        for (auto& c : cols) {
            for (auto& cell : c) {
                if (rng.uniform() < 0.15) continue;
                cell = alphabet[rng.below(symbols)];
            }
        }
        double got = 0.0;
        try {
            got = krippendorff_alpha(cols);
        } catch (const ambigeo::Error&) {
            continue;
        }
        CHECK(got == doctest::Approx(oracle::brute_alpha(cols)).epsilon(1e-12));
        CHECK(got <= 1.0);
        ++checked;
    }
    CHECK(checked > 150);
}

TEST_CASE("alpha failure modes") {
    CHECK_ERROR(krippendorff_alpha({column({"A", "A", "A"}), column({"A", "A", "A"})}), ErrorCode::UndefinedAlpha);
    CHECK_ERROR(krippendorff_alpha({column({"A", nullptr, "B"}), column({"B", "A", nullptr})}),
                ErrorCode::InsufficientData);
    CHECK_ERROR(krippendorff_alpha({column({"A"}), column({"A", "B"})}), ErrorCode::Shape);
    CHECK_ERROR(krippendorff_alpha({column({"A", "B"})}), ErrorCode::Precondition);
}

TEST_CASE("label merges reduce the label count") {
    SUBCASE("three labels to two") {
        const auto l = labeling("auto-translation", {{"1", "abbaio"}, {"2", "latrato"}, {"3", "corteccia"}});
        const auto merged = merge_labels(l, {{"latrato", "abbaio"}});
        CHECK(distinct_labels(l).size() == 3);
        CHECK(distinct_labels(merged) == std::set<std::string>{"abbaio", "corteccia"});
        CHECK(merged.entries.at("2") == "abbaio");
    }
    SUBCASE("sixteen labels to fourteen") {
        const std::vector<std::string> names = {"ombra", "sfumatura", "tonalità", "paralume", "un po'",
                                                "leggermente", "proteggere", "riparare", "tenda", "ombreggiare",
                                                "spettro", "tinta", "velo", "traccia", "schermo", "visiera"};
        SenseLabeling l{"shade", "auto-translation", {}};
        for (std::size_t i = 0; i < names.size(); ++i) l.entries["s#" + std::to_string(i)] = names[i];
        const auto merged = merge_labels(l, read_merge_map(R"({"un po'": "leggermente", "riparare": "proteggere"})"));
        CHECK(distinct_labels(l).size() == 16);
        CHECK(distinct_labels(merged).size() == 14);
    }
    SUBCASE("merging into other is refused") {
        const auto l = labeling("rater:1", {{"1", "abbaio"}});
        CHECK_ERROR(merge_labels(l, {{"abbaio", "other"}}), ErrorCode::ReservedLabel);
    }
    SUBCASE("merge maps must be string objects") {
        CHECK_ERROR(read_merge_map("[1,2]"), ErrorCode::Format);
        CHECK_ERROR(read_merge_map("{\"a\": 3}"), ErrorCode::Format);
    }
}

TEST_CASE("rater table and majority vote") {
    const auto auto_l = labeling("auto-translation", {{"1", "A"}, {"2", "B"}, {"3", "A"}, {"4", "A"}});
    const auto r1 = labeling("rater:1", {{"1", "A"}, {"2", "B"}, {"3", "other"}, {"4", "A"}, {"5", "B"}});
    const auto r2 = labeling("rater:2", {{"1", "A"}, {"2", "A"}, {"3", "other"}, {"4", "B"}, {"5", "B"}});
    const auto r3 = labeling("rater:3", {{"1", "B"}, {"2", "B"}, {"3", "other"}, {"4", "C"}});
    const auto table = make_rater_table({auto_l, r1, r2, r3});
    CHECK(table.context_ids == std::vector<std::string>{"1", "2", "3", "4", "5"});
    CHECK(table.rater_sources() == std::vector<std::string>{"rater:1", "rater:2", "rater:3"});
    CHECK_FALSE(table.columns.at("auto-translation")[4].has_value());
    CHECK(table.allowed_labels.count("other") == 1);

    const auto majority = majority_label(table, 2);
    CHECK(majority.entries == std::map<std::string, std::string>{{"1", "A"}, {"2", "B"}, {"5", "B"}});
    // With min_agree 1 context 1 has two labels reaching the bar.
    CHECK(majority_label(table, 1).entries.count("1") == 0);
    CHECK_ERROR(majority_label(table, 4), ErrorCode::Precondition);

    CHECK_ERROR(make_rater_table({auto_l, r1}, {"A"}), ErrorCode::Validation);
    CHECK_ERROR(make_rater_table({auto_l, auto_l}), ErrorCode::Validation);
}

TEST_CASE("average pairwise alpha") {
    const auto a = column({"A", "A", "B", "B"});
    const std::vector<std::pair<std::string, LabelColumn>> raters = {
        {"rater:1", column({"A", "A", "B", "A"})},
        {"rater:2", column({"A", "A", "B", "B"})},
    };
    const auto report = average_pairwise_alpha(a, raters);
    REQUIRE(report.pairwise.size() == 2);
    CHECK(report.pairwise[1].second == 1.0);
    CHECK(report.average == doctest::Approx((16.0 / 30.0 + 1.0) / 2.0));
    const auto json = to_json(report);
    CHECK(json.find("\"rater:1\"") < json.find("\"rater:2\""));

    try {
        average_pairwise_alpha(a, {{"rater:9", column({"A", nullptr, nullptr, nullptr})}});
        FAIL("expected an error");
    } catch (const ambigeo::Error& e) {
        CHECK(std::string(e.what()).find("rater:9") != std::string::npos);
    }
}
