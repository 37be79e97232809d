#include "attnboost/tabular.hpp"

#include "fixtures.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

using namespace attnboost;

namespace {

RawTable parse(const std::string& text, const Schema& schema = retail_schema()) {
    std::istringstream in(text);
    return parse_csv(in, schema);
}

Schema tiny_schema() {
    return {{"Region", ColumnKind::Category, true},
            {"Sales", ColumnKind::Float, false},
            {"Returned", ColumnKind::BinaryTarget, false}};
}

RawTable tiny_table(std::vector<std::string> regions, std::vector<double> sales, std::vector<std::string> labels) {
    RawTable t;
    t.schema = tiny_schema();
    for (std::size_t i = 0; i < regions.size(); ++i) {
        t.rows.push_back({regions[i], sales[i], labels[i]});
    }
    return t;
}

std::string error_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_SUITE("tabular_data") {

TEST_CASE("retail schema has 23 unique columns and one target") {
    const Schema s = retail_schema();
    CHECK(s.size() == 23);
    std::set<std::string> names;
    for (const auto& c : s) {
        names.insert(c.name);
    }
    CHECK(names.size() == 23);
    CHECK(s[target_column_index(s)].name == "Returned");
    CHECK_NOTHROW(validate_schema(s));

    Schema dup = s;
    dup[1].name = dup[0].name;
    CHECK_THROWS_AS(validate_schema(dup), DataError);
    Schema two_targets = s;
    two_targets[0].kind = ColumnKind::BinaryTarget;
    CHECK_THROWS_AS(validate_schema(two_targets), DataError);
    CHECK(without_target(s).size() == 22);
}

TEST_CASE("sample transaction parses into typed cells") {
    const RawTable t = parse(std::string(fixture::kRetailHeader) + "\n" + fixture::kSampleRow + "\n");
    REQUIRE(t.row_count() == 1);
    const auto& row = t.rows[0];
    auto cell = [&](const char* name) -> const Cell& { return row[*t.column_index(name)]; };
    CHECK(std::get<std::string>(cell("Order ID")) == "CA-2017-100748");
    CHECK(std::get<Date>(cell("Order Date")) == Date{2017, 5, 13});
    CHECK(std::get<double>(cell("Sales")) == 58.48);
    CHECK(std::get<std::int64_t>(cell("Quantity")) == 8);
    CHECK(std::get<double>(cell("Discount")) == 0.0);
    CHECK(std::get<double>(cell("Profit")) == 27.4856);
    CHECK(std::get<std::string>(cell("Returned")) == "Not");
}

TEST_CASE("header-only input gives an empty table") {
    CHECK(parse(std::string(fixture::kRetailHeader) + "\n").row_count() == 0);
}

TEST_CASE("short row is rejected with its row index") {
    std::string row = fixture::kSampleRow;
    row = row.substr(0, row.rfind(','));  // 22 cells
    const std::string text = std::string(fixture::kRetailHeader) + "\n" + fixture::kSampleRow + "\n" + row + "\n";
    const std::string msg = error_of([&] { parse(text); });
    CHECK(msg.find("row 2") != std::string::npos);
    CHECK(msg.find("22") != std::string::npos);
}

TEST_CASE("bad typed cell names row and column") {
    std::string row = fixture::kSampleRow;
    row.replace(row.find(",8,"), 3, ",eight,");
    const std::string msg = error_of([&] { parse(std::string(fixture::kRetailHeader) + "\n" + row + "\n"); });
    CHECK(msg.find("row 1") != std::string::npos);
    CHECK(msg.find("Quantity") != std::string::npos);
}

TEST_CASE("header mismatch and missing file are errors") {
    CHECK_THROWS_AS(parse("a,b,c\n1,2,3\n"), DataError);
    CHECK_THROWS_AS(load_csv("/nonexistent/attnboost.csv", retail_schema()), DataError);
}

TEST_CASE("header order does not matter") {
    const Schema schema = tiny_schema();
    const RawTable a = parse("Region,Sales,Returned\nWest,1.5,Not\n", schema);
    const RawTable b = parse("Returned,Region,Sales\nNot,West,1.5\n", schema);
    CHECK(a.rows == b.rows);
}

TEST_CASE("quoted fields survive a write/parse round trip") {
    RawTable t = tiny_table({"West, \"coast\"", "line\nbreak"}, {1.25, 0.1 + 0.2}, {"Not", "Yes"});
    t.rows.push_back({std::monostate{}, 3.0, std::string("Not")});
    std::ostringstream out;
    write_csv(out, t);
    const RawTable back = parse(out.str(), t.schema);
    CHECK(back.rows == t.rows);
}

TEST_CASE("lexicographic category codes with reserved unseen code") {
    const RawTable t = tiny_table({"West", "East", "West"}, {1, 2, 3}, {"Not", "Yes", "Not"});
    const PreprocessorState s = fit_preprocessor(t, {});
    const CategoryMap& m = s.category_maps.at("Region");
    CHECK(m.values == std::vector<std::string>{"East", "West"});
    CHECK(m.code("East") == 0);
    CHECK(m.code("West") == 1);
    CHECK(m.unseen_code() == 2);
    CHECK(m.code("Central-NEW") == 2);

    const RawTable fresh = tiny_table({"Central-NEW"}, {2}, {"Not"});
    const FeatureMatrix x = transform_features(s, fresh);
    CHECK(x.at(0, *x.column_index("Region")) == 2.0);
}

TEST_CASE("numeric stats use population std") {
    const RawTable t = tiny_table({"a", "b", "c"}, {1, 2, 3}, {"Not", "Yes", "Not"});
    const PreprocessorState s = fit_preprocessor(t, {});
    const NumericStats& st = s.numeric_stats.at("Sales");
    CHECK(st.mean == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(st.std == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(st.std == doctest::Approx(0.816497).epsilon(1e-6));
    const FeatureMatrix x = transform_features(s, t);
    CHECK(x.at(0, *x.column_index("Sales")) == doctest::Approx(-1.224745).epsilon(1e-6));
}

TEST_CASE("constant numeric column is floored, never divides by zero") {
    const RawTable t = tiny_table({"a", "b"}, {5, 5}, {"Not", "Yes"});
    const PreprocessorState s = fit_preprocessor(t, {});
    CHECK(s.numeric_stats.at("Sales").std == kEpsilonStd);
    const FeatureMatrix x = transform_features(s, t);
    CHECK(x.at(0, 1) == 0.0);
}

TEST_CASE("null categories get their own code; numeric nulls are rejected") {
    RawTable t = tiny_table({"West", "East"}, {1, 2}, {"Not", "Yes"});
    t.rows.push_back({std::monostate{}, 3.0, std::string("Not")});
    const PreprocessorState s = fit_preprocessor(t, {});
    const auto& values = s.category_maps.at("Region").values;
    CHECK(std::find(values.begin(), values.end(), kNullCategory) != values.end());

    RawTable bad = t;
    bad.rows[0][1] = std::monostate{};
    CHECK_THROWS_AS(fit_preprocessor(bad, {}), DataError);
}

TEST_CASE("identifier drop list and feature width") {
    const RawTable full = fixture::retail_table(10);
    const std::vector<std::size_t> first_five{0, 1, 2, 3, 4};
    const RawTable t = select_rows(full, first_five);
    const auto drop = default_identifier_columns();
    CHECK(drop == std::vector<std::string>{"Customer Name", "Product Name", "Order ID", "Customer ID",
                                           "Product ID", "Row ID", "Retail Sales People"});
    const PreprocessorState s = fit_preprocessor(t, drop);
    for (const auto& name : drop) {
        CHECK(std::find(s.feature_names.begin(), s.feature_names.end(), name) == s.feature_names.end());
    }
    // 23 columns - 7 identifiers - 1 target - 2 raw dates + 3 parts per date.
    const std::size_t expected = 23 - 7 - 1 - 2 + 2 * 3;
    CHECK(expected == 19);
    const auto [x, y] = apply_preprocessor(s, t);
    CHECK(x.cols == expected);
    CHECK(x.rows == 5);
    CHECK(y.size() == 5);
    for (double v : x.values) {
        CHECK(std::isfinite(v));
    }
}

TEST_CASE("drop list errors") {
    const RawTable t = fixture::retail_table(10);
    const std::vector<std::string> with_target{"Returned"};
    CHECK_THROWS_AS(fit_preprocessor(t, with_target), DataError);
    const std::vector<std::string> unknown{"Nope"};
    CHECK_THROWS_AS(fit_preprocessor(t, unknown), DataError);
}

TEST_CASE("date parts are raw integers") {
    const RawTable t = parse(std::string(fixture::kRetailHeader) + "\n" + fixture::kSampleRow + "\n");
    const PreprocessorState s = fit_preprocessor(t, default_identifier_columns());
    const FeatureMatrix x = transform_features(s, t);
    const auto& names = s.date_plan.at("Order Date");
    REQUIRE(names.size() == 3);
    CHECK(x.at(0, *x.column_index(names[0])) == 2017.0);
    CHECK(x.at(0, *x.column_index(names[1])) == 5.0);
    CHECK(x.at(0, *x.column_index(names[2])) == 5.0);
}

TEST_CASE("target encoding") {
    const RawTable t = tiny_table({"a", "b", "c"}, {1, 2, 3}, {"Not", "Yes", "Not"});
    const PreprocessorState s = fit_preprocessor(t, {});
    CHECK(encode_target(s, t) == TargetVector{0, 1, 0});

    const RawTable odd = tiny_table({"a"}, {1}, {"Maybe"});
    CHECK_THROWS_AS(encode_target(s, odd), DataError);
    const RawTable three = tiny_table({"a", "b", "c"}, {1, 2, 3}, {"Not", "Yes", "Maybe"});
    CHECK_THROWS_AS(fit_preprocessor(three, {}), DataError);
}

TEST_CASE("z-scored columns have zero mean and unit std on the fit rows") {
    const RawTable t = fixture::retail_table(500, 9);
    const PreprocessorState s = fit_preprocessor(t, default_identifier_columns());
    const FeatureMatrix x = transform_features(s, t);
    for (const auto& [name, stats] : s.numeric_stats) {
        const std::size_t c = *x.column_index(name);
        double mean = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            mean += x.at(r, c);
        }
        mean /= static_cast<double>(x.rows);
        double var = 0.0;
        for (std::size_t r = 0; r < x.rows; ++r) {
            var += (x.at(r, c) - mean) * (x.at(r, c) - mean);
        }
        CHECK(std::abs(mean) < 1e-9);
        CHECK(std::abs(std::sqrt(var / static_cast<double>(x.rows)) - 1.0) < 1e-9);
    }
}

TEST_CASE("category codes are a bijection") {
    const RawTable t = fixture::retail_table(300, 3);
    const PreprocessorState s = fit_preprocessor(t, default_identifier_columns());
    for (const auto& [name, map] : s.category_maps) {
        for (int code = 0; code < map.unseen_code(); ++code) {
            CHECK(map.code(map.decode(code)) == code);
        }
        CHECK(std::is_sorted(map.values.begin(), map.values.end()));
    }
}

TEST_CASE("calendar decomposition matches the C library calendar") {
    CHECK(decompose_date("2017-05-13") == DateParts{2017, 5, 5});
    CHECK(decompose_date("1970-01-01") == DateParts{1970, 1, 3});
    const auto [y, m, wd] = oracle::calendar(2017, 5, 13);
    CHECK(DateParts{y, m, wd} == DateParts{2017, 5, 5});

    Rng rng(11);
    for (int i = 0; i < 2000; ++i) {
        const std::int64_t days = static_cast<std::int64_t>(rng.below(200000)) - 80000;
        const Date d = civil_from_days(days);
        CHECK(days_from_civil(d) == days);
        const auto [oy, om, ow] = oracle::calendar(d.year, d.month, d.day);
        CHECK(decompose_date(d) == DateParts{oy, om, ow});
    }
}

TEST_CASE("invalid dates are rejected") {
    CHECK_THROWS_AS(parse_iso_date("2017-13-01"), DataError);
    CHECK_THROWS_AS(parse_iso_date("2017-02-29"), DataError);
    CHECK_THROWS_AS(parse_iso_date("2017-5-13"), DataError);
    CHECK_THROWS_AS(parse_iso_date("2017-05-13x"), DataError);
    CHECK(parse_iso_date("2016-02-29") == Date{2016, 2, 29});
    CHECK(format_iso_date(Date{2017, 5, 13}) == "2017-05-13");
}

TEST_CASE("stratified split of ten balanced rows") {
    FeatureMatrix x(10, {"v"});
    TargetVector y{1, 1, 1, 1, 1, 0, 0, 0, 0, 0};
    for (std::size_t r = 0; r < 10; ++r) {
        x.at(r, 0) = static_cast<double>(r);
    }
    const TrainTestSplit s = stratified_split(x, y, 0.8, 42);
    CHECK(s.train_y.size() == 8);
    CHECK(s.test_y.size() == 2);
    CHECK(std::count(s.train_y.begin(), s.train_y.end(), 1) == 4);
    CHECK(std::count(s.test_y.begin(), s.test_y.end(), 1) == 1);

    const TrainTestSplit again = stratified_split(x, y, 0.8, 42);
    CHECK(again.indices.train == s.indices.train);
    CHECK(again.test_x.values == s.test_x.values);

    CHECK_THROWS_AS(stratified_split(x, y, 1.0, 42), std::invalid_argument);
    CHECK_THROWS_AS(stratified_split(x, y, 0.0, 42), std::invalid_argument);
    TargetVector lonely{1, 0, 0, 0, 0, 0, 0, 0, 0, 0};
    CHECK_THROWS_AS(stratified_split(x, lonely, 0.8, 42), DataError);
}

TEST_CASE("stratified split partitions and preserves class ratios") {
    Rng rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 20 + rng.below(200);
        TargetVector y(n);
        for (auto& v : y) {
            v = rng.uniform() < 0.3 ? 1 : 0;
        }
        y[0] = 1;
        y[1] = 1;
        y[2] = 0;
        y[3] = 0;
        const double frac = 0.5 + 0.4 * rng.uniform();
        const SplitIndices s = stratified_split_indices(y, frac, trial);
        std::vector<std::size_t> all = s.train;
        all.insert(all.end(), s.test.begin(), s.test.end());
        std::sort(all.begin(), all.end());
        CHECK(std::adjacent_find(all.begin(), all.end()) == all.end());
        CHECK(all.size() == n);
        CHECK(std::is_sorted(s.train.begin(), s.train.end()));
        for (int cls : {0, 1}) {
            const auto n_cls = static_cast<double>(std::count(y.begin(), y.end(), cls));
            const auto n_train = static_cast<double>(
                std::count_if(s.train.begin(), s.train.end(), [&](std::size_t i) { return y[i] == cls; }));
            CHECK(std::abs(n_train - frac * n_cls) <= 1.0);
        }
    }
}

TEST_CASE("drop_columns removes named features") {
    FeatureMatrix x(2, {"a", "b", "c"});
    x.values = {1, 2, 3, 4, 5, 6};
    const std::vector<std::string> names{"b"};
    const FeatureMatrix out = drop_columns(x, names);
    CHECK(out.feature_names == std::vector<std::string>{"a", "c"});
    CHECK(out.values == std::vector<double>{1, 3, 4, 6});
}

}
