#include "attnboost/tabular.hpp"

#include "attnboost/numeric.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>
#include <unordered_map>

namespace attnboost {

namespace {

std::string row_label(std::size_t data_row) { return "row " + std::to_string(data_row + 1); }

bool is_numeric(ColumnKind kind) { return kind == ColumnKind::Integer || kind == ColumnKind::Float; }

bool is_categorical(ColumnKind kind) {
    return kind == ColumnKind::Category || kind == ColumnKind::String;
}

bool contains(std::span<const std::string> names, std::string_view name) {
    return std::find(names.begin(), names.end(), name) != names.end();
}

Cell parse_cell(const std::string& text, const ColumnSchema& column, std::size_t data_row) {
    if (text.empty()) {
        if (!column.nullable) {
            throw DataError(row_label(data_row) + ", column '" + column.name +
                            "': empty value in non-nullable column");
        }
        return std::monostate{};
    }
    const char* first = text.data();
    const char* last = text.data() + text.size();
    switch (column.kind) {
        case ColumnKind::Integer: {
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last) {
                throw DataError(row_label(data_row) + ", column '" + column.name +
                                "': cannot parse integer '" + text + "'");
            }
            return value;
        }
        case ColumnKind::Float: {
            double value = 0.0;
            const auto [ptr, ec] = std::from_chars(first, last, value);
            if (ec != std::errc{} || ptr != last || !std::isfinite(value)) {
                throw DataError(row_label(data_row) + ", column '" + column.name +
                                "': cannot parse number '" + text + "'");
            }
            return value;
        }
        case ColumnKind::Date:
            try {
                return parse_iso_date(text);
            } catch (const DataError& e) {
                throw DataError(row_label(data_row) + ", column '" + column.name + "': " + e.what());
            }
        case ColumnKind::String:
        case ColumnKind::Category:
        case ColumnKind::BinaryTarget:
            return text;
    }
    return std::monostate{};
}

double numeric_value(const Cell& cell) {
    if (const auto* i = std::get_if<std::int64_t>(&cell)) {
        return static_cast<double>(*i);
    }
    return std::get<double>(cell);
}

const std::string* string_value(const Cell& cell) { return std::get_if<std::string>(&cell); }

std::string category_text(const Cell& cell) {
    if (std::holds_alternative<std::monostate>(cell)) {
        return std::string(kNullCategory);
    }
    if (const auto* s = string_value(cell)) {
        return *s;
    }
    return format_cell(cell);
}

std::size_t require_column(const RawTable& table, const ColumnSchema& expected) {
    const auto idx = table.column_index(expected.name);
    if (!idx) {
        throw DataError("column '" + expected.name + "' missing from input table");
    }
    if (table.schema[*idx].kind != expected.kind) {
        throw DataError("column '" + expected.name + "' has kind " +
                        std::string(to_string(table.schema[*idx].kind)) + ", expected " +
                        std::string(to_string(expected.kind)));
    }
    return *idx;
}

}  // namespace

std::string_view to_string(ColumnKind kind) {
    switch (kind) {
        case ColumnKind::Integer: return "integer";
        case ColumnKind::Float: return "float";
        case ColumnKind::String: return "string";
        case ColumnKind::Category: return "category";
        case ColumnKind::Date: return "date";
        case ColumnKind::BinaryTarget: return "binary-target";
    }
    return "unknown";
}

std::optional<std::size_t> RawTable::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].name == name) {
            return i;
        }
    }
    return std::nullopt;
}

std::optional<std::size_t> FeatureMatrix::column_index(std::string_view name) const {
    for (std::size_t i = 0; i < feature_names.size(); ++i) {
        if (feature_names[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

Schema retail_schema() {
    using K = ColumnKind;
    return {
        {"Row ID", K::Integer, false},
        {"Order ID", K::String, false},
        {"Order Date", K::Date, false},
        {"Ship Date", K::Date, false},
        {"Ship Mode", K::Category, true},
        {"Customer ID", K::String, false},
        {"Customer Name", K::String, true},
        {"Segment", K::Category, true},
        {"Country", K::Category, true},
        {"City", K::Category, true},
        {"State", K::Category, true},
        {"Postal Code", K::Integer, false},
        {"Region", K::Category, true},
        {"Retail Sales People", K::String, true},
        {"Product ID", K::String, false},
        {"Category", K::Category, true},
        {"Sub-Category", K::Category, true},
        {"Product Name", K::String, true},
        {"Returned", K::BinaryTarget, false},
        {"Sales", K::Float, false},
        {"Quantity", K::Integer, false},
        {"Discount", K::Float, false},
        {"Profit", K::Float, false},
    };
}

std::vector<std::string> default_identifier_columns() {
    return {"Customer Name", "Product Name", "Order ID", "Customer ID",
            "Product ID",    "Row ID",       "Retail Sales People"};
}

void validate_schema(const Schema& schema) {
    std::set<std::string> names;
    std::size_t targets = 0;
    for (const auto& column : schema) {
        if (!names.insert(column.name).second) {
            throw DataError("duplicate column name '" + column.name + "'");
        }
        if (column.kind == ColumnKind::BinaryTarget) {
            ++targets;
        }
    }
    if (targets != 1) {
        throw DataError("schema must contain exactly one binary-target column, found " +
                        std::to_string(targets));
    }
}

std::size_t target_column_index(const Schema& schema) {
    for (std::size_t i = 0; i < schema.size(); ++i) {
        if (schema[i].kind == ColumnKind::BinaryTarget) {
            return i;
        }
    }
    throw DataError("schema has no binary-target column");
}

Schema without_target(const Schema& schema) {
    Schema out;
    for (const auto& column : schema) {
        if (column.kind != ColumnKind::BinaryTarget) {
            out.push_back(column);
        }
    }
    return out;
}

// CSV ------------------------------------------------------------------------

std::vector<std::vector<std::string>> read_csv_records(std::istream& in) {
    std::vector<std::vector<std::string>> records;
    std::vector<std::string> record;
    std::string field;
    bool in_quotes = false;
    bool field_quoted = false;
    bool record_has_content = false;

    auto end_field = [&] {
        record.push_back(std::move(field));
        field.clear();
        field_quoted = false;
    };
    auto end_record = [&] {
        end_field();
        const bool blank = !record_has_content && record.size() == 1 && record[0].empty();
        if (!blank) {
            records.push_back(std::move(record));
        }
        record.clear();
        record_has_content = false;
    };

    char c = 0;
    while (in.get(c)) {
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    in.get(c);
                    field.push_back('"');
                } else {
                    in_quotes = false;
                }
            } else {
                field.push_back(c);
            }
            continue;
        }
        switch (c) {
            case '"':
                if (field.empty() && !field_quoted) {
                    in_quotes = true;
                    field_quoted = true;
                    record_has_content = true;
                } else {
                    field.push_back(c);
                }
                break;
            case ',':
                record_has_content = true;
                end_field();
                break;
            case '\r':
                if (in.peek() == '\n') {
                    in.get(c);
                }
                end_record();
                break;
            case '\n':
                end_record();
                break;
            default:
                record_has_content = true;
                field.push_back(c);
        }
    }
    if (in_quotes) {
        throw DataError("unterminated quoted field at end of input");
    }
    if (!field.empty() || !record.empty() || record_has_content) {
        end_record();
    }
    return records;
}

void write_csv_record(std::ostream& out, std::span<const std::string> fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            out << ',';
        }
        const std::string& f = fields[i];
        if (f.find_first_of(",\"\r\n") == std::string::npos) {
            out << f;
            continue;
        }
        out << '"';
        for (char c : f) {
            if (c == '"') {
                out << '"';
            }
            out << c;
        }
        out << '"';
    }
    out << '\n';
}

RawTable parse_csv(std::istream& in, const Schema& schema) {
    auto records = read_csv_records(in);
    if (records.empty()) {
        throw DataError("CSV input has no header row");
    }
    const auto& header = records.front();
    if (header.size() != schema.size()) {
        throw DataError("header has " + std::to_string(header.size()) + " columns, schema expects " +
                        std::to_string(schema.size()));
    }
    std::vector<std::size_t> source_of(schema.size());
    for (std::size_t c = 0; c < schema.size(); ++c) {
        const auto it = std::find(header.begin(), header.end(), schema[c].name);
        if (it == header.end()) {
            throw DataError("header is missing column '" + schema[c].name + "'");
        }
        if (std::find(std::next(it), header.end(), schema[c].name) != header.end()) {
            throw DataError("header repeats column '" + schema[c].name + "'");
        }
        source_of[c] = static_cast<std::size_t>(it - header.begin());
    }

    RawTable table;
    table.schema = schema;
    table.rows.reserve(records.size() - 1);
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto& record = records[r];
        const std::size_t data_row = r - 1;
        if (record.size() != schema.size()) {
            throw DataError(row_label(data_row) + ": expected " + std::to_string(schema.size()) +
                            " cells, found " + std::to_string(record.size()));
        }
        std::vector<Cell> cells;
        cells.reserve(schema.size());
        for (std::size_t c = 0; c < schema.size(); ++c) {
            cells.push_back(parse_cell(record[source_of[c]], schema[c], data_row));
        }
        table.rows.push_back(std::move(cells));
    }
    return table;
}

RawTable load_csv(const std::filesystem::path& path, const Schema& schema) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw DataError("cannot open CSV file '" + path.string() + "'");
    }
    return parse_csv(in, schema);
}

std::string format_cell(const Cell& cell) {
    return std::visit(
        [](const auto& v) -> std::string {
            using T = std::decay_t<decltype(v)>;
            if constexpr (std::is_same_v<T, std::monostate>) {
                return {};
            } else if constexpr (std::is_same_v<T, std::int64_t>) {
                return std::to_string(v);
            } else if constexpr (std::is_same_v<T, double>) {
                char buf[64];
                const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
                return std::string(buf, ptr);
            } else if constexpr (std::is_same_v<T, std::string>) {
                return v;
            } else {
                return format_iso_date(v);
            }
        },
        cell);
}

void write_csv(std::ostream& out, const RawTable& table) {
    std::vector<std::string> fields;
    for (const auto& column : table.schema) {
        fields.push_back(column.name);
    }
    write_csv_record(out, fields);
    for (const auto& row : table.rows) {
        fields.clear();
        for (const auto& cell : row) {
            fields.push_back(format_cell(cell));
        }
        write_csv_record(out, fields);
    }
}

RawTable select_rows(const RawTable& table, std::span<const std::size_t> indices) {
    RawTable out;
    out.schema = table.schema;
    out.rows.reserve(indices.size());
    for (std::size_t i : indices) {
        out.rows.push_back(table.rows.at(i));
    }
    return out;
}

// Dates ----------------------------------------------------------------------

namespace {

bool is_leap(int year) { return (year % 4 == 0 && year % 100 != 0) || year % 400 == 0; }

int days_in_month(int year, int month) {
    static constexpr int kDays[] = {31, 28, 31, 30, 31, 30, 31, 31, 30, 31, 30, 31};
    return month == 2 && is_leap(year) ? 29 : kDays[month - 1];
}

}  // namespace

Date parse_iso_date(std::string_view text) {
    const auto bad = [&] { return DataError("invalid ISO date '" + std::string(text) + "'"); };
    if (text.size() != 10 || text[4] != '-' || text[7] != '-') {
        throw bad();
    }
    auto number = [&](std::size_t pos, std::size_t len) {
        int value = 0;
        for (std::size_t i = pos; i < pos + len; ++i) {
            if (text[i] < '0' || text[i] > '9') {
                throw bad();
            }
            value = value * 10 + (text[i] - '0');
        }
        return value;
    };
    const Date date{number(0, 4), number(5, 2), number(8, 2)};
    if (date.month < 1 || date.month > 12 || date.day < 1 ||
        date.day > days_in_month(date.year, date.month)) {
        throw bad();
    }
    return date;
}

std::string format_iso_date(const Date& date) {
    char buf[16];
    std::snprintf(buf, sizeof buf, "%04d-%02d-%02d", date.year, date.month, date.day);
    return buf;
}

std::int64_t days_from_civil(const Date& date) {
    const std::int64_t y = date.year - (date.month <= 2 ? 1 : 0);
    const std::int64_t era = (y >= 0 ? y : y - 399) / 400;
    const std::int64_t yoe = y - era * 400;
    const std::int64_t mp = (date.month + 9) % 12;
    const std::int64_t doy = (153 * mp + 2) / 5 + date.day - 1;
    const std::int64_t doe = yoe * 365 + yoe / 4 - yoe / 100 + doy;
    return era * 146097 + doe - 719468;
}

Date civil_from_days(std::int64_t days) {
    days += 719468;
    const std::int64_t era = (days >= 0 ? days : days - 146096) / 146097;
    const std::int64_t doe = days - era * 146097;
    const std::int64_t yoe = (doe - doe / 1460 + doe / 36524 - doe / 146096) / 365;
    const std::int64_t doy = doe - (365 * yoe + yoe / 4 - yoe / 100);
    const std::int64_t mp = (5 * doy + 2) / 153;
    const int day = static_cast<int>(doy - (153 * mp + 2) / 5 + 1);
    const int month = static_cast<int>(mp < 10 ? mp + 3 : mp - 9);
    const int year = static_cast<int>(yoe + era * 400 + (month <= 2 ? 1 : 0));
    return {year, month, day};
}

DateParts decompose_date(const Date& date) {
    if (date.month < 1 || date.month > 12 || date.day < 1 ||
        date.day > days_in_month(date.year, date.month)) {
        throw DataError("invalid calendar date " + format_iso_date(date));
    }
    const std::int64_t days = days_from_civil(date);
    // 1970-01-01 was a Thursday (3 with Monday = 0).
    const int weekday = static_cast<int>(((days + 3) % 7 + 7) % 7);
    return {date.year, date.month, weekday};
}

DateParts decompose_date(std::string_view iso) { return decompose_date(parse_iso_date(iso)); }

// Preprocessing --------------------------------------------------------------

int CategoryMap::code(std::string_view value) const {
    const auto it = std::lower_bound(values.begin(), values.end(), value);
    if (it != values.end() && *it == value) {
        return static_cast<int>(it - values.begin());
    }
    return unseen_code();
}

const std::string& CategoryMap::decode(int code) const {
    if (code < 0 || static_cast<std::size_t>(code) >= values.size()) {
        throw std::out_of_range("category code " + std::to_string(code) + " out of range");
    }
    return values[static_cast<std::size_t>(code)];
}

PreprocessorState fit_preprocessor(const RawTable& table, std::span<const std::string> drop) {
    validate_schema(table.schema);
    PreprocessorState state;
    state.schema = table.schema;
    const std::size_t target_idx = target_column_index(table.schema);
    state.target_column = table.schema[target_idx].name;

    for (const auto& name : drop) {
        if (!table.column_index(name)) {
            throw DataError("drop list names unknown column '" + name + "'");
        }
        if (name == state.target_column) {
            throw DataError("drop list contains the target column '" + name + "'");
        }
        if (!contains(state.dropped_columns, name)) {
            state.dropped_columns.push_back(name);
        }
    }

    std::set<std::string> target_values;
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const Cell& cell = table.rows[r][target_idx];
        const auto* s = string_value(cell);
        if (!s) {
            throw DataError(row_label(r) + ": null target value");
        }
        target_values.insert(*s);
    }
    if (target_values.size() > 2) {
        throw DataError("target column '" + state.target_column + "' has more than two values");
    }
    for (const auto& v : target_values) {
        if (v != kNegativeTarget) {
            if (state.positive_label) {
                throw DataError("target column has two values and neither is '" +
                                std::string(kNegativeTarget) + "'");
            }
            state.positive_label = v;
        }
    }

    for (std::size_t c = 0; c < table.schema.size(); ++c) {
        const ColumnSchema& column = table.schema[c];
        if (c == target_idx || contains(state.dropped_columns, column.name)) {
            continue;
        }
        if (is_categorical(column.kind)) {
            std::set<std::string> seen;
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                const Cell& cell = table.rows[r][c];
                if (std::holds_alternative<std::monostate>(cell) && !column.nullable) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': null in non-nullable column");
                }
                seen.insert(category_text(cell));
            }
            state.category_maps[column.name].values.assign(seen.begin(), seen.end());
            state.feature_names.push_back(column.name);
        } else if (is_numeric(column.kind)) {
            std::vector<double> values;
            values.reserve(table.rows.size());
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                const Cell& cell = table.rows[r][c];
                if (std::holds_alternative<std::monostate>(cell)) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': numeric nulls are not supported");
                }
                values.push_back(numeric_value(cell));
            }
            if (values.empty()) {
                throw DataError("numeric column '" + column.name + "' has no non-null values");
            }
            double sum = 0.0;
            for (double v : values) {
                sum += v;
            }
            const double mean = sum / static_cast<double>(values.size());
            double sq = 0.0;
            for (double v : values) {
                sq += (v - mean) * (v - mean);
            }
            const double sd = std::sqrt(sq / static_cast<double>(values.size()));
            state.numeric_stats[column.name] = {mean, std::max(sd, kEpsilonStd)};
            state.feature_names.push_back(column.name);
        } else if (column.kind == ColumnKind::Date) {
            std::vector<std::string> derived{column.name + "_year", column.name + "_month",
                                             column.name + "_weekday"};
            state.feature_names.insert(state.feature_names.end(), derived.begin(), derived.end());
            state.date_plan[column.name] = std::move(derived);
        }
    }
    return state;
}

FeatureMatrix transform_features(const PreprocessorState& state, const RawTable& table) {
    FeatureMatrix out(table.rows.size(), state.feature_names);
    std::size_t out_col = 0;
    for (const auto& column : state.schema) {
        if (column.kind == ColumnKind::BinaryTarget || contains(state.dropped_columns, column.name)) {
            continue;
        }
        const std::size_t src = require_column(table, column);
        if (is_categorical(column.kind)) {
            const CategoryMap& map = state.category_maps.at(column.name);
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                const Cell& cell = table.rows[r][src];
                if (std::holds_alternative<std::monostate>(cell) && !column.nullable) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': null in non-nullable column");
                }
                out.at(r, out_col) = map.code(category_text(cell));
            }
            ++out_col;
        } else if (is_numeric(column.kind)) {
            const NumericStats& stats = state.numeric_stats.at(column.name);
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                const Cell& cell = table.rows[r][src];
                if (std::holds_alternative<std::monostate>(cell)) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': null in non-nullable column");
                }
                const double z = (numeric_value(cell) - stats.mean) / stats.std;
                if (!std::isfinite(z)) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': value standardizes to a non-finite number");
                }
                out.at(r, out_col) = z;
            }
            ++out_col;
        } else if (column.kind == ColumnKind::Date) {
            for (std::size_t r = 0; r < table.rows.size(); ++r) {
                const auto* date = std::get_if<Date>(&table.rows[r][src]);
                if (!date) {
                    throw DataError(row_label(r) + ", column '" + column.name +
                                    "': null in non-nullable column");
                }
                const DateParts parts = decompose_date(*date);
                out.at(r, out_col) = parts.year;
                out.at(r, out_col + 1) = parts.month;
                out.at(r, out_col + 2) = parts.weekday;
            }
            out_col += 3;
        }
    }
    return out;
}

TargetVector encode_target(const PreprocessorState& state, const RawTable& table) {
    const auto idx = table.column_index(state.target_column);
    if (!idx) {
        throw DataError("target column '" + state.target_column + "' missing from input table");
    }
    TargetVector y;
    y.reserve(table.rows.size());
    for (std::size_t r = 0; r < table.rows.size(); ++r) {
        const auto* s = string_value(table.rows[r][*idx]);
        if (!s) {
            throw DataError(row_label(r) + ": null target value");
        }
        if (*s == kNegativeTarget) {
            y.push_back(0);
        } else if (state.positive_label && *s == *state.positive_label) {
            y.push_back(1);
        } else {
            throw DataError(row_label(r) + ": target value '" + *s +
                            "' is outside the fitted two-value vocabulary");
        }
    }
    return y;
}

std::pair<FeatureMatrix, TargetVector> apply_preprocessor(const PreprocessorState& state,
                                                          const RawTable& table) {
    return {transform_features(state, table), encode_target(state, table)};
}

// Splitting ------------------------------------------------------------------

SplitIndices stratified_split_indices(const TargetVector& y, double train_fraction,
                                      std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0)) {
        throw std::invalid_argument("train fraction must lie strictly between 0 and 1");
    }
    std::vector<std::size_t> by_class[2];
    for (std::size_t i = 0; i < y.size(); ++i) {
        if (y[i] != 0 && y[i] != 1) {
            throw DataError("labels must be 0 or 1");
        }
        by_class[y[i]].push_back(i);
    }
    for (int c = 0; c < 2; ++c) {
        if (by_class[c].size() < 2) {
            throw DataError("class " + std::to_string(c) + " has fewer than 2 rows");
        }
    }
    Rng rng(seed);
    SplitIndices split;
    for (auto& members : by_class) {
        rng.shuffle(std::span(members));
        const auto n_train = static_cast<std::size_t>(
            std::floor(train_fraction * static_cast<double>(members.size())));
        split.train.insert(split.train.end(), members.begin(), members.begin() + n_train);
        split.test.insert(split.test.end(), members.begin() + n_train, members.end());
    }
    std::sort(split.train.begin(), split.train.end());
    std::sort(split.test.begin(), split.test.end());
    return split;
}

TrainTestSplit stratified_split(const FeatureMatrix& x, const TargetVector& y, double train_fraction,
                                std::uint64_t seed) {
    if (x.rows != y.size()) {
        throw std::invalid_argument("feature matrix and target lengths differ");
    }
    TrainTestSplit out;
    out.indices = stratified_split_indices(y, train_fraction, seed);
    out.train_x = select_rows(x, out.indices.train);
    out.train_y = select_rows(y, out.indices.train);
    out.test_x = select_rows(x, out.indices.test);
    out.test_y = select_rows(y, out.indices.test);
    return out;
}

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::size_t> indices) {
    FeatureMatrix out(indices.size(), x.feature_names);
    for (std::size_t i = 0; i < indices.size(); ++i) {
        const auto src = x.row(indices[i]);
        std::copy(src.begin(), src.end(), out.row(i).begin());
    }
    return out;
}

TargetVector select_rows(const TargetVector& y, std::span<const std::size_t> indices) {
    TargetVector out;
    out.reserve(indices.size());
    for (std::size_t i : indices) {
        out.push_back(y.at(i));
    }
    return out;
}

FeatureMatrix drop_columns(const FeatureMatrix& x, std::span<const std::string> names) {
    for (const auto& name : names) {
        if (!x.column_index(name)) {
            throw DataError("unknown feature '" + name + "'");
        }
    }
    std::vector<std::size_t> keep;
    std::vector<std::string> kept_names;
    for (std::size_t c = 0; c < x.cols; ++c) {
        if (!contains(names, x.feature_names[c])) {
            keep.push_back(c);
            kept_names.push_back(x.feature_names[c]);
        }
    }
    FeatureMatrix out(x.rows, std::move(kept_names));
    for (std::size_t r = 0; r < x.rows; ++r) {
        for (std::size_t j = 0; j < keep.size(); ++j) {
            out.at(r, j) = x.at(r, keep[j]);
        }
    }
    return out;
}

}  // namespace attnboost
