#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace attnboost {

/// Raised for malformed input data; the message names the offending row/column.
class DataError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class ColumnKind { Integer, Float, String, Category, Date, BinaryTarget };

std::string_view to_string(ColumnKind kind);

struct ColumnSchema {
    std::string name;
    ColumnKind kind = ColumnKind::Float;
    bool nullable = false;

    bool operator==(const ColumnSchema&) const = default;
};

using Schema = std::vector<ColumnSchema>;

struct Date {
    int year = 1970;
    int month = 1;
    int day = 1;

    auto operator<=>(const Date&) const = default;
};

using Cell = std::variant<std::monostate, std::int64_t, double, std::string, Date>;

struct RawTable {
    Schema schema;
    std::vector<std::vector<Cell>> rows;

    std::size_t row_count() const { return rows.size(); }
    std::optional<std::size_t> column_index(std::string_view name) const;
};

/// Dense row-major matrix of model inputs.
struct FeatureMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> values;
    std::vector<std::string> feature_names;

    FeatureMatrix() = default;
    FeatureMatrix(std::size_t n_rows, std::vector<std::string> names)
        : rows(n_rows), cols(names.size()), values(n_rows * names.size(), 0.0),
          feature_names(std::move(names)) {}

    double& at(std::size_t r, std::size_t c) { return values[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return values[r * cols + c]; }
    std::span<const double> row(std::size_t r) const {
        return std::span(values).subspan(r * cols, cols);
    }
    std::span<double> row(std::size_t r) { return std::span(values).subspan(r * cols, cols); }
    std::optional<std::size_t> column_index(std::string_view name) const;
};

/// Binary labels, 0 or 1.
using TargetVector = std::vector<int>;

// Schema ---------------------------------------------------------------------

/// The 23-column retail transaction layout.
Schema retail_schema();

/// Identifier columns with no predictive value.
std::vector<std::string> default_identifier_columns();

/// Throws DataError unless names are unique and exactly one column is the target.
void validate_schema(const Schema& schema);

std::size_t target_column_index(const Schema& schema);

/// Schema with the target column removed (unlabeled prediction input).
Schema without_target(const Schema& schema);

// CSV ------------------------------------------------------------------------

/// Splits RFC-4180 style CSV into records (double-quote escaping, embedded newlines).
std::vector<std::vector<std::string>> read_csv_records(std::istream& in);

void write_csv_record(std::ostream& out, std::span<const std::string> fields);

/// Parses a header row plus typed data rows. Columns may appear in any order in the
/// file; the result is laid out in schema order.
RawTable parse_csv(std::istream& in, const Schema& schema);

RawTable load_csv(const std::filesystem::path& path, const Schema& schema);

/// Writes the table header and rows in schema order; doubles use shortest
/// round-trip formatting.
void write_csv(std::ostream& out, const RawTable& table);

std::string format_cell(const Cell& cell);

RawTable select_rows(const RawTable& table, std::span<const std::size_t> indices);

// Dates ----------------------------------------------------------------------

struct DateParts {
    int year = 0;
    int month = 0;
    int weekday = 0;  // Monday = 0 ... Sunday = 6

    bool operator==(const DateParts&) const = default;
};

/// Parses strict ISO `YYYY-MM-DD`; throws DataError on malformed or invalid dates.
Date parse_iso_date(std::string_view text);

std::string format_iso_date(const Date& date);

/// Days since 1970-01-01 in the proleptic Gregorian calendar.
std::int64_t days_from_civil(const Date& date);

Date civil_from_days(std::int64_t days);

DateParts decompose_date(const Date& date);
DateParts decompose_date(std::string_view iso);

// Preprocessing --------------------------------------------------------------

inline constexpr double kEpsilonStd = 1e-12;
inline constexpr std::string_view kNullCategory = "<NULL>";
inline constexpr std::string_view kNegativeTarget = "Not";

/// Lexicographically ordered label encoding for one categorical column.
struct CategoryMap {
    std::vector<std::string> values;  // sorted unique; code = position

    int code(std::string_view value) const;  // unseen_code() when absent
    int unseen_code() const { return static_cast<int>(values.size()); }
    const std::string& decode(int code) const;

    bool operator==(const CategoryMap&) const = default;
};

struct NumericStats {
    double mean = 0.0;
    double std = 1.0;  // population std, floored at kEpsilonStd

    bool operator==(const NumericStats&) const = default;
};

struct PreprocessorState {
    Schema schema;  // fit-time schema
    std::map<std::string, CategoryMap> category_maps;
    std::map<std::string, NumericStats> numeric_stats;
    std::map<std::string, std::vector<std::string>> date_plan;  // column -> derived names
    std::vector<std::string> dropped_columns;
    std::vector<std::string> feature_names;
    std::string target_column;
    std::optional<std::string> positive_label;

    bool operator==(const PreprocessorState&) const = default;
};

PreprocessorState fit_preprocessor(const RawTable& table, std::span<const std::string> drop);

/// Features only; the target column may be absent from `table`.
FeatureMatrix transform_features(const PreprocessorState& state, const RawTable& table);

TargetVector encode_target(const PreprocessorState& state, const RawTable& table);

std::pair<FeatureMatrix, TargetVector> apply_preprocessor(const PreprocessorState& state,
                                                          const RawTable& table);

// Splitting ------------------------------------------------------------------

struct SplitIndices {
    std::vector<std::size_t> train;  // ascending
    std::vector<std::size_t> test;   // ascending
};

SplitIndices stratified_split_indices(const TargetVector& y, double train_fraction,
                                      std::uint64_t seed);

struct TrainTestSplit {
    FeatureMatrix train_x;
    TargetVector train_y;
    FeatureMatrix test_x;
    TargetVector test_y;
    SplitIndices indices;
};

TrainTestSplit stratified_split(const FeatureMatrix& x, const TargetVector& y,
                                double train_fraction, std::uint64_t seed);

FeatureMatrix select_rows(const FeatureMatrix& x, std::span<const std::size_t> indices);
TargetVector select_rows(const TargetVector& y, std::span<const std::size_t> indices);

/// Drops the named columns (exact feature names) from a matrix.
FeatureMatrix drop_columns(const FeatureMatrix& x, std::span<const std::string> names);

}  // namespace attnboost
