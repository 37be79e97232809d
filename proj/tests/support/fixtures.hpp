#pragma once

#include "attnboost/experiments.hpp"
#include "attnboost/numeric.hpp"
#include "attnboost/tabular.hpp"

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <unistd.h>

namespace fixture {

inline const char* kRetailHeader =
    "Row ID,Order ID,Order Date,Ship Date,Ship Mode,Customer ID,Customer Name,Segment,Country,City,"
    "State,Postal Code,Region,Retail Sales People,Product ID,Category,Sub-Category,Product Name,"
    "Returned,Sales,Quantity,Discount,Profit";

/// The sample transaction from the dataset description (Postal Code and Region
/// are blank there; filled with plausible values).
inline const char* kSampleRow =
    "2430,CA-2017-100748,2017-05-13,2017-05-20,Standard Class,RB-19795,Ross Baird,Home Office,"
    "United States,San Francisco,California,94122,West,Anna Andreadi,OFF-LA-10000240,Office Supplies,"
    "Labels,Self-Adhesive Address Labels for Typewriters by Universal,Not,58.48,8,0.0,27.4856";

/// A fresh directory under the system temp dir, removed on destruction.
class TempDir {
public:
    TempDir() {
        std::string pattern = (std::filesystem::temp_directory_path() / "attnboost-test-XXXXXX").string();
        path_ = mkdtemp(pattern.data());
    }
    ~TempDir() {
        std::error_code ec;
        std::filesystem::remove_all(path_, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    std::filesystem::path operator/(const std::string& name) const { return path_ / name; }
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
};

inline void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream(path, std::ios::binary) << text;
}

inline std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

/// Planted retail-shaped table.
inline attnboost::RawTable retail_table(std::size_t rows, std::uint64_t seed = 42) {
    return attnboost::generate_synthetic(attnboost::planted_spec(rows, seed)).table;
}

/// Random matrix with a label that depends on the first column only.
inline std::pair<attnboost::FeatureMatrix, attnboost::TargetVector> threshold_data(std::size_t n, std::size_t d,
                                                                                  std::uint64_t seed) {
    std::vector<std::string> names;
    for (std::size_t j = 0; j < d; ++j) {
        names.push_back("f" + std::to_string(j));
    }
    attnboost::FeatureMatrix x(n, names);
    attnboost::TargetVector y(n);
    attnboost::Rng rng(seed);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t j = 0; j < d; ++j) {
            x.at(r, j) = rng.uniform(-1.0, 1.0);
        }
        y[r] = x.at(r, 0) > 0.0 ? 1 : 0;
    }
    return {x, y};
}

}  // namespace fixture
