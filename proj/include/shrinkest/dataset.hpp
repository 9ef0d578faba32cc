#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace shrinkest {

/// Name accepted by load_dataset for the embedded R&D expenditure table (10 rows, 1972-1986).
inline constexpr std::string_view kBuiltinGruber = "builtin:gruber";

struct Dataset {
    std::vector<std::string> names;  ///< regressor labels, one per column of X
    Eigen::VectorXd y;
    Eigen::MatrixXd X;
    std::string source;               ///< file path or "builtin:gruber"
    std::string index_name;           ///< identifier column kept out of X (empty if absent)
    Eigen::VectorXd index;            ///< identifier values, e.g. year
};

struct DatasetOptions {
    std::string response = "y";
    std::string index = "year";  ///< optional identifier column; ignored when absent
};

/// Loads a CSV file (header row, comma separated, decimal point) or the builtin table.
/// Throws DataError naming the 1-based data row and column for missing, non-numeric or
/// ragged input.
Dataset load_dataset(std::string_view path_or_builtin, const DatasetOptions& options = {});

/// Same parser applied to in-memory CSV text.
Dataset parse_dataset(std::string_view csv_text, std::string source, const DatasetOptions& options = {});

}  // namespace shrinkest
