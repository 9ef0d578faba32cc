#include "shrinkest/dataset.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "shrinkest/errors.hpp"

namespace shrinkest {

namespace {

// Total national R&D expenditures as a percent of GNP: year, US (y), USSR, France,
// West Germany, Japan.
constexpr std::string_view kGruberCsv =
    "year,y,x1,x2,x3,x4\n"
    "1972,2.3,1.9,2.2,1.9,3.7\n"
    "1975,2.2,1.8,2.2,2.0,3.8\n"
    "1979,2.2,1.8,2.4,2.1,3.6\n"
    "1980,2.3,1.8,2.4,2.2,3.8\n"
    "1981,2.4,2.0,2.5,2.3,3.8\n"
    "1982,2.5,2.1,2.6,2.4,3.7\n"
    "1983,2.6,2.1,2.6,2.6,3.8\n"
    "1984,2.6,2.2,2.6,2.6,4.0\n"
    "1985,2.7,2.3,2.8,2.8,3.7\n"
    "1986,2.7,2.3,2.7,2.8,3.8\n";

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r\n");
    if (first == std::string_view::npos) return {};
    const auto last = s.find_last_not_of(" \t\r\n");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::istringstream in(line);
    while (std::getline(in, cell, ',')) cells.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    return cells;
}

}  // namespace

Dataset parse_dataset(std::string_view csv_text, std::string source, const DatasetOptions& options) {
    std::istringstream in{std::string(csv_text)};
    std::string line;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        if (!trim(line).empty()) {
            header = split(trim(line));
            break;
        }
    }
    if (header.empty()) throw DataError("dataset has no header row");

    std::vector<std::vector<double>> rows;
    std::size_t row_no = 0;
    while (std::getline(in, line)) {
        const std::string text = trim(line);
        if (text.empty()) continue;
        ++row_no;
        const std::vector<std::string> cells = split(text);
        if (cells.size() != header.size()) {
            throw DataError("ragged row " + std::to_string(row_no) + ": expected " + std::to_string(header.size()) +
                            " cells, found " + std::to_string(cells.size()));
        }
        std::vector<double> values(cells.size());
        for (std::size_t j = 0; j < cells.size(); ++j) {
            const std::string& c = cells[j];
            const std::string where = "row " + std::to_string(row_no) + ", column " + std::to_string(j + 1);
            if (c.empty()) throw DataError("missing value at " + where);
            const char* begin = c.data();
            const char* end = c.data() + c.size();
            if (*begin == '+') ++begin;
            const auto [ptr, ec] = std::from_chars(begin, end, values[j]);
            if (ec != std::errc() || ptr != end) throw DataError("non-numeric value '" + c + "' at " + where);
        }
        rows.push_back(std::move(values));
    }
    if (rows.empty()) throw DataError("dataset has no data rows");

    std::optional<std::size_t> response_col;
    std::optional<std::size_t> index_col;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (header[j] == options.response) response_col = j;
        if (!options.index.empty() && header[j] == options.index) index_col = j;
    }
    if (!response_col) throw DataError("response column '" + options.response + "' not found");

    Dataset ds;
    ds.source = std::move(source);
    const auto n = static_cast<Eigen::Index>(rows.size());
    ds.y.resize(n);
    std::vector<std::size_t> regressors;
    for (std::size_t j = 0; j < header.size(); ++j) {
        if (j == *response_col || (index_col && j == *index_col)) continue;
        regressors.push_back(j);
        ds.names.push_back(header[j]);
    }
    ds.X.resize(n, static_cast<Eigen::Index>(regressors.size()));
    if (index_col) {
        ds.index_name = header[*index_col];
        ds.index.resize(n);
    }
    for (Eigen::Index i = 0; i < n; ++i) {
        const auto& row = rows[static_cast<std::size_t>(i)];
        ds.y(i) = row[*response_col];
        for (std::size_t c = 0; c < regressors.size(); ++c) ds.X(i, static_cast<Eigen::Index>(c)) = row[regressors[c]];
        if (index_col) ds.index(i) = row[*index_col];
    }
    return ds;
}

Dataset load_dataset(std::string_view path_or_builtin, const DatasetOptions& options) {
    if (path_or_builtin == kBuiltinGruber) return parse_dataset(kGruberCsv, std::string(kBuiltinGruber), options);
    if (path_or_builtin.starts_with("builtin:")) {
        throw DataError("unknown builtin dataset '" + std::string(path_or_builtin) + "'");
    }
    std::ifstream file{std::string(path_or_builtin)};
    if (!file) throw DataError("cannot open dataset '" + std::string(path_or_builtin) + "'");
    std::ostringstream buffer;
    buffer << file.rdbuf();
    return parse_dataset(buffer.str(), std::string(path_or_builtin), options);
}

}  // namespace shrinkest
