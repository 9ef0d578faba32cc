#include "shrinkest/report.hpp"

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>

#include "shrinkest/errors.hpp"

namespace shrinkest {

namespace {

using nlohmann::json;

std::vector<std::string> split(std::string_view line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.emplace_back(line.substr(start));
            return out;
        }
        out.emplace_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

std::vector<std::string_view> lines_of(std::string_view text) {
    std::vector<std::string_view> out;
    while (!text.empty()) {
        const std::size_t pos = text.find('\n');
        std::string_view line = text.substr(0, pos);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        if (!line.empty()) out.push_back(line);
        if (pos == std::string_view::npos) break;
        text.remove_prefix(pos + 1);
    }
    return out;
}

// JSON has no NaN or infinity; those become null.
std::string json_number(double x) { return std::isfinite(x) ? format_number(x) : "null"; }

std::string json_string(std::string_view s) { return json(std::string(s)).dump(); }

std::string json_bool(const std::optional<bool>& b) {
    if (!b) return "null";
    return *b ? "true" : "false";
}

std::string csv_bool(const std::optional<bool>& b) {
    if (!b) return "";
    return *b ? "true" : "false";
}

json matrix_json(const Eigen::MatrixXd& m) {
    json rows = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

json vector_json(const Eigen::VectorXd& v) {
    json out = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
    return out;
}

json one_based(const std::vector<Eigen::Index>& idx) {
    json out = json::array();
    for (Eigen::Index j : idx) out.push_back(j + 1);
    return out;
}

std::string document(const json& metadata, const std::vector<std::string>& row_objects) {
    std::string out = "{\n  \"metadata\": " + metadata.dump() + ",\n  \"rows\": [";
    for (std::size_t i = 0; i < row_objects.size(); ++i) {
        out += i == 0 ? "\n    " : ",\n    ";
        out += row_objects[i];
    }
    out += row_objects.empty() ? "]\n}\n" : "\n  ]\n}\n";
    return out;
}

std::string smse_row_json(const SimRow& r) {
    return "{\"estimator\": " + json_string(to_string(r.kind)) + ", \"k\": " + json_number(r.k) +
           ", \"d\": " + json_number(r.d) + ", \"mode\": " + json_string(to_string(r.mode)) +
           ", \"smse\": " + json_number(r.mean_smse) + ", \"stderr\": " + json_number(r.std_error) + "}";
}

double json_double(const json& v) {
    if (v.is_null()) return std::numeric_limits<double>::quiet_NaN();
    if (!v.is_number()) throw DataError("expected a number in report, found " + v.dump());
    return v.get<double>();
}

}  // namespace

std::string_view to_string(OutputFormat f) { return f == OutputFormat::csv ? "csv" : "json"; }

OutputFormat parse_output_format(std::string_view s) {
    if (s == "csv") return OutputFormat::csv;
    if (s == "json") return OutputFormat::json;
    throw ConfigError("unknown output format '" + std::string(s) + "' (expected csv or json)");
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_number(std::string_view s) {
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    double x = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        throw DataError("malformed number '" + std::string(s) + "'");
    }
    return x;
}

std::string smse_csv(const std::vector<SimRow>& rows) {
    std::string out(kSmseHeader);
    out += '\n';
    for (const SimRow& r : rows) {
        out += std::string(to_string(r.kind)) + ',' + format_number(r.k) + ',' + format_number(r.d) + ',' +
               std::string(to_string(r.mode)) + ',' + format_number(r.mean_smse) + ',' +
               format_number(r.std_error) + '\n';
    }
    return out;
}

std::vector<SimRow> parse_smse_csv(std::string_view text) {
    const auto lines = lines_of(text);
    if (lines.empty() || lines.front() != kSmseHeader) {
        throw DataError("SMSE table must start with header '" + std::string(kSmseHeader) + "'");
    }
    std::vector<SimRow> rows;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const auto cells = split(lines[i], ',');
        if (cells.size() != 6) {
            throw DataError("ragged row " + std::to_string(i) + ": expected 6 cells, found " +
                            std::to_string(cells.size()));
        }
        SimRow r;
        try {
            r.kind = parse_estimator_kind(cells[0]);
            r.mode = parse_model_mode(cells[3]);
        } catch (const ConfigError& e) {
            throw DataError("row " + std::to_string(i) + ": " + e.what());
        }
        r.k = parse_number(cells[1]);
        r.d = parse_number(cells[2]);
        r.mean_smse = parse_number(cells[4]);
        r.std_error = parse_number(cells[5]);
        rows.push_back(r);
    }
    return rows;
}

nlohmann::json smse_rows_json(const std::vector<SimRow>& rows) {
    json out = json::array();
    for (const SimRow& r : rows) out.push_back(json::parse(smse_row_json(r)));
    return out;
}

std::vector<SimRow> parse_smse_json(const nlohmann::json& doc) {
    const json& rows = doc.is_object() ? doc.at("rows") : doc;
    if (!rows.is_array()) throw DataError("\"rows\" must be an array");
    std::vector<SimRow> out;
    try {
        for (const json& row : rows) {
            SimRow r;
            r.kind = parse_estimator_kind(row.at("estimator").get<std::string>());
            r.k = json_double(row.at("k"));
            r.d = json_double(row.at("d"));
            r.mode = parse_model_mode(row.at("mode").get<std::string>());
            r.mean_smse = json_double(row.at("smse"));
            r.std_error = json_double(row.at("stderr"));
            out.push_back(r);
        }
    } catch (const json::exception& e) {
        throw DataError(std::string("malformed SMSE row: ") + e.what());
    } catch (const ConfigError& e) {
        throw DataError(std::string("malformed SMSE row: ") + e.what());
    }
    return out;
}

nlohmann::json simulation_metadata(const SimReport& report) {
    const SimConfig& c = report.config;
    json meta;
    meta["command"] = "simulate";
    meta["version"] = report.version;
    meta["generator"] = std::string(kGeneratorVersion);
    meta["seed"] = c.seed;
    meta["n"] = c.n;
    meta["alpha"] = c.alpha;
    meta["reps"] = c.reps;
    meta["retained"] = one_based(c.retained);
    meta["excluded"] = one_based(c.excluded);
    meta["x_mode"] = std::string(to_string(c.x_mode));
    meta["aggregation"] = std::string(to_string(c.aggregation));
    meta["optimal_form"] = std::string(to_string(c.optimal));
    meta["mre_convention"] = std::string(to_string(c.mre));
    meta["noise_variance"] = c.noise_variance;
    meta["h"] = c.h ? json(*c.h) : json(nullptr);
    meta["grid_points"] = c.grid.size();
    if (c.restriction) {
        meta["restriction"] = {{"R", matrix_json(c.restriction->R)},
                               {"g", vector_json(c.restriction->g)},
                               {"W", matrix_json(c.restriction->W)}};
    } else {
        meta["restriction"] = nullptr;
    }
    meta["redraws"] = report.redraws;
    meta["warnings"] = report.warnings;
    return meta;
}

nlohmann::json analysis_metadata(const AnalysisResult& result, const AnalysisConfig& config,
                                 std::string_view source) {
    const PreparedData& p = result.prepared;
    json meta;
    meta["command"] = "analyze";
    meta["version"] = SHRINKEST_VERSION;
    meta["data"] = std::string(source);
    meta["anchor"] = std::string(to_string(config.anchor));
    meta["optimal_form"] = std::string(to_string(config.optimal));
    meta["mre_convention"] = std::string(to_string(config.mre));
    meta["sigma2"] = p.sigma2;
    meta["vif"] = vector_json(p.vif);
    meta["beta_full"] = vector_json(p.beta_full);
    meta["h"] = config.h ? json(*config.h) : json(nullptr);
    meta["grid_points"] = config.grid.size();
    if (p.modes[1].rcm) {
        const RestrictionSpec& rs = p.modes[0].rcm->restriction;
        meta["restriction"] = {{"R", matrix_json(rs.R)}, {"r", vector_json(rs.r)}, {"W", matrix_json(rs.W)}};
        meta["restriction"]["g"] = vector_json(p.modes[1].rcm->restriction.g);
    } else {
        meta["restriction"] = nullptr;
    }
    meta["warnings"] = p.warnings;
    return meta;
}

std::string render_smse(const std::vector<SimRow>& rows, const nlohmann::json& metadata, OutputFormat format) {
    if (format == OutputFormat::csv) return smse_csv(rows);
    std::vector<std::string> objects;
    objects.reserve(rows.size());
    for (const SimRow& r : rows) objects.push_back(smse_row_json(r));
    return document(metadata, objects);
}

std::string render_dominance(const std::vector<DominanceRow>& rows, const nlohmann::json& metadata,
                             OutputFormat format) {
    if (format == OutputFormat::csv) {
        std::string out(kDominanceHeader);
        out += '\n';
        for (const DominanceRow& r : rows) {
            const DominanceVerdict& v = r.verdict;
            out += std::string(to_string(r.candidate)) + ',' + std::string(to_string(r.incumbent)) + ',' +
                   format_number(r.k) + ',' + format_number(r.d) + ',' + std::string(to_string(r.mode)) + ',' +
                   format_number(v.precondition_eig) + ',' + format_number(v.quadratic_form) + ',' +
                   std::string(to_string(v.status)) + ',' + (v.dominated ? "true" : "false") + ',' +
                   csv_bool(v.oracle_nnd) + ',' + csv_bool(v.oracle_agrees) + '\n';
        }
        return out;
    }
    std::vector<std::string> objects;
    for (const DominanceRow& r : rows) {
        const DominanceVerdict& v = r.verdict;
        objects.push_back("{\"candidate\": " + json_string(to_string(r.candidate)) +
                          ", \"incumbent\": " + json_string(to_string(r.incumbent)) +
                          ", \"k\": " + json_number(r.k) + ", \"d\": " + json_number(r.d) +
                          ", \"mode\": " + json_string(to_string(r.mode)) +
                          ", \"precondition_eig\": " + json_number(v.precondition_eig) +
                          ", \"quadratic_form\": " + json_number(v.quadratic_form) +
                          ", \"status\": " + json_string(to_string(v.status)) +
                          ", \"dominated\": " + (v.dominated ? "true" : "false") +
                          ", \"reason\": " + json_string(v.reason) +
                          ", \"oracle_nnd\": " + json_bool(v.oracle_nnd) +
                          ", \"oracle_agrees\": " + json_bool(v.oracle_agrees) + "}");
    }
    return document(metadata, objects);
}

}  // namespace shrinkest
