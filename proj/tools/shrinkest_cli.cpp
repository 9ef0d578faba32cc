// Command-line front end: simulate, analyze, dominate.

#include <CLI11.hpp>
#include <algorithm>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "shrinkest/analysis.hpp"
#include "shrinkest/dataset.hpp"
#include "shrinkest/errors.hpp"
#include "shrinkest/montecarlo.hpp"
#include "shrinkest/report.hpp"

using namespace shrinkest;

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string cell;
    while (std::getline(in, cell, sep)) out.push_back(cell);
    if (!s.empty() && s.back() == sep) out.emplace_back();
    return out;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double to_double(const std::string& cell, const std::string& what) {
    try {
        return parse_number(trim(cell));
    } catch (const DataError&) {
        throw ConfigError("bad number '" + cell + "' in " + what);
    }
}

std::vector<double> parse_doubles(const std::string& s, const std::string& what) {
    std::vector<double> out;
    for (const auto& cell : split(s, ',')) out.push_back(to_double(cell, what));
    if (out.empty()) throw ConfigError(what + " is empty");
    return out;
}

/// Rows separated by ';', entries by ','.
Eigen::MatrixXd parse_matrix(const std::string& s, const std::string& what) {
    std::vector<std::vector<double>> rows;
    for (const auto& row : split(s, ';')) rows.push_back(parse_doubles(row, what));
    if (rows.empty()) throw ConfigError(what + " is empty");
    Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows[0].size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size()) throw ConfigError(what + " has rows of different lengths");
        for (std::size_t j = 0; j < rows[i].size(); ++j) {
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
        }
    }
    return m;
}

Eigen::VectorXd parse_vector(const std::string& s, const std::string& what) {
    const auto v = parse_doubles(s, what);
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<Eigen::Index> parse_columns(const std::string& s) {
    std::vector<Eigen::Index> out;
    if (trim(s).empty()) return out;
    for (const auto& cell : split(s, ',')) {
        const double x = to_double(cell, "partition");
        if (x < 1 || x != static_cast<double>(static_cast<Eigen::Index>(x))) {
            throw ConfigError("partition entries must be positive integers, got '" + cell + "'");
        }
        out.push_back(static_cast<Eigen::Index>(x) - 1);
    }
    return out;
}

/// "1,2,3:4,5" -> retained {0,1,2}, excluded {3,4}.
std::pair<std::vector<Eigen::Index>, std::vector<Eigen::Index>> parse_partition(const std::string& s) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ConfigError("partition must look like 1,2,3:4,5");
    return {parse_columns(s.substr(0, colon)), parse_columns(s.substr(colon + 1))};
}

std::vector<EstimatorKind> parse_estimators(const std::string& s) {
    std::vector<EstimatorKind> out;
    if (trim(s).empty()) return out;
    for (const auto& cell : split(s, ',')) out.push_back(parse_estimator_kind(trim(cell)));
    return out;
}

std::vector<GridPoint> build_grid(int points, const std::string& k_grid, const std::string& d_grid) {
    if (k_grid.empty() && d_grid.empty()) return shared_grid(points);
    std::vector<double> shared;
    for (const GridPoint& p : shared_grid(points)) shared.push_back(p.k);
    const auto ks = k_grid.empty() ? shared : parse_doubles(k_grid, "k grid");
    const auto ds = d_grid.empty() ? shared : parse_doubles(d_grid, "d grid");
    return cartesian_grid(ks, ds);
}

std::vector<ModelMode> parse_modes(const std::string& s) {
    if (s == "both") return {ModelMode::correct, ModelMode::misspecified};
    return {parse_model_mode(s)};
}

void emit(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        std::cout.flush();
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << text;
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

void print_warnings(const std::vector<std::string>& warnings) {
    for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';
}

struct Common {
    std::string format = "csv";
    std::string out;
    std::string optimal_form = "exact";
    std::string mre_convention = "paper";
};

struct RestrictionFlags {
    std::string R;
    std::string g;
    std::string r;
    std::string W;
    bool none = false;
};

struct SimFlags {
    Eigen::Index n = 50;
    double alpha = 0.9;
    int reps = 2000;
    std::uint64_t seed = 20240101;
    std::string partition = "1,2,3:4,5";
    int grid = 50;
    std::string k_grid;
    std::string d_grid;
    std::string x_mode = "regenerate";
    std::string aggregation = "analytic";
    std::optional<Eigen::Index> h;
    unsigned threads = 1;
    double noise_variance = 1.0;
    std::string estimators;
};

struct DataFlags {
    std::string data = std::string(kBuiltinGruber);
    std::string response = "y";
    std::string index = "year";
    std::string partition;
    int grid = 50;
    std::string k_grid;
    std::string d_grid;
    std::optional<Eigen::Index> h;
    std::string anchor = "newhouse-oman";
    std::string estimators;
};

struct DominateFlags {
    std::string candidate = "sioe";
    std::string incumbent = "olse";
    std::string k = "0.5";
    std::string d = "0.5";
    std::string mode = "both";
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--format", c.format, "csv or json")->capture_default_str();
    cmd->add_option("--out", c.out, "output file (default stdout)");
    cmd->add_option("--optimal-form", c.optimal_form, "exact or symmetric")->capture_default_str();
    cmd->add_option("--mre-convention", c.mre_convention, "paper or definitional")->capture_default_str();
}

void add_restriction(CLI::App* cmd, RestrictionFlags& f, bool with_r) {
    cmd->add_option("--restriction-R", f.R, "restriction matrix, rows separated by ';'");
    cmd->add_option("--restriction-g", f.g, "misspecification shift g (scalar 0 broadcasts)");
    cmd->add_option("--restriction-W", f.W, "restriction covariance W up to sigma^2 (default identity)");
    if (with_r) cmd->add_option("--restriction-r", f.r, "prior value r (default R times the full-model fit)");
    cmd->add_flag("--no-restriction", f.none, "omit the restricted family");
}

void add_sim(CLI::App* cmd, SimFlags& s) {
    cmd->add_option("--n", s.n, "observations per replicate")->capture_default_str();
    cmd->add_option("--alpha", s.alpha, "collinearity parameter")->capture_default_str();
    cmd->add_option("--seed", s.seed, "master seed")->capture_default_str();
    cmd->add_option("--partition", s.partition, "retained:excluded regressors, 1-based")->capture_default_str();
    cmd->add_option("--components", s.h, "principal components kept by PCRE-type estimators");
}

void add_data(CLI::App* cmd, DataFlags& d) {
    cmd->add_option("--data", d.data, "CSV path or builtin:gruber")->capture_default_str();
    cmd->add_option("--response", d.response, "response column")->capture_default_str();
    cmd->add_option("--index", d.index, "identifier column excluded from the regressors")->capture_default_str();
    cmd->add_option("--partition", d.partition, "retained:excluded regressors, 1-based (default last excluded)");
    cmd->add_option("--components", d.h, "principal components kept by PCRE-type estimators");
    cmd->add_option("--anchor", d.anchor, "newhouse-oman or ols")->capture_default_str();
}

Eigen::VectorXd broadcast(const std::string& s, Eigen::Index q, const std::string& what) {
    Eigen::VectorXd v = parse_vector(s, what);
    if (v.size() == 1 && q > 1) return Eigen::VectorXd::Constant(q, v(0));
    if (v.size() != q) throw ConfigError(what + " must have " + std::to_string(q) + " entries");
    return v;
}

std::optional<RestrictionSpec> sim_restriction(const RestrictionFlags& f) {
    if (f.none) {
        if (!f.R.empty()) throw ConfigError("--no-restriction conflicts with --restriction-R");
        return std::nullopt;
    }
    RestrictionSpec rs = default_sim_restriction();
    if (!f.R.empty()) rs.R = parse_matrix(f.R, "restriction R");
    const Eigen::Index q = rs.R.rows();
    rs.g = f.g.empty() ? Eigen::VectorXd::Zero(q) : broadcast(f.g, q, "restriction g");
    rs.W = f.W.empty() ? Eigen::MatrixXd::Identity(q, q) : parse_matrix(f.W, "restriction W");
    rs.r = Eigen::VectorXd::Zero(q);
    return rs;
}

SimConfig sim_config(const SimFlags& s, const RestrictionFlags& rf, const Common& c) {
    SimConfig cfg;
    cfg.n = s.n;
    cfg.alpha = s.alpha;
    cfg.reps = s.reps;
    cfg.seed = s.seed;
    std::tie(cfg.retained, cfg.excluded) = parse_partition(s.partition);
    cfg.restriction = sim_restriction(rf);
    cfg.grid = build_grid(s.grid, s.k_grid, s.d_grid);
    cfg.x_mode = parse_x_mode(s.x_mode);
    cfg.aggregation = parse_aggregation(s.aggregation);
    cfg.h = s.h;
    cfg.threads = s.threads;
    cfg.noise_variance = s.noise_variance;
    cfg.optimal = parse_optimal_form(c.optimal_form);
    cfg.mre = parse_mre_convention(c.mre_convention);
    cfg.validate();
    return cfg;
}

AnalysisConfig analysis_config(const DataFlags& d, const RestrictionFlags& rf, const Common& c) {
    AnalysisConfig cfg;
    if (!d.partition.empty()) std::tie(cfg.retained, cfg.excluded) = parse_partition(d.partition);
    if (!rf.none && !rf.R.empty()) {
        cfg.R = parse_matrix(rf.R, "restriction R");
        const Eigen::Index q = cfg.R->rows();
        if (!rf.g.empty()) cfg.g = broadcast(rf.g, q, "restriction g");
        if (!rf.r.empty()) cfg.r = broadcast(rf.r, q, "restriction r");
        if (!rf.W.empty()) cfg.W = parse_matrix(rf.W, "restriction W");
    } else if (!rf.g.empty() || !rf.r.empty() || !rf.W.empty()) {
        throw ConfigError("restriction g, r or W given without --restriction-R");
    }
    cfg.grid = build_grid(d.grid, d.k_grid, d.d_grid);
    cfg.estimators = parse_estimators(d.estimators);
    cfg.h = d.h;
    cfg.anchor = parse_anchor_source(d.anchor);
    cfg.optimal = parse_optimal_form(c.optimal_form);
    cfg.mre = parse_mre_convention(c.mre_convention);
    return cfg;
}

Dataset load(const DataFlags& d) {
    DatasetOptions opts;
    opts.response = d.response;
    opts.index = d.index;
    return load_dataset(d.data, opts);
}

void print_vif(const PreparedData& p, const Dataset& data) {
    std::cerr << "VIF:";
    for (Eigen::Index j = 0; j < p.vif.size(); ++j) {
        std::cerr << ' ' << data.names[static_cast<std::size_t>(j)] << '=' << format_number(p.vif(j));
    }
    std::cerr << '\n';
}

int run(int argc, char** argv) {
    CLI::App app{"Shrinkage estimators under omitted-variable misspecification"};
    app.require_subcommand(1);
    app.set_config("--config", "", "TOML/INI file; command-line flags take precedence");
    app.set_version_flag("--version", SHRINKEST_VERSION);

    Common sim_common, an_common, dom_common;
    RestrictionFlags sim_rf, an_rf, dom_rf;
    SimFlags sim, dom_sim;
    DataFlags an, dom_data;
    DominateFlags dom;

    auto* simulate = app.add_subcommand("simulate", "Monte Carlo SMSE study");
    add_common(simulate, sim_common);
    add_sim(simulate, sim);
    simulate->add_option("--reps", sim.reps, "replicates")->capture_default_str();
    simulate->add_option("--grid", sim.grid, "shared grid points t = i/N for k = d")->capture_default_str();
    simulate->add_option("--k-grid", sim.k_grid, "explicit k values (cartesian with d)");
    simulate->add_option("--d-grid", sim.d_grid, "explicit d values (cartesian with k)");
    simulate->add_option("--x-mode", sim.x_mode, "regenerate or fixed")->capture_default_str();
    simulate->add_option("--aggregation", sim.aggregation, "analytic or empirical")->capture_default_str();
    simulate->add_option("--threads", sim.threads, "worker threads, 0 for all cores")->capture_default_str();
    simulate->add_option("--noise-variance", sim.noise_variance, "error variance sigma^2")->capture_default_str();
    simulate->add_option("--estimators", sim.estimators, "comma-separated subset (default all)");
    add_restriction(simulate, sim_rf, false);

    auto* analyze_cmd = app.add_subcommand("analyze", "SMSE comparison on a dataset");
    add_common(analyze_cmd, an_common);
    add_data(analyze_cmd, an);
    analyze_cmd->add_option("--grid", an.grid, "shared grid points t = i/N for k = d")->capture_default_str();
    analyze_cmd->add_option("--k-grid", an.k_grid, "explicit k values (cartesian with d)");
    analyze_cmd->add_option("--d-grid", an.d_grid, "explicit d values (cartesian with k)");
    analyze_cmd->add_option("--estimators", an.estimators, "comma-separated subset (default all)");
    add_restriction(analyze_cmd, an_rf, true);

    auto* dominate_cmd = app.add_subcommand("dominate", "MSEM dominance certificate between two estimators");
    add_common(dominate_cmd, dom_common);
    dominate_cmd->add_option("--candidate", dom.candidate, "candidate estimator")->capture_default_str();
    dominate_cmd->add_option("--incumbent", dom.incumbent, "incumbent estimator")->capture_default_str();
    dominate_cmd->add_option("--k", dom.k, "k values")->capture_default_str();
    dominate_cmd->add_option("--d", dom.d, "d values")->capture_default_str();
    dominate_cmd->add_option("--mode", dom.mode, "correct, misspecified or both")->capture_default_str();
    auto* data_opt = dominate_cmd->add_option("--data", dom_data.data, "CSV path or builtin:gruber");
    dominate_cmd->add_option("--response", dom_data.response, "response column")->capture_default_str();
    dominate_cmd->add_option("--index", dom_data.index, "identifier column")->capture_default_str();
    dominate_cmd->add_option("--anchor", dom_data.anchor, "newhouse-oman or ols (dataset source)")
        ->capture_default_str();
    dominate_cmd->add_option("--n", dom_sim.n, "observations of the simulated instance")->capture_default_str();
    dominate_cmd->add_option("--alpha", dom_sim.alpha, "collinearity of the simulated instance")
        ->capture_default_str();
    dominate_cmd->add_option("--seed", dom_sim.seed, "seed of the simulated instance")->capture_default_str();
    std::string dom_partition;
    dominate_cmd->add_option("--partition", dom_partition, "retained:excluded regressors, 1-based");
    dominate_cmd->add_option("--components", dom_sim.h, "principal components kept by PCRE-type estimators");
    add_restriction(dominate_cmd, dom_rf, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : static_cast<int>(ExitCode::config_error);
    }

    if (simulate->parsed()) {
        const SimConfig cfg = sim_config(sim, sim_rf, sim_common);
        const auto format = parse_output_format(sim_common.format);
        const auto wanted = parse_estimators(sim.estimators);
        for (EstimatorKind kind : wanted) {
            if (family_of(kind) == Family::restricted && !cfg.restriction) {
                throw ConfigError(std::string(to_string(kind)) + " requires a stochastic restriction");
            }
        }
        SimReport report = simulate_smse(cfg);
        if (!wanted.empty()) {
            std::erase_if(report.rows, [&](const SimRow& r) {
                return std::find(wanted.begin(), wanted.end(), r.kind) == wanted.end();
            });
        }
        print_warnings(report.warnings);
        emit(render_smse(report.rows, simulation_metadata(report), format), sim_common.out);
        return 0;
    }

    if (analyze_cmd->parsed()) {
        const AnalysisConfig cfg = analysis_config(an, an_rf, an_common);
        const auto format = parse_output_format(an_common.format);
        const Dataset data = load(an);
        const AnalysisResult result = analyze(data, cfg);
        print_vif(result.prepared, data);
        print_warnings(result.prepared.warnings);
        emit(render_smse(result.rows, analysis_metadata(result, cfg, data.source), format), an_common.out);
        return 0;
    }

    const auto format = parse_output_format(dom_common.format);
    DominateConfig dcfg;
    dcfg.candidate = parse_estimator_kind(dom.candidate);
    dcfg.incumbent = parse_estimator_kind(dom.incumbent);
    dcfg.grid = cartesian_grid(parse_doubles(dom.k, "k"), parse_doubles(dom.d, "d"));
    dcfg.modes = parse_modes(dom.mode);
    dcfg.h = dom_sim.h;
    dcfg.optimal = parse_optimal_form(dom_common.optimal_form);

    nlohmann::json meta;
    meta["command"] = "dominate";
    meta["version"] = SHRINKEST_VERSION;
    meta["optimal_form"] = std::string(to_string(dcfg.optimal));
    std::array<ModeModels, 2> modes;
    if (data_opt->count() > 0) {
        dom_data.partition = dom_partition;
        AnalysisConfig acfg = analysis_config(dom_data, dom_rf, dom_common);
        const Dataset data = load(dom_data);
        PreparedData prepared = prepare_data(data, acfg);
        print_warnings(prepared.warnings);
        modes = prepared.modes;
        meta["data"] = data.source;
        meta["anchor"] = std::string(to_string(acfg.anchor));
    } else {
        SimFlags s = dom_sim;
        if (!dom_partition.empty()) s.partition = dom_partition;
        s.reps = 1;
        s.grid = 1;
        const SimConfig cfg = sim_config(s, dom_rf, dom_common);
        Replicate rep = draw_replicate(cfg, 0);
        modes = rep.modes;
        meta["simulated"] = {{"n", cfg.n}, {"alpha", cfg.alpha}, {"seed", cfg.seed}, {"replicate", 0},
                             {"generator", std::string(kGeneratorVersion)}};
        meta["anchor"] = "true coefficients";
    }
    emit(render_dominance(dominate(modes, dcfg), meta, format), dom_common.out);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(e.code());
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return static_cast<int>(ExitCode::numerical_failure);
    }
}
