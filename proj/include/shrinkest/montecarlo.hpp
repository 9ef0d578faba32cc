#pragma once

/**
 * @file montecarlo.hpp
 * @brief Simulation study over McDonald-Galarneau designs.
 *
 * Regressors: x_ij = sqrt(1 - alpha^2) z_ij + alpha z_i6, j = 1..5, so any two
 * columns have population correlation alpha^2. The true beta is the unit
 * eigenvector of X'X for the largest eigenvalue and y = X beta + eps, eps ~ N(0, 1).
 *
 * Every replicate is evaluated twice: "correct" keeps all five regressors,
 * "misspecified" keeps the configured subset and folds the rest into
 * delta = X2 beta2. Replicate r draws from RandomStream(seed, r), and results are
 * reduced in replicate order, so the report does not depend on the thread count.
 */

#include <Eigen/Dense>
#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkest/canon.hpp"
#include "shrinkest/conventions.hpp"
#include "shrinkest/estimators.hpp"
#include "shrinkest/rng.hpp"
#include "shrinkest/risk.hpp"

namespace shrinkest {

inline constexpr Eigen::Index kSimRegressors = 5;

enum class XMode { regenerate, fixed };
enum class Aggregation { analytic, empirical };
enum class ModelMode { correct, misspecified };

std::string_view to_string(XMode m);
std::string_view to_string(Aggregation a);
std::string_view to_string(ModelMode m);
XMode parse_x_mode(std::string_view s);
Aggregation parse_aggregation(std::string_view s);
ModelMode parse_model_mode(std::string_view s);

struct GridPoint {
    double k = 0.0;
    double d = 0.0;
};

/// t_i = i / points for i = 1..points, used for both k and d.
std::vector<GridPoint> shared_grid(int points);
/// Every (k, d) pair.
std::vector<GridPoint> cartesian_grid(const std::vector<double>& k_values, const std::vector<double>& d_values);

struct SimConfig {
    Eigen::Index n = 50;
    double alpha = 0.9;
    int reps = 2000;
    std::uint64_t seed = 20240101;
    std::vector<Eigen::Index> retained{0, 1, 2};  ///< zero-based columns kept in misspecified mode
    std::vector<Eigen::Index> excluded{3, 4};
    /// R (q x 5), g (q) and W (q x q) over all five regressors; r is generated per replicate.
    std::optional<RestrictionSpec> restriction;
    std::vector<GridPoint> grid = shared_grid(50);
    XMode x_mode = XMode::regenerate;
    Aggregation aggregation = Aggregation::analytic;
    std::optional<Eigen::Index> h;  ///< unset: eigenvalues above their mean
    double noise_variance = 1.0;
    unsigned threads = 1;
    OptimalForm optimal = OptimalForm::exact;
    MreConvention mre = MreConvention::paper;

    /// Throws ConfigError for an invalid partition, alpha, reps, grid or restriction.
    void validate() const;
};

/// The restriction used in the published design: R = (1,1,1,1,1), g = 0, W = I.
RestrictionSpec default_sim_restriction();

struct SimRow {
    EstimatorKind kind = EstimatorKind::OLSE;
    double k = 0.0;
    double d = 0.0;
    ModelMode mode = ModelMode::correct;
    double mean_smse = 0.0;
    double std_error = 0.0;
};

struct SimReport {
    std::vector<SimRow> rows;
    SimConfig config;
    std::string version;
    int redraws = 0;
    std::vector<std::string> warnings;
};

Eigen::MatrixXd generate_design(Eigen::Index n, double alpha, RandomStream& stream);

/// y = X beta + noise_sd * eps with eps standard normal; noise_sd = 0 gives X beta exactly.
Eigen::VectorXd generate_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, RandomStream& stream,
                                  double noise_sd = 1.0);

/// Canonical models and risk contexts of one replicate under one mode.
struct ModeModels {
    ModelMode mode = ModelMode::correct;
    CanonicalModel cm;
    std::optional<RestrictedCanonicalModel> rcm;
    RiskContext spectral;
    std::optional<RiskContext> restricted;
    Eigen::Index h = 1;
};

struct Replicate {
    Eigen::MatrixXd X;
    Eigen::VectorXd beta;
    Eigen::VectorXd y;
    std::array<ModeModels, 2> modes;  ///< correct, misspecified
    int redraws = 0;
};

/// Regenerates replicate `index` exactly as simulate_smse sees it.
Replicate draw_replicate(const SimConfig& config, std::uint64_t index);

SimReport simulate_smse(const SimConfig& config);

struct EmpiricalComparison {
    Eigen::MatrixXd empirical;  ///< mean of (gamma_hat - gamma)(gamma_hat - gamma)'
    Eigen::MatrixXd analytic;   ///< MSEM from the common-form risk engine
    int reps = 0;
};

/// Fixed-design check of an estimator's MSEM against replicate averages.
/// Requires x_mode == fixed.
EmpiricalComparison empirical_msem(const SimConfig& config, const EstimatorSpec& spec, ModelMode mode);

}  // namespace shrinkest
