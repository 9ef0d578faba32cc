#pragma once

/**
 * @file analysis.hpp
 * @brief Real-data SMSE comparison and pairwise dominance tables.
 *
 * The regressors are standardized to correlation form and the response centered.
 * sigma^2 and the excluded coefficients beta2 are plug-ins from the full-model
 * least-squares fit (sigma^2 = RSS / (n - m)). The coefficient vector the risk is
 * measured against is the anchor: the Newhouse-Oman eigenvector by default.
 */

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "shrinkest/conventions.hpp"
#include "shrinkest/dataset.hpp"
#include "shrinkest/dominance.hpp"
#include "shrinkest/estimators.hpp"
#include "shrinkest/montecarlo.hpp"

namespace shrinkest {

enum class AnchorSource { newhouse_oman, ols };

std::string_view to_string(AnchorSource a);
AnchorSource parse_anchor_source(std::string_view s);

struct AnalysisConfig {
    std::vector<Eigen::Index> retained;  ///< zero-based regressor columns; empty: all but the last
    std::vector<Eigen::Index> excluded;
    std::optional<Eigen::MatrixXd> R;   ///< q x m over all regressors; enables the restricted family
    std::optional<Eigen::VectorXd> g;   ///< default zero
    std::optional<Eigen::VectorXd> r;   ///< default R beta_full
    std::optional<Eigen::MatrixXd> W;   ///< default identity
    std::vector<GridPoint> grid = shared_grid(50);
    std::vector<EstimatorKind> estimators;  ///< empty: every kind the restriction allows
    std::optional<Eigen::Index> h;
    AnchorSource anchor = AnchorSource::newhouse_oman;
    OptimalForm optimal = OptimalForm::exact;
    MreConvention mre = MreConvention::paper;
};

/// Both modes of a fitted dataset plus the plug-in quantities used to build them.
struct PreparedData {
    std::array<ModeModels, 2> modes;  ///< correct, misspecified
    Eigen::VectorXd vif;
    Eigen::VectorXd beta_full;        ///< least squares on standardized data
    double sigma2 = 1.0;
    std::vector<std::string> warnings;
};

PreparedData prepare_data(const Dataset& data, const AnalysisConfig& config);

struct AnalysisResult {
    PreparedData prepared;
    std::vector<SimRow> rows;  ///< std_error is 0: no replication
};

/// SMSE of every estimator in both modes at every grid point.
AnalysisResult analyze(const Dataset& data, const AnalysisConfig& config);

struct DominateConfig {
    EstimatorKind candidate = EstimatorKind::SIOE;
    EstimatorKind incumbent = EstimatorKind::OLSE;
    std::vector<GridPoint> grid{{0.5, 0.5}};
    std::optional<Eigen::Index> h;
    std::vector<ModelMode> modes{ModelMode::correct, ModelMode::misspecified};
    OptimalForm optimal = OptimalForm::exact;
};

struct DominanceRow {
    EstimatorKind candidate = EstimatorKind::SIOE;
    EstimatorKind incumbent = EstimatorKind::OLSE;
    double k = 0.0;
    double d = 0.0;
    ModelMode mode = ModelMode::correct;
    DominanceVerdict verdict;
};

/// One verdict per (mode, grid point). Candidate and incumbent must share a family.
std::vector<DominanceRow> dominate(const std::array<ModeModels, 2>& modes, const DominateConfig& config);

}  // namespace shrinkest
