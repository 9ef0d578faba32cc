#pragma once

/**
 * @file estimators.hpp
 * @brief Shrinkage estimators written as G * base, where base is the OLSE in
 *        spectral coordinates or the mixed regression estimator (MRE) in
 *        simultaneous coordinates.
 */

#include <Eigen/Dense>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "shrinkest/canon.hpp"
#include "shrinkest/conventions.hpp"

namespace shrinkest {

enum class EstimatorKind {
    OLSE, RE, AURE, LE, AULE, PCRE, RK, RD,
    MRE, SRRE, SRAURE, SRLE, SRAULE, SRPCRE, SRRK, SRRD,
    SIOE, SROE,
};

/// Which canonical coordinates an estimator lives in.
enum class Family { spectral, restricted };

std::string_view to_string(EstimatorKind kind);
/// Case-insensitive; accepts "rk"/"r-k" style aliases. Throws ConfigError on unknown names.
EstimatorKind parse_estimator_kind(std::string_view name);

Family family_of(EstimatorKind kind);
bool needs_k(EstimatorKind kind);
bool needs_d(EstimatorKind kind);
bool needs_h(EstimatorKind kind);
/// OLSE/MRE/SIOE/SROE have no shrinkage-matrix form of their own.
bool has_shrinkage_matrix(EstimatorKind kind);

/// The OLSE family in display order, followed by SIOE.
std::span<const EstimatorKind> spectral_kinds();
/// MRE and the stochastic-restricted family, followed by SROE.
std::span<const EstimatorKind> restricted_kinds();

struct EstimatorSpec {
    EstimatorKind kind = EstimatorKind::OLSE;
    std::optional<double> k;         ///< ridge parameter, k > 0
    std::optional<double> d;         ///< Liu parameter, 0 < d <= 1
    std::optional<Eigen::Index> h;   ///< retained components, 1 <= h <= l

    /// Throws ConfigError when a required parameter is missing or out of range.
    void validate(Eigen::Index l) const;
};

struct CoefficientEstimate {
    Eigen::VectorXd gamma_hat;  ///< canonical coordinates
    Eigen::VectorXd beta_hat;   ///< T gamma_hat or B gamma_hat
    EstimatorSpec spec;
};

/// Lambda^-1 Z'y.
Eigen::VectorXd ols(const CanonicalModel& cm);

Eigen::VectorXd mre(const RestrictedCanonicalModel& rcm,
                    MreConvention convention = MreConvention::paper);

/// G for the spectral family or G* for the restricted family. `lambda` is only
/// read for spectral kinds; `basis` supplies the T_h projector.
Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& basis);
Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const CanonicalModel& cm);
Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const RestrictedCanonicalModel& rcm);

/// Default number of retained components: eigenvalues strictly above their mean.
Eigen::Index default_components(const Eigen::VectorXd& lambda);

struct EstimateOptions {
    MreConvention mre = MreConvention::paper;
    OptimalForm optimal = OptimalForm::exact;
};

/// Computes any estimator. Restricted kinds need `rcm`; SIOE/SROE need `anchor`
/// (a beta1 surrogate of length l in original coordinates).
CoefficientEstimate estimate(const EstimatorSpec& spec, const CanonicalModel& cm,
                             const RestrictedCanonicalModel* rcm = nullptr,
                             const Eigen::VectorXd* anchor = nullptr,
                             const EstimateOptions& options = {});

}  // namespace shrinkest
