#pragma once

/**
 * @file risk.hpp
 * @brief Bias, dispersion and mean square error matrix of any linear shrinkage
 *        estimator G * base in the common form
 *
 *     bias = G (gamma + tau A) - gamma
 *     D    = sigma^2 G tau G'
 *     MSEM = D + bias bias'
 *
 * with tau = Lambda^-1, A = Z'delta for the spectral family and
 * tau = (I + sigma^2 Lambda*)^-1, A = Z*'delta + R*'W^-1 g for the restricted one.
 */

#include <Eigen/Dense>

#include "shrinkest/canon.hpp"
#include "shrinkest/estimators.hpp"

namespace shrinkest {

struct RiskContext {
    Eigen::VectorXd gamma;   ///< coefficient vector the risk is measured against
    Eigen::MatrixXd tau;     ///< symmetric positive definite, l x l
    Eigen::VectorXd A;       ///< misspecification vector
    double sigma2 = 1.0;
    Family mode = Family::spectral;
    Eigen::VectorXd lambda;  ///< Lambda (spectral) or Lambda* (restricted)
    Eigen::MatrixXd basis;   ///< T, supplies T_h for the principal-component kinds

    Eigen::Index l() const { return gamma.size(); }
    /// gamma + tau A, the expectation of the base estimator.
    Eigen::VectorXd shifted() const { return gamma + tau * A; }
    /// Throws ConfigError when sizes disagree or tau is not symmetric positive definite.
    void validate() const;
};

struct RiskReport {
    Eigen::VectorXd bias;
    Eigen::MatrixXd dispersion;
    Eigen::MatrixXd msem;
    double smse = 0.0;
};

/// Context for the spectral family; gamma defaults to cm.gamma.
RiskContext spectral_context(const CanonicalModel& cm);
RiskContext spectral_context(const CanonicalModel& cm, const Eigen::VectorXd& gamma);
/// Context for the restricted family; gamma defaults to rcm.gamma_star.
RiskContext restricted_context(const RestrictedCanonicalModel& rcm);
RiskContext restricted_context(const RestrictedCanonicalModel& rcm, const Eigen::VectorXd& gamma_star);

Eigen::VectorXd bias(const Eigen::MatrixXd& G, const RiskContext& ctx);
Eigen::MatrixXd dispersion(const Eigen::MatrixXd& G, const RiskContext& ctx);
Eigen::MatrixXd msem(const Eigen::MatrixXd& G, const RiskContext& ctx);
double smse(const Eigen::MatrixXd& G, const RiskContext& ctx);
RiskReport risk_report(const Eigen::MatrixXd& G, const RiskContext& ctx);

/// Shrinkage matrix of a named estimator built from the context's lambda and basis.
Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const RiskContext& ctx);

/// Per-estimator closed forms, written out term by term rather than through G.
/// Accepts OLSE/MRE and the fourteen named shrinkage estimators; throws
/// ConfigError("no closed form; use generic path") for SIOE/SROE.
RiskReport closed_form_risk(const EstimatorSpec& spec, const RiskContext& ctx);

}  // namespace shrinkest
