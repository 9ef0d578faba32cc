#pragma once

/**
 * @file optimal.hpp
 * @brief The SMSE-optimal shrinkage matrix and the SIOE/SROE estimators built on it.
 *
 * SMSE(G) = sigma^2 tr(G tau G') + (G a - gamma)'(G a - gamma),  a = gamma + tau A.
 * The exact minimizer is G_opt = gamma a' S^-1 with S = sigma^2 tau + a a'.
 */

#include <Eigen/Dense>
#include <optional>
#include <string>

#include "shrinkest/canon.hpp"
#include "shrinkest/conventions.hpp"
#include "shrinkest/estimators.hpp"
#include "shrinkest/risk.hpp"

namespace shrinkest {

using OptimalContext = RiskContext;

/// Derivative of SMSE with respect to G.
///   exact:     2 G S - 2 gamma a'
///   symmetric: 2 G S - a gamma' - gamma a'
Eigen::MatrixXd smse_gradient(const Eigen::MatrixXd& G, const OptimalContext& ctx,
                              OptimalForm form = OptimalForm::exact);

/// Zero of smse_gradient for the chosen form. S is factored with Cholesky, never inverted.
Eigen::MatrixXd optimal_shrinkage(const OptimalContext& ctx,
                                  OptimalForm form = OptimalForm::exact);

/// G_opt * OLSE with tau = Lambda^-1, A = Z'delta, gamma = T' anchor.
CoefficientEstimate sioe(const CanonicalModel& cm, const Eigen::VectorXd& anchor,
                         OptimalForm form = OptimalForm::exact);

/// G*_opt * MRE with tau = (I + sigma^2 Lambda*)^-1, A = Z*'delta + R*'W^-1 g, gamma* = B^-1 anchor.
CoefficientEstimate sroe(const RestrictedCanonicalModel& rcm, const Eigen::VectorXd& anchor,
                         OptimalForm form = OptimalForm::exact,
                         MreConvention convention = MreConvention::paper);

struct Anchor {
    Eigen::VectorXd beta;            ///< unit length
    std::optional<std::string> warning;  ///< set when the leading eigenvalue is repeated
};

/// Unit eigenvector of X'X for its largest eigenvalue (Newhouse-Oman choice of beta).
Anchor newhouse_oman_anchor(const Eigen::MatrixXd& X);

/// The matrix an estimator applies to its base: identity for OLSE/MRE, G_opt for
/// SIOE/SROE, the named shrinkage matrix otherwise.
Eigen::MatrixXd effective_shrinkage(const EstimatorSpec& spec, const RiskContext& ctx,
                                    OptimalForm form = OptimalForm::exact);

}  // namespace shrinkest
