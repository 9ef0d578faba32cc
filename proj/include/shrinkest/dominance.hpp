#pragma once

/**
 * @file dominance.hpp
 * @brief Pairwise MSEM-superiority certificate for two shrinkage matrices
 *        acting on the same base estimator.
 *
 * With M = G_inc tau G_inc' and N = G_cand tau G_cand', the candidate beats the
 * incumbent in the MSEM order when
 *   (1) lambda_max(N M^-1) < 1                      (so sigma^2 (M - N) > 0), and
 *   (2) b_cand' (sigma^2 (M - N) + b_inc b_inc')^-1 b_cand <= 1,
 * where b = G (gamma + tau A) - gamma.
 */

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <string_view>

#include "shrinkest/risk.hpp"

namespace shrinkest {

/// Comparisons against 1 within this slack are reported as boundary.
inline constexpr double kDominanceSlack = 1e-10;

enum class VerdictStatus { dominated, not_dominated, boundary, inconclusive };

std::string_view to_string(VerdictStatus status);

struct DominanceVerdict {
    double precondition_eig = 0.0;  ///< lambda_max(N M^-1)
    double quadratic_form = 0.0;    ///< NaN when it cannot be evaluated
    bool dominated = false;         ///< true only for status == dominated
    VerdictStatus status = VerdictStatus::inconclusive;
    std::string reason;
    std::optional<bool> oracle_nnd;     ///< eigenvalue test on MSEM_inc - MSEM_cand
    std::optional<bool> oracle_agrees;  ///< set when the precondition holds and the verdict is decisive
};

/// Maps the two statistics to a verdict, with kDominanceSlack around 1.
VerdictStatus classify_verdict(double precondition_eig, double quadratic_form, std::string* reason = nullptr);

/// Does G_candidate dominate G_incumbent in the MSEM sense on this context?
DominanceVerdict dominance_check(const Eigen::MatrixXd& g_candidate, const Eigen::MatrixXd& g_incumbent,
                                 const RiskContext& ctx);

/// True iff the symmetric matrix is nonnegative definite:
/// lambda_min >= -1e-10 * max(1, |lambda|_max). Throws ConfigError when asymmetric.
bool nnd_oracle(const Eigen::MatrixXd& m);

}  // namespace shrinkest
