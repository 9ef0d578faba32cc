#include "shrinkest/optimal.hpp"

#include "shrinkest/errors.hpp"

namespace shrinkest {

namespace {

Eigen::MatrixXd curvature(const OptimalContext& ctx, const Eigen::VectorXd& a) {
    return ctx.sigma2 * ctx.tau + a * a.transpose();
}

Eigen::MatrixXd cross_term(const OptimalContext& ctx, const Eigen::VectorXd& a, OptimalForm form) {
    if (form == OptimalForm::exact) return ctx.gamma * a.transpose();
    return 0.5 * (a * ctx.gamma.transpose() + ctx.gamma * a.transpose());
}

}  // namespace

Eigen::MatrixXd smse_gradient(const Eigen::MatrixXd& G, const OptimalContext& ctx, OptimalForm form) {
    const Eigen::VectorXd a = ctx.shifted();
    return 2.0 * G * curvature(ctx, a) - 2.0 * cross_term(ctx, a, form);
}

Eigen::MatrixXd optimal_shrinkage(const OptimalContext& ctx, OptimalForm form) {
    ctx.validate();
    const Eigen::VectorXd a = ctx.shifted();
    const Eigen::MatrixXd S = curvature(ctx, a);
    const Eigen::MatrixXd N = cross_term(ctx, a, form);
    // G = N S^-1  <=>  G' = S^-1 N'
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) throw NumericalError("sigma^2 tau + a a' is not positive definite");
    return llt.solve(N.transpose()).transpose();
}

CoefficientEstimate sioe(const CanonicalModel& cm, const Eigen::VectorXd& anchor, OptimalForm form) {
    if (anchor.size() != cm.l()) throw ConfigError("SIOE anchor must have length l");
    const RiskContext ctx = spectral_context(cm, cm.T.transpose() * anchor);
    CoefficientEstimate out;
    out.spec.kind = EstimatorKind::SIOE;
    out.gamma_hat = optimal_shrinkage(ctx, form) * ols(cm);
    out.beta_hat = cm.T * out.gamma_hat;
    return out;
}

CoefficientEstimate sroe(const RestrictedCanonicalModel& rcm, const Eigen::VectorXd& anchor,
                         OptimalForm form, MreConvention convention) {
    if (anchor.size() != rcm.l()) throw ConfigError("SROE anchor must have length l");
    const RiskContext ctx = restricted_context(rcm, rcm.B.partialPivLu().solve(anchor));
    CoefficientEstimate out;
    out.spec.kind = EstimatorKind::SROE;
    out.gamma_hat = optimal_shrinkage(ctx, form) * mre(rcm, convention);
    out.beta_hat = rcm.B * out.gamma_hat;
    return out;
}

Anchor newhouse_oman_anchor(const Eigen::MatrixXd& X) {
    if (X.cols() < 1) throw ConfigError("anchor needs at least one regressor");
    const SymmetricEigen eig = symmetric_eigen(X.transpose() * X);
    Anchor out;
    out.beta = eig.vectors.col(0).normalized();
    if (eig.values.size() > 1 && eig.values(1) >= eig.values(0) * (1.0 - 1e-10)) {
        out.warning = "largest eigenvalue of X'X is repeated; anchor is not unique";
    }
    return out;
}

Eigen::MatrixXd effective_shrinkage(const EstimatorSpec& spec, const RiskContext& ctx, OptimalForm form) {
    if (family_of(spec.kind) != ctx.mode) {
        throw ConfigError(std::string(to_string(spec.kind)) + " does not belong to the context's family");
    }
    switch (spec.kind) {
        case EstimatorKind::OLSE:
        case EstimatorKind::MRE:
            return Eigen::MatrixXd::Identity(ctx.l(), ctx.l());
        case EstimatorKind::SIOE:
        case EstimatorKind::SROE:
            return optimal_shrinkage(ctx, form);
        default:
            return shrinkage_matrix(spec, ctx);
    }
}

}  // namespace shrinkest
