#include "shrinkest/risk.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "shrinkest/errors.hpp"

namespace shrinkest {

void RiskContext::validate() const {
    const auto l = gamma.size();
    if (l < 1) throw ConfigError("risk context needs a non-empty coefficient vector");
    if (tau.rows() != l || tau.cols() != l) throw ConfigError("tau must be l x l");
    if (A.size() != l) throw ConfigError("A must have length l");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
    const double scale = std::max(1.0, tau.cwiseAbs().maxCoeff());
    if ((tau - tau.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
        throw ConfigError("tau must be symmetric");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(tau);
    if (llt.info() != Eigen::Success) throw ConfigError("tau must be positive definite");
}

RiskContext spectral_context(const CanonicalModel& cm) { return spectral_context(cm, cm.gamma); }

RiskContext spectral_context(const CanonicalModel& cm, const Eigen::VectorXd& gamma) {
    if (gamma.size() != cm.l()) throw ConfigError("anchor length does not match l");
    RiskContext ctx;
    ctx.gamma = gamma;
    ctx.tau = cm.lambda.cwiseInverse().asDiagonal();
    ctx.A = cm.Z.transpose() * cm.delta;
    ctx.sigma2 = cm.sigma2;
    ctx.mode = Family::spectral;
    ctx.lambda = cm.lambda;
    ctx.basis = cm.T;
    return ctx;
}

RiskContext restricted_context(const RestrictedCanonicalModel& rcm) {
    return restricted_context(rcm, rcm.gamma_star);
}

RiskContext restricted_context(const RestrictedCanonicalModel& rcm, const Eigen::VectorXd& gamma_star) {
    if (gamma_star.size() != rcm.l()) throw ConfigError("anchor length does not match l");
    const RestrictionSpec& rs = rcm.restriction;
    const Eigen::MatrixXd w_inv = rs.W.llt().solve(Eigen::MatrixXd::Identity(rs.q(), rs.q()));

    RiskContext ctx;
    ctx.gamma = gamma_star;
    ctx.tau = (1.0 + rcm.sigma2 * rcm.lambda_star.array()).inverse().matrix().asDiagonal();
    ctx.A = rcm.Zstar.transpose() * rcm.delta + rcm.Rstar.transpose() * (w_inv * rs.g);
    ctx.sigma2 = rcm.sigma2;
    ctx.mode = Family::restricted;
    ctx.lambda = rcm.lambda_star;
    ctx.basis = rcm.T;
    return ctx;
}

Eigen::VectorXd bias(const Eigen::MatrixXd& G, const RiskContext& ctx) {
    return G * ctx.shifted() - ctx.gamma;
}

Eigen::MatrixXd dispersion(const Eigen::MatrixXd& G, const RiskContext& ctx) {
    const Eigen::MatrixXd d = ctx.sigma2 * G * ctx.tau * G.transpose();
    return 0.5 * (d + d.transpose());
}

Eigen::MatrixXd msem(const Eigen::MatrixXd& G, const RiskContext& ctx) {
    const Eigen::VectorXd b = bias(G, ctx);
    return dispersion(G, ctx) + b * b.transpose();
}

double smse(const Eigen::MatrixXd& G, const RiskContext& ctx) {
    const double spread = ctx.sigma2 * (G * ctx.tau).cwiseProduct(G).sum();  // tr(G tau G')
    return spread + bias(G, ctx).squaredNorm();
}

RiskReport risk_report(const Eigen::MatrixXd& G, const RiskContext& ctx) {
    RiskReport out;
    out.bias = bias(G, ctx);
    out.dispersion = dispersion(G, ctx);
    out.msem = out.dispersion + out.bias * out.bias.transpose();
    out.smse = out.msem.trace();
    return out;
}

Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const RiskContext& ctx) {
    if (family_of(spec.kind) != ctx.mode) {
        throw ConfigError(std::string(to_string(spec.kind)) + " does not belong to the context's family");
    }
    return shrinkage_matrix(spec, ctx.lambda, ctx.basis);
}

namespace {

RiskReport make_report(Eigen::VectorXd b, Eigen::MatrixXd d, Eigen::MatrixXd m) {
    RiskReport out;
    out.bias = std::move(b);
    out.dispersion = std::move(d);
    out.msem = std::move(m);
    out.smse = out.msem.trace();
    return out;
}

// Table of stochastic properties for the spectral family, term by term.
RiskReport spectral_closed_form(const EstimatorSpec& spec, const RiskContext& ctx) {
    const auto l = ctx.l();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(l, l);
    const Eigen::MatrixXd Lam = ctx.lambda.asDiagonal();
    const Eigen::MatrixXd& tau = ctx.tau;
    const Eigen::VectorXd& g = ctx.gamma;
    const Eigen::VectorXd& A = ctx.A;
    const double s2 = ctx.sigma2;

    auto inv = [](const Eigen::MatrixXd& m) -> Eigen::MatrixXd { return m.inverse(); };
    auto outer = [](const Eigen::VectorXd& v) -> Eigen::MatrixXd { return v * v.transpose(); };

    switch (spec.kind) {
        case EstimatorKind::OLSE: {
            const Eigen::VectorXd b = tau * A;
            const Eigen::MatrixXd d = s2 * tau;
            return make_report(b, d, s2 * tau + outer(tau * A));
        }
        case EstimatorKind::RE: {
            const double k = *spec.k;
            const Eigen::MatrixXd Lk_inv = inv(Lam + k * I);
            const Eigen::VectorXd c = A - k * g;
            return make_report(Lk_inv * c, s2 * Lk_inv * Lk_inv * Lam,
                               Lk_inv * (s2 * Lam + outer(c)) * Lk_inv);
        }
        case EstimatorKind::AURE: {
            const double k = *spec.k;
            const Eigen::MatrixXd Lk_inv2 = inv(Lam + k * I) * inv(Lam + k * I);
            const Eigen::MatrixXd L2k = Lam + 2.0 * k * I;
            const Eigen::VectorXd c = L2k * A - k * k * g;
            return make_report(Lk_inv2 * c, s2 * Lk_inv2 * Lk_inv2 * L2k * L2k * Lam,
                               Lk_inv2 * (s2 * L2k * L2k * Lam + outer(c)) * Lk_inv2);
        }
        case EstimatorKind::LE: {
            const double d = *spec.d;
            const Eigen::MatrixXd L1_inv = inv(Lam + I);
            const Eigen::MatrixXd Ld = Lam + d * I;
            const Eigen::VectorXd c = (I + d * tau) * A - (1.0 - d) * g;
            return make_report(L1_inv * c, s2 * L1_inv * L1_inv * Ld * Ld * tau,
                               L1_inv * (s2 * Ld * Ld * tau + outer(c)) * L1_inv);
        }
        case EstimatorKind::AULE: {
            const double d = *spec.d;
            const Eigen::MatrixXd L1_inv2 = inv(Lam + I) * inv(Lam + I);
            const Eigen::MatrixXd Ld = Lam + d * I;
            const Eigen::MatrixXd L2d = Lam + (2.0 - d) * I;
            const Eigen::VectorXd c = L2d * (I + d * tau) * A - (1.0 - d) * (1.0 - d) * g;
            return make_report(L1_inv2 * c, s2 * L1_inv2 * L1_inv2 * Ld * Ld * L2d * L2d * tau,
                               L1_inv2 * (s2 * Ld * Ld * L2d * L2d * tau + outer(c)) * L1_inv2);
        }
        case EstimatorKind::PCRE: {
            const Eigen::MatrixXd Th = ctx.basis.leftCols(*spec.h);
            const Eigen::MatrixXd P = Th * Th.transpose();
            const Eigen::VectorXd b = (P - I) * g + P * tau * A;
            const Eigen::MatrixXd D = s2 * P * tau * P;
            return make_report(b, D, D + outer(b));
        }
        case EstimatorKind::RK: {
            const double k = *spec.k;
            const Eigen::MatrixXd Th = ctx.basis.leftCols(*spec.h);
            const Eigen::MatrixXd P = Th * Th.transpose();
            const Eigen::MatrixXd Lk_inv = inv(Lam + k * I);
            const Eigen::VectorXd b = (P * Lk_inv * Lam - I) * g + P * Lk_inv * A;
            const Eigen::MatrixXd D = s2 * P * Lk_inv * Lk_inv * Lam * P;
            return make_report(b, D, D + outer(b));
        }
        case EstimatorKind::RD: {
            const double d = *spec.d;
            const Eigen::MatrixXd Th = ctx.basis.leftCols(*spec.h);
            const Eigen::MatrixXd P = Th * Th.transpose();
            const Eigen::MatrixXd L1_inv = inv(Lam + I);
            const Eigen::MatrixXd Ld = Lam + d * I;
            const Eigen::VectorXd b = (P * L1_inv * Ld - I) * g + P * L1_inv * (I + d * tau) * A;
            const Eigen::MatrixXd D = s2 * P * L1_inv * L1_inv * Ld * Ld * tau * P;
            return make_report(b, D, D + outer(b));
        }
        default:
            break;
    }
    throw ConfigError("no closed form for " + std::string(to_string(spec.kind)));
}

// Table of stochastic properties for the restricted family, term by term.
RiskReport restricted_closed_form(const EstimatorSpec& spec, const RiskContext& ctx) {
    const auto l = ctx.l();
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(l, l);
    const Eigen::MatrixXd& tau = ctx.tau;
    const Eigen::VectorXd& g = ctx.gamma;
    const Eigen::VectorXd tA = tau * ctx.A;
    const double s2 = ctx.sigma2;
    auto outer = [](const Eigen::VectorXd& v) -> Eigen::MatrixXd { return v * v.transpose(); };
    auto proj = [&]() -> Eigen::MatrixXd {
        const Eigen::MatrixXd Th = ctx.basis.leftCols(*spec.h);
        return Th * Th.transpose();
    };

    switch (spec.kind) {
        case EstimatorKind::MRE:
            return make_report(tA, s2 * tau, s2 * tau + outer(tA));
        case EstimatorKind::SRRE: {
            const double k = *spec.k;
            const double a = 1.0 / (1.0 + k);
            const Eigen::VectorXd c = tA - k * g;
            return make_report(a * c, a * a * s2 * tau, a * a * (s2 * tau + outer(c)));
        }
        case EstimatorKind::SRAURE: {
            const double k = *spec.k;
            const double a = 1.0 / ((1.0 + k) * (1.0 + k));
            const double w = 1.0 + 2.0 * k;
            const Eigen::VectorXd c = w * tA - k * k * g;
            return make_report(a * c, a * a * w * w * s2 * tau, a * a * (w * w * s2 * tau + outer(c)));
        }
        case EstimatorKind::SRLE: {
            const double d = *spec.d;
            const Eigen::VectorXd c = (1.0 + d) * tA - (1.0 - d) * g;
            return make_report(0.5 * c, 0.25 * (1.0 + d) * (1.0 + d) * s2 * tau,
                               0.25 * ((1.0 + d) * (1.0 + d) * s2 * tau + outer(c)));
        }
        case EstimatorKind::SRAULE: {
            const double d = *spec.d;
            const double w = (1.0 + d) * (3.0 - d);
            const Eigen::VectorXd c = w * tA - (1.0 - d) * (1.0 - d) * g;
            return make_report(0.25 * c, w * w * s2 * tau / 16.0,
                               (w * w * s2 * tau + outer(c)) / 16.0);
        }
        case EstimatorKind::SRPCRE: {
            const Eigen::MatrixXd P = proj();
            const Eigen::VectorXd b = (P - I) * g + P * tA;
            const Eigen::MatrixXd D = s2 * P * tau * P;
            return make_report(b, D, D + outer(b));
        }
        case EstimatorKind::SRRK: {
            const double k = *spec.k;
            const double a = 1.0 / (1.0 + k);
            const Eigen::MatrixXd P = proj();
            const Eigen::VectorXd c = (P - (1.0 + k) * I) * g + P * tA;
            const Eigen::MatrixXd PtP = s2 * P * tau * P;
            return make_report(a * c, a * a * PtP, a * a * (PtP + outer(c)));
        }
        case EstimatorKind::SRRD: {
            const double d = *spec.d;
            const double a = 0.5 * (1.0 + d);
            const Eigen::MatrixXd P = proj();
            const Eigen::VectorXd c = (P - (2.0 / (1.0 + d)) * I) * g + P * tA;
            const Eigen::MatrixXd PtP = s2 * P * tau * P;
            return make_report(a * c, a * a * PtP, a * a * (PtP + outer(c)));
        }
        default:
            break;
    }
    throw ConfigError("no closed form for " + std::string(to_string(spec.kind)));
}

}  // namespace

RiskReport closed_form_risk(const EstimatorSpec& spec, const RiskContext& ctx) {
    if (spec.kind == EstimatorKind::SIOE || spec.kind == EstimatorKind::SROE) {
        throw ConfigError("no closed form; use generic path");
    }
    if (family_of(spec.kind) != ctx.mode) {
        throw ConfigError(std::string(to_string(spec.kind)) + " does not belong to the context's family");
    }
    spec.validate(ctx.l());
    return ctx.mode == Family::spectral ? spectral_closed_form(spec, ctx)
                                        : restricted_closed_form(spec, ctx);
}

}  // namespace shrinkest
