#include "shrinkest/dominance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "shrinkest/errors.hpp"

namespace shrinkest {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

Eigen::MatrixXd symmetrize(const Eigen::MatrixXd& m) { return 0.5 * (m + m.transpose()); }

}  // namespace

std::string_view to_string(VerdictStatus status) {
    switch (status) {
        case VerdictStatus::dominated: return "dominated";
        case VerdictStatus::not_dominated: return "not_dominated";
        case VerdictStatus::boundary: return "boundary";
        case VerdictStatus::inconclusive: return "inconclusive";
    }
    return "?";
}

bool nnd_oracle(const Eigen::MatrixXd& m) {
    if (m.rows() != m.cols()) throw ConfigError("nnd_oracle: matrix must be square");
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw ConfigError("nnd_oracle: matrix is not symmetric");
    }
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(symmetrize(m)).eigenvalues();
    const double biggest = eig.cwiseAbs().maxCoeff();
    return eig.minCoeff() >= -1e-10 * std::max(1.0, biggest);
}

VerdictStatus classify_verdict(double precondition_eig, double quadratic_form, std::string* reason) {
    auto say = [&](const char* text) {
        if (reason != nullptr) *reason = text;
    };
    if (std::isnan(precondition_eig)) {
        say("largest eigenvalue unavailable");
        return VerdictStatus::inconclusive;
    }
    if (precondition_eig > 1.0 + kDominanceSlack) {
        say("dispersion precondition fails (largest eigenvalue > 1)");
        return VerdictStatus::not_dominated;
    }
    if (std::abs(precondition_eig - 1.0) <= kDominanceSlack) {
        say("largest eigenvalue equals 1 within tolerance");
        return VerdictStatus::boundary;
    }
    if (std::isnan(quadratic_form)) {
        say("D_diff + b_inc b_inc' is singular with nonzero candidate bias");
        return VerdictStatus::inconclusive;
    }
    if (quadratic_form > 1.0 + kDominanceSlack) {
        say("quadratic form exceeds 1");
        return VerdictStatus::not_dominated;
    }
    if (std::abs(quadratic_form - 1.0) <= kDominanceSlack) {
        say("quadratic form equals 1 within tolerance");
        return VerdictStatus::boundary;
    }
    say("");
    return VerdictStatus::dominated;
}

DominanceVerdict dominance_check(const Eigen::MatrixXd& g_candidate, const Eigen::MatrixXd& g_incumbent,
                                 const RiskContext& ctx) {
    ctx.validate();
    const auto l = ctx.l();
    if (g_candidate.rows() != l || g_candidate.cols() != l || g_incumbent.rows() != l ||
        g_incumbent.cols() != l) {
        throw ConfigError("dominance_check: shrinkage matrices must be l x l");
    }

    DominanceVerdict v;
    v.precondition_eig = kNaN;
    v.quadratic_form = kNaN;

    const Eigen::MatrixXd msem_diff = msem(g_incumbent, ctx) - msem(g_candidate, ctx);
    v.oracle_nnd = nnd_oracle(symmetrize(msem_diff));

    const Eigen::MatrixXd M = symmetrize(g_incumbent * ctx.tau * g_incumbent.transpose());
    const Eigen::MatrixXd N = symmetrize(g_candidate * ctx.tau * g_candidate.transpose());

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> m_eig(M);
    const Eigen::VectorXd m_vals = m_eig.eigenvalues();
    if (!(m_vals.maxCoeff() > 0.0) || m_vals.minCoeff() <= 1e-12 * m_vals.maxCoeff()) {
        v.status = VerdictStatus::inconclusive;
        v.reason = "incumbent dispersion G tau G' is singular";
        return v;
    }

    // lambda_max(N M^-1) through the similar symmetric matrix M^-1/2 N M^-1/2.
    const Eigen::MatrixXd m_inv_sqrt =
        m_eig.eigenvectors() * m_vals.cwiseSqrt().cwiseInverse().asDiagonal() * m_eig.eigenvectors().transpose();
    const Eigen::MatrixXd K = symmetrize(m_inv_sqrt * N * m_inv_sqrt);
    v.precondition_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(K).eigenvalues().maxCoeff();

    const Eigen::VectorXd b_cand = bias(g_candidate, ctx);
    const Eigen::VectorXd b_inc = bias(g_incumbent, ctx);
    const Eigen::MatrixXd H = symmetrize(ctx.sigma2 * (M - N) + b_inc * b_inc.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> h_eig(H);
    const Eigen::VectorXd h_vals = h_eig.eigenvalues();
    const double h_scale = h_vals.cwiseAbs().maxCoeff();
    const bool h_singular = !(h_scale > 0.0) || h_vals.cwiseAbs().minCoeff() <= 1e-12 * h_scale;
    if (!h_singular) {
        const Eigen::VectorXd proj = h_eig.eigenvectors().transpose() * b_cand;
        v.quadratic_form = proj.cwiseProduct(proj).cwiseQuotient(h_vals).sum();
    } else if (b_cand.norm() == 0.0) {
        v.quadratic_form = 0.0;
    }

    const double pe = v.precondition_eig;
    v.status = classify_verdict(pe, v.quadratic_form, &v.reason);
    v.dominated = v.status == VerdictStatus::dominated;

    const bool decisive = v.status == VerdictStatus::dominated || v.status == VerdictStatus::not_dominated;
    if (pe < 1.0 - kDominanceSlack && decisive) v.oracle_agrees = (*v.oracle_nnd == v.dominated);
    return v;
}

}  // namespace shrinkest
