#include <gtest/gtest.h>

#include <cmath>

#include "shrinkest/dominance.hpp"
#include "shrinkest/errors.hpp"
#include "shrinkest/optimal.hpp"
#include "support.hpp"

using namespace shrinkest;
using namespace testing_support;

namespace {

RiskContext unit_scalar() {
    RiskContext ctx;
    ctx.gamma = Eigen::VectorXd::Ones(1);
    ctx.tau = Eigen::MatrixXd::Ones(1, 1);
    ctx.A = Eigen::VectorXd::Zero(1);
    ctx.sigma2 = 1.0;
    ctx.lambda = Eigen::VectorXd::Ones(1);
    ctx.basis = Eigen::MatrixXd::Identity(1, 1);
    return ctx;
}

Eigen::MatrixXd scalar(double v) { return Eigen::MatrixXd::Constant(1, 1, v); }

}  // namespace

TEST(Dominance, SelfComparisonIsATie) {
    Rng rng(80);
    const RiskContext ctx = random_context(rng, Family::spectral, 3);
    const Eigen::MatrixXd G = gaussian(rng, 3, 3);
    const DominanceVerdict v = dominance_check(G, G, ctx);
    EXPECT_NEAR(v.precondition_eig, 1.0, 1e-10);
    EXPECT_FALSE(v.dominated);
    EXPECT_EQ(v.status, VerdictStatus::boundary);
}

TEST(Dominance, ScalarHandCase) {
    const DominanceVerdict v = dominance_check(scalar(0.5), scalar(1.0), unit_scalar());
    EXPECT_NEAR(v.precondition_eig, 0.25, 1e-15);
    EXPECT_NEAR(v.quadratic_form, 1.0 / 3.0, 1e-15);
    EXPECT_TRUE(v.dominated);
    EXPECT_EQ(v.status, VerdictStatus::dominated);
    ASSERT_TRUE(v.oracle_agrees.has_value());
    EXPECT_TRUE(*v.oracle_agrees);
}

TEST(Dominance, BoundaryQuadraticForm) {
    // G_cand = 0: D_diff = 1, b_cand = -1, b_inc = 0, so the quadratic form is exactly 1.
    const DominanceVerdict v = dominance_check(scalar(0.0), scalar(1.0), unit_scalar());
    EXPECT_NEAR(v.quadratic_form, 1.0, 1e-15);
    EXPECT_EQ(v.status, VerdictStatus::boundary);
    EXPECT_FALSE(v.dominated);
}

TEST(Dominance, ClassifyTolerance) {
    EXPECT_EQ(classify_verdict(0.5, 1.0 + 1e-12), VerdictStatus::boundary);
    EXPECT_EQ(classify_verdict(0.5, 1.0 - 1e-12), VerdictStatus::boundary);
    EXPECT_EQ(classify_verdict(0.5, 1.0 + 1e-6), VerdictStatus::not_dominated);
    EXPECT_EQ(classify_verdict(0.5, 0.9), VerdictStatus::dominated);
    EXPECT_EQ(classify_verdict(1.0 + 1e-12, 0.1), VerdictStatus::boundary);
    EXPECT_EQ(classify_verdict(1.5, 0.1), VerdictStatus::not_dominated);
    EXPECT_EQ(classify_verdict(0.5, std::nan("")), VerdictStatus::inconclusive);
    EXPECT_EQ(classify_verdict(std::nan(""), 0.1), VerdictStatus::inconclusive);
}

TEST(Dominance, SingularIncumbentIsInconclusive) {
    Rng rng(81);
    const RiskContext ctx = random_context(rng, Family::spectral, 3);
    const DominanceVerdict v = dominance_check(Eigen::MatrixXd::Identity(3, 3), Eigen::MatrixXd::Zero(3, 3), ctx);
    EXPECT_EQ(v.status, VerdictStatus::inconclusive);
    EXPECT_FALSE(v.dominated);
    EXPECT_FALSE(v.reason.empty());
}

TEST(Dominance, AgreesWithEigenvalueOracle) {
    Rng rng(82);
    int checked = 0;
    while (checked < 200) {
        const RiskContext ctx = random_context(rng, checked % 2 ? Family::spectral : Family::restricted);
        const Eigen::Index l = ctx.l();
        const Eigen::MatrixXd Gi = Eigen::MatrixXd::Identity(l, l) + 0.3 * gaussian(rng, l, l);
        const Eigen::MatrixXd Gc = uniform(rng, 0.2, 0.95) * Gi + 0.05 * gaussian(rng, l, l);
        const DominanceVerdict v = dominance_check(Gc, Gi, ctx);
        if (!(v.precondition_eig < 1.0 - kDominanceSlack)) continue;
        if (v.status == VerdictStatus::boundary) continue;
        const bool oracle = nnd_oracle(msem(Gi, ctx) - msem(Gc, ctx));
        EXPECT_EQ(v.dominated, oracle);
        ASSERT_TRUE(v.oracle_agrees.has_value());
        EXPECT_TRUE(*v.oracle_agrees);
        ++checked;
    }
}

TEST(NndOracle, BasicCases) {
    EXPECT_TRUE(nnd_oracle(Eigen::MatrixXd::Identity(3, 3)));
    EXPECT_FALSE(nnd_oracle(Eigen::Vector2d(1.0, -1.0).asDiagonal().toDenseMatrix()));
    EXPECT_TRUE(nnd_oracle(Eigen::MatrixXd::Zero(2, 2)));
    Eigen::Matrix2d asym;
    asym << 1, 2, 0, 1;
    EXPECT_THROW(nnd_oracle(asym), ConfigError);
}

TEST(NndOracle, OptimalBeatsOlseAtTrueTarget) {
    Rng rng(83);
    for (int trial = 0; trial < 100; ++trial) {
        const RiskContext ctx = random_context(rng, Family::spectral, 0, false);
        const Eigen::MatrixXd d =
            msem(Eigen::MatrixXd::Identity(ctx.l(), ctx.l()), ctx) - msem(optimal_shrinkage(ctx), ctx);
        EXPECT_TRUE(nnd_oracle(0.5 * (d + d.transpose())));
    }
}
