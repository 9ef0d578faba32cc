#include <gtest/gtest.h>

#include "shrinkest/errors.hpp"
#include "shrinkest/estimators.hpp"
#include "shrinkest/optimal.hpp"
#include "support.hpp"

using namespace shrinkest;
using namespace testing_support;

namespace {

Eigen::VectorXd least_squares(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    return X.householderQr().solve(y);
}

// Weighted stacked regression of y on X1 and r on R with Cov(r) proportional to W.
Eigen::VectorXd stacked_gls(const Eigen::MatrixXd& x1, const Eigen::VectorXd& y, const RestrictionSpec& rs) {
    const Eigen::MatrixXd L = rs.W.llt().matrixL();
    const Eigen::MatrixXd Rw = L.triangularView<Eigen::Lower>().solve(rs.R);
    const Eigen::VectorXd rw = L.triangularView<Eigen::Lower>().solve(rs.r);
    Eigen::MatrixXd A(x1.rows() + Rw.rows(), x1.cols());
    A << x1, Rw;
    Eigen::VectorXd b(y.size() + rw.size());
    b << y, rw;
    return least_squares(A, b);
}

EstimatorSpec make(EstimatorKind kind, std::optional<double> k = {}, std::optional<double> d = {},
                   std::optional<Eigen::Index> h = {}) {
    EstimatorSpec s;
    s.kind = kind;
    s.k = k;
    s.d = d;
    s.h = h;
    return s;
}

}  // namespace

TEST(Names, RoundTripAndAliases) {
    for (EstimatorKind kind : spectral_kinds()) EXPECT_EQ(parse_estimator_kind(to_string(kind)), kind);
    for (EstimatorKind kind : restricted_kinds()) EXPECT_EQ(parse_estimator_kind(to_string(kind)), kind);
    EXPECT_EQ(parse_estimator_kind("r-k"), EstimatorKind::RK);
    EXPECT_EQ(parse_estimator_kind("SRrd"), EstimatorKind::SRRD);
    EXPECT_EQ(parse_estimator_kind("sioe"), EstimatorKind::SIOE);
    EXPECT_THROW(parse_estimator_kind("lasso"), ConfigError);
    EXPECT_EQ(spectral_kinds().size(), 9u);
    EXPECT_EQ(restricted_kinds().size(), 9u);
}

TEST(Spec, ValidationErrors) {
    EXPECT_THROW(make(EstimatorKind::RE).validate(3), ConfigError);
    EXPECT_THROW(make(EstimatorKind::RE, 0.0).validate(3), ConfigError);
    EXPECT_THROW(make(EstimatorKind::LE, {}, 0.0).validate(3), ConfigError);
    EXPECT_THROW(make(EstimatorKind::LE, {}, 1.5).validate(3), ConfigError);
    EXPECT_THROW(make(EstimatorKind::PCRE, {}, {}, 4).validate(3), ConfigError);
    EXPECT_THROW(make(EstimatorKind::RK, 0.5, {}, 0).validate(3), ConfigError);
    EXPECT_NO_THROW(make(EstimatorKind::RD, {}, 1.0, 3).validate(3));
}

TEST(Ols, NoiselessRecoversGamma) {
    Rng rng(20);
    PartitionedModel pm = random_model(rng, 15, 3, 0);
    CanonicalModel cm = spectral_canonical(pm);
    cm.y = cm.Z * cm.gamma;
    EXPECT_LT((ols(cm) - cm.gamma).norm(), 1e-12 * cm.gamma.norm());
}

TEST(Ols, PureMisspecificationBias) {
    Rng rng(21);
    PartitionedModel pm = random_model(rng, 15, 3, 2);
    CanonicalModel cm = spectral_canonical(pm);
    cm.y = cm.delta;
    const Eigen::VectorXd expected = cm.lambda.cwiseInverse().asDiagonal() * (cm.Z.transpose() * cm.delta);
    EXPECT_LT((ols(cm) - expected).norm(), 1e-12 * expected.norm());
}

TEST(Ols, MatchesLeastSquaresRoutine) {
    Rng rng(22);
    for (int trial = 0; trial < 20; ++trial) {
        const PartitionedModel pm = random_model(rng, 30, 4, 1);
        const CanonicalModel cm = spectral_canonical(pm);
        const Eigen::VectorXd beta = least_squares(pm.x1, pm.y);
        EXPECT_LT((cm.T * ols(cm) - beta).norm(), 1e-10 * beta.norm());
    }
}

TEST(Mre, ConsistencyCase) {
    Rng rng(23);
    PartitionedModel pm = random_model(rng, 20, 3, 0);
    RestrictionSpec rs = random_restriction(rng, 2, 3, false);
    RestrictedCanonicalModel rcm = simultaneous_canonical(pm, rs);
    rcm.y = rcm.Zstar * rcm.gamma_star;
    rcm.restriction.r = rcm.Rstar * rcm.gamma_star;
    const Eigen::VectorXd tau = (Eigen::VectorXd::Ones(3) + pm.sigma2 * rcm.lambda_star).cwiseInverse();
    const Eigen::VectorXd expected =
        tau.asDiagonal() * (rcm.gamma_star + rcm.Rstar.transpose() * rs.W.inverse() * rcm.Rstar * rcm.gamma_star);
    EXPECT_LT((mre(rcm, MreConvention::paper) - expected).norm(), 1e-10);
    EXPECT_LT((mre(rcm, MreConvention::paper) - rcm.gamma_star).norm(), 1e-10 * rcm.gamma_star.norm());
    EXPECT_LT((mre(rcm, MreConvention::definitional) - rcm.gamma_star).norm(), 1e-10 * rcm.gamma_star.norm());
}

TEST(Mre, MatchesStackedGls) {
    Rng rng(24);
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index l = uniform_index(rng, 2, 5);
        const PartitionedModel pm = random_model(rng, 30, l, 2);
        const RestrictionSpec rs = random_restriction(rng, uniform_index(rng, 1, l), l);
        const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, rs);
        const Eigen::VectorXd beta = stacked_gls(pm.x1, pm.y, rs);
        for (MreConvention conv : {MreConvention::paper, MreConvention::definitional}) {
            EXPECT_LT((rcm.B * mre(rcm, conv) - beta).norm(), 1e-9 * beta.norm());
        }
    }
}

TEST(Shrinkage, LimitAndIdentityCases) {
    Rng rng(25);
    const CanonicalModel cm = spectral_canonical(random_model(rng, 20, 4, 0));
    const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
    EXPECT_LT((shrinkage_matrix(make(EstimatorKind::RE, 1e-12), cm) - I).cwiseAbs().maxCoeff(), 1e-9);
    EXPECT_EQ((shrinkage_matrix(make(EstimatorKind::LE, {}, 1.0), cm) - I).cwiseAbs().maxCoeff(), 0.0);
    EXPECT_LT((shrinkage_matrix(make(EstimatorKind::PCRE, {}, {}, 4), cm) - I).cwiseAbs().maxCoeff(), 1e-12);

    const RestrictedCanonicalModel rcm =
        simultaneous_canonical(random_model(rng, 20, 4, 0), random_restriction(rng, 2, 4));
    EXPECT_EQ((shrinkage_matrix(make(EstimatorKind::SRRE, 1.0), rcm) - 0.5 * I).cwiseAbs().maxCoeff(), 0.0);
}

TEST(Shrinkage, FamilyMismatchRejected) {
    Rng rng(26);
    const PartitionedModel pm = random_model(rng, 20, 3, 0);
    const CanonicalModel cm = spectral_canonical(pm);
    const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, random_restriction(rng, 1, 3));
    EXPECT_THROW(shrinkage_matrix(make(EstimatorKind::SRRE, 1.0), cm), ConfigError);
    EXPECT_THROW(shrinkage_matrix(make(EstimatorKind::RE, 1.0), rcm), ConfigError);
    EXPECT_THROW(shrinkage_matrix(make(EstimatorKind::OLSE), cm), ConfigError);
}

TEST(Estimate, DirectFormulasOnUntransformedData) {
    Rng rng(27);
    for (int trial = 0; trial < 10; ++trial) {
        const PartitionedModel pm = random_model(rng, 25, 4, 1, 2.0);
        const CanonicalModel cm = spectral_canonical(pm);
        const Eigen::MatrixXd xtx = pm.x1.transpose() * pm.x1;
        const Eigen::MatrixXd I = Eigen::MatrixXd::Identity(4, 4);
        const Eigen::VectorXd b_ols = xtx.ldlt().solve(pm.x1.transpose() * pm.y);
        const double k = uniform(rng, 0.05, 2.0);
        const double d = uniform(rng, 0.05, 1.0);

        const Eigen::MatrixXd ridge_inv = (xtx + k * I).inverse();
        const Eigen::VectorXd b_re = ridge_inv * pm.x1.transpose() * pm.y;
        const Eigen::VectorXd b_aure = (I - k * k * ridge_inv * ridge_inv) * b_ols;
        const Eigen::VectorXd b_le = (xtx + I).inverse() * (pm.x1.transpose() * pm.y + d * b_ols);
        const Eigen::MatrixXd liu = (xtx + I).inverse() * (xtx + d * I);
        const Eigen::VectorXd b_aule = (2.0 * liu - liu * liu) * b_ols;

        const double tol = 1e-10 * b_ols.norm();
        EXPECT_LT((estimate(make(EstimatorKind::OLSE), cm).beta_hat - b_ols).norm(), tol);
        EXPECT_LT((estimate(make(EstimatorKind::RE, k), cm).beta_hat - b_re).norm(), tol);
        EXPECT_LT((estimate(make(EstimatorKind::AURE, k), cm).beta_hat - b_aure).norm(), tol);
        EXPECT_LT((estimate(make(EstimatorKind::LE, {}, d), cm).beta_hat - b_le).norm(), tol);
        EXPECT_LT((estimate(make(EstimatorKind::AULE, {}, d), cm).beta_hat - b_aule).norm(), tol);
    }
}

TEST(Estimate, PrincipalComponentReductions) {
    Rng rng(28);
    const PartitionedModel pm = random_model(rng, 25, 3, 1);
    const CanonicalModel cm = spectral_canonical(pm);
    const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, random_restriction(rng, 2, 3));
    const Eigen::VectorXd g_ols = estimate(make(EstimatorKind::OLSE), cm).gamma_hat;
    const Eigen::VectorXd g_pcre = estimate(make(EstimatorKind::PCRE, {}, {}, 3), cm).gamma_hat;
    EXPECT_LT((g_pcre - g_ols).norm(), 1e-12 * g_ols.norm());
    const Eigen::VectorXd g_mre = estimate(make(EstimatorKind::MRE), cm, &rcm).gamma_hat;
    const Eigen::VectorXd g_srpcre = estimate(make(EstimatorKind::SRPCRE, {}, {}, 3), cm, &rcm).gamma_hat;
    EXPECT_LT((g_srpcre - g_mre).norm(), 1e-12 * g_mre.norm());
}

TEST(Estimate, RestrictedKindsScaleTheMre) {
    Rng rng(29);
    const PartitionedModel pm = random_model(rng, 25, 3, 1);
    const CanonicalModel cm = spectral_canonical(pm);
    const RestrictionSpec rs = random_restriction(rng, 2, 3);
    const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, rs);
    const Eigen::VectorXd b_mre = stacked_gls(pm.x1, pm.y, rs);
    const Eigen::VectorXd b_srre = estimate(make(EstimatorKind::SRRE, 1.0), cm, &rcm).beta_hat;
    EXPECT_LT((b_srre - 0.5 * b_mre).norm(), 1e-9 * b_mre.norm());
    const Eigen::VectorXd b_srle = estimate(make(EstimatorKind::SRLE, {}, 0.5), cm, &rcm).beta_hat;
    EXPECT_LT((b_srle - 0.75 * b_mre).norm(), 1e-9 * b_mre.norm());
}

TEST(Estimate, MissingInputsRejected) {
    Rng rng(30);
    const CanonicalModel cm = spectral_canonical(random_model(rng, 20, 3, 0));
    EXPECT_THROW(estimate(make(EstimatorKind::SRRE, 1.0), cm), ConfigError);
    EXPECT_THROW(estimate(make(EstimatorKind::SIOE), cm), ConfigError);
    EXPECT_THROW(estimate(make(EstimatorKind::RE), cm), ConfigError);
}

TEST(Estimate, OptimalWithZeroAnchorIsZero) {
    Rng rng(31);
    const PartitionedModel pm = random_model(rng, 20, 3, 1);
    const CanonicalModel cm = spectral_canonical(pm);
    const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, random_restriction(rng, 1, 3));
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(3);
    EXPECT_EQ(estimate(make(EstimatorKind::SIOE), cm, nullptr, &zero).gamma_hat.cwiseAbs().maxCoeff(), 0.0);
    EXPECT_EQ(estimate(make(EstimatorKind::SROE), cm, &rcm, &zero).gamma_hat.cwiseAbs().maxCoeff(), 0.0);
}

TEST(DefaultComponents, CountsAboveMean) {
    EXPECT_EQ(default_components(Eigen::Vector4d(3.0, 0.6, 0.3, 0.1)), 1);
    EXPECT_EQ(default_components(Eigen::Vector3d(2.0, 1.5, 0.1)), 2);
    EXPECT_EQ(default_components(Eigen::Vector3d(1.0, 1.0, 1.0)), 1);
}
