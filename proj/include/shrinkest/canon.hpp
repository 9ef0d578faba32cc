#pragma once

/**
 * @file canon.hpp
 * @brief Data model, standardization, collinearity diagnostics and the two
 *        canonical transforms used by every estimator and risk formula.
 *
 * Spectral form:      T' X1'X1 T = Lambda,  Z = X1 T,  gamma = T' beta1.
 * Simultaneous form:  B' X1'X1 B = I,  B' R' Psi^-1 R B = Lambda*,
 *                     Z* = X1 B,  R* = R B,  gamma* = B^-1 beta1,  Psi = sigma^2 W.
 *
 * Eigenvalues are ordered descending (stable on ties) and each eigenvector is
 * signed so that its largest-magnitude entry is positive.
 */

#include <Eigen/Dense>

namespace shrinkest {

/// Relative threshold below which a symmetric matrix is treated as rank deficient.
inline constexpr double kRankTolerance = 1e-12;

/// Full model split into the retained block X1 and the excluded block X2.
struct PartitionedModel {
    Eigen::VectorXd y;
    Eigen::MatrixXd x1;     ///< n x l, retained regressors
    Eigen::MatrixXd x2;     ///< n x p, excluded regressors (p may be 0)
    Eigen::VectorXd beta1;  ///< l
    Eigen::VectorXd beta2;  ///< p
    double sigma2 = 1.0;

    Eigen::Index n() const { return x1.rows(); }
    Eigen::Index l() const { return x1.cols(); }
    Eigen::Index p() const { return x2.cols(); }

    /// Throws ConfigError when dimensions disagree or sigma2 <= 0.
    void validate() const;
};

/// Stochastic prior information r = R beta1 + g + v with Cov(v) = sigma^2 W.
struct RestrictionSpec {
    Eigen::VectorXd r;  ///< q
    Eigen::MatrixXd R;  ///< q x l, rank q
    Eigen::MatrixXd W;  ///< q x q, symmetric positive definite
    Eigen::VectorXd g;  ///< q, misspecification shift

    Eigen::Index q() const { return R.rows(); }

    /// Throws ConfigError for non-conformable sizes, rank(R) < q, or W not SPD.
    void validate(Eigen::Index l) const;
};

struct CanonicalModel {
    Eigen::MatrixXd T;       ///< l x l orthogonal
    Eigen::VectorXd lambda;  ///< l, descending, all positive
    Eigen::MatrixXd Z;       ///< n x l
    Eigen::VectorXd gamma;   ///< T' beta1
    Eigen::VectorXd delta;   ///< X2 beta2 (zero when X2 is empty)
    Eigen::VectorXd y;
    double sigma2 = 1.0;

    Eigen::Index l() const { return lambda.size(); }
    /// First h columns of T.
    Eigen::MatrixXd leading_basis(Eigen::Index h) const { return T.leftCols(h); }
};

struct RestrictedCanonicalModel {
    Eigen::MatrixXd B;            ///< l x l nonsingular
    Eigen::VectorXd lambda_star;  ///< l, descending; exactly q positive entries
    Eigen::MatrixXd Zstar;        ///< X1 B
    Eigen::MatrixXd Rstar;        ///< R B
    Eigen::VectorXd gamma_star;   ///< B^-1 beta1
    RestrictionSpec restriction;
    Eigen::VectorXd delta;
    Eigen::VectorXd y;
    Eigen::MatrixXd x1;           ///< untransformed retained design
    Eigen::MatrixXd T;            ///< spectral eigenvectors of X1'X1, source of the T_h projector
    double sigma2 = 1.0;

    Eigen::Index l() const { return lambda_star.size(); }
};

/// Eigen-decomposition with the project-wide ordering and sign conventions.
struct SymmetricEigen {
    Eigen::VectorXd values;   ///< descending
    Eigen::MatrixXd vectors;  ///< columns match values
};

/// Decomposes a symmetric matrix; descending order, ties kept in solver order,
/// largest-magnitude entry of each eigenvector made positive.
SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m);

/// Flips the sign of each column so its largest-magnitude entry (first on ties) is positive.
void canonicalize_signs(Eigen::MatrixXd& vectors);

struct Standardized {
    Eigen::MatrixXd X;       ///< centered, unit column length
    Eigen::VectorXd y;       ///< centered, not scaled
    Eigen::VectorXd x_mean;
    Eigen::VectorXd x_scale; ///< sqrt of the sum of squared deviations
    double y_mean = 0.0;
};

/// Correlation-form standardization: X'X of the result is the sample correlation matrix.
/// Throws DataError("zero-variance regressor ...") for a constant column.
Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y);

/// Variance inflation factors 1/(1 - R_j^2), column j regressed with intercept on the rest.
/// Throws NumericalError("infinite VIF (exact collinearity)") when some R_j^2 reaches 1.
Eigen::VectorXd vif(const Eigen::MatrixXd& X);

CanonicalModel spectral_canonical(const PartitionedModel& model);

/// Simultaneous diagonalization via Cholesky whitening:
/// X1'X1 = L L',  C = L^-1,  C R'Psi^-1 R C' = U Lambda* U',  B = C' U.
RestrictedCanonicalModel simultaneous_canonical(const PartitionedModel& model,
                                                const RestrictionSpec& restriction);

}  // namespace shrinkest
