#include "shrinkest/canon.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "shrinkest/errors.hpp"

namespace shrinkest {

namespace {

bool is_symmetric(const Eigen::MatrixXd& m, double tol) {
    const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
    return (m - m.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

}  // namespace

void PartitionedModel::validate() const {
    const auto rows = x1.rows();
    if (x1.cols() < 1) throw ConfigError("retained design X1 must have at least one column");
    if (rows <= x1.cols()) throw ConfigError("need n > l observations");
    if (y.size() != rows) throw ConfigError("response length does not match design rows");
    if (beta1.size() != x1.cols()) throw ConfigError("beta1 length does not match X1 columns");
    if (x2.cols() > 0 && x2.rows() != rows) throw ConfigError("X2 rows do not match X1 rows");
    if (beta2.size() != x2.cols()) throw ConfigError("beta2 length does not match X2 columns");
    if (!(sigma2 > 0.0)) throw ConfigError("sigma2 must be positive");
}

void RestrictionSpec::validate(Eigen::Index l) const {
    const auto rows = R.rows();
    if (rows < 1) throw ConfigError("restriction needs at least one row");
    if (R.cols() != l) {
        throw ConfigError("restriction matrix has " + std::to_string(R.cols()) +
                          " columns, expected " + std::to_string(l));
    }
    if (r.size() != rows) throw ConfigError("restriction value vector r has wrong length");
    if (g.size() != rows) throw ConfigError("restriction shift vector g has wrong length");
    if (W.rows() != rows || W.cols() != rows) throw ConfigError("W must be q x q");
    if (!is_symmetric(W, 1e-10)) throw ConfigError("W not positive definite (asymmetric)");
    Eigen::LLT<Eigen::MatrixXd> llt(W);
    if (llt.info() != Eigen::Success) throw ConfigError("W not positive definite");
    const Eigen::VectorXd w_eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(W).eigenvalues();
    if (w_eig.minCoeff() <= kRankTolerance * w_eig.maxCoeff()) {
        throw ConfigError("W not positive definite");
    }
    const Eigen::VectorXd rr = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(R * R.transpose()).eigenvalues();
    if (rr.maxCoeff() <= 0.0 || rr.minCoeff() <= kRankTolerance * rr.maxCoeff()) {
        throw ConfigError("restriction matrix R must have full row rank q");
    }
}

void canonicalize_signs(Eigen::MatrixXd& vectors) {
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            const double a = std::abs(vectors(i, j));
            if (a > best) {
                best = a;
                arg = i;
            }
        }
        if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
    }
}

SymmetricEigen symmetric_eigen(const Eigen::MatrixXd& m) {
    const Eigen::MatrixXd sym = 0.5 * (m + m.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(sym);
    if (solver.info() != Eigen::Success) throw NumericalError("symmetric eigensolver failed");
    const Eigen::VectorXd& vals = solver.eigenvalues();
    const auto size = vals.size();

    std::vector<Eigen::Index> order(static_cast<std::size_t>(size));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](Eigen::Index a, Eigen::Index b) { return vals(a) > vals(b); });

    SymmetricEigen out;
    out.values.resize(size);
    out.vectors.resize(size, size);
    for (Eigen::Index j = 0; j < size; ++j) {
        out.values(j) = vals(order[static_cast<std::size_t>(j)]);
        out.vectors.col(j) = solver.eigenvectors().col(order[static_cast<std::size_t>(j)]);
    }
    canonicalize_signs(out.vectors);
    return out;
}

Standardized standardize(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    if (X.rows() < 2) throw DataError("standardize needs at least two observations");
    if (y.size() != X.rows()) throw DataError("response length does not match design rows");

    Standardized out;
    out.x_mean = X.colwise().mean().transpose();
    out.X = X.rowwise() - out.x_mean.transpose();
    out.x_scale = out.X.colwise().norm().transpose();
    for (Eigen::Index j = 0; j < X.cols(); ++j) {
        const double raw = X.col(j).norm();
        if (!(out.x_scale(j) > 1e-14 * std::max(1.0, raw))) {
            throw DataError("zero-variance regressor in column " + std::to_string(j + 1));
        }
        out.X.col(j) /= out.x_scale(j);
    }
    out.y_mean = y.mean();
    out.y = y.array() - out.y_mean;
    return out;
}

Eigen::VectorXd vif(const Eigen::MatrixXd& X) {
    const auto n = X.rows();
    const auto m = X.cols();
    if (m < 2) throw ConfigError("vif needs at least two columns");
    if (n <= m) throw ConfigError("vif needs more rows than columns");

    Eigen::VectorXd out(m);
    for (Eigen::Index j = 0; j < m; ++j) {
        Eigen::MatrixXd others(n, m);
        others.col(0).setOnes();
        for (Eigen::Index c = 0, k = 1; c < m; ++c) {
            if (c != j) others.col(k++) = X.col(c);
        }
        const Eigen::VectorXd target = X.col(j);
        const double mean = target.mean();
        const double tss = (target.array() - mean).square().sum();
        if (!(tss > 0.0)) throw DataError("zero-variance regressor in column " + std::to_string(j + 1));

        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(others);
        qr.setThreshold(1e-12);
        if (qr.rank() < m) throw NumericalError("infinite VIF (exact collinearity)");
        const Eigen::VectorXd resid = target - others * qr.solve(target);
        const double one_minus_r2 = resid.squaredNorm() / tss;
        if (one_minus_r2 <= 1e-12) throw NumericalError("infinite VIF (exact collinearity)");
        out(j) = 1.0 / one_minus_r2;
    }
    return out;
}

CanonicalModel spectral_canonical(const PartitionedModel& model) {
    model.validate();
    const Eigen::MatrixXd gram = model.x1.transpose() * model.x1;
    SymmetricEigen eig = symmetric_eigen(gram);
    if (!(eig.values(eig.values.size() - 1) > kRankTolerance * eig.values(0))) {
        throw NumericalError("rank-deficient X1 (X1'X1 not positive definite)");
    }

    CanonicalModel cm;
    cm.T = std::move(eig.vectors);
    cm.lambda = std::move(eig.values);
    cm.Z = model.x1 * cm.T;
    cm.gamma = cm.T.transpose() * model.beta1;
    cm.delta = model.p() > 0 ? Eigen::VectorXd(model.x2 * model.beta2)
                             : Eigen::VectorXd::Zero(model.n());
    cm.y = model.y;
    cm.sigma2 = model.sigma2;
    return cm;
}

RestrictedCanonicalModel simultaneous_canonical(const PartitionedModel& model,
                                                const RestrictionSpec& restriction) {
    model.validate();
    restriction.validate(model.l());
    const auto l = model.l();
    const auto q = restriction.q();

    const Eigen::MatrixXd gram = model.x1.transpose() * model.x1;
    const SymmetricEigen spectral = symmetric_eigen(gram);
    if (!(spectral.values(l - 1) > kRankTolerance * spectral.values(0))) {
        throw NumericalError("rank-deficient X1 (X1'X1 not positive definite)");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success) throw NumericalError("Cholesky of X1'X1 failed");

    const Eigen::MatrixXd C =
        llt.matrixL().solve(Eigen::MatrixXd::Identity(l, l));  // L^-1
    const Eigen::MatrixXd w_inv = restriction.W.llt().solve(Eigen::MatrixXd::Identity(q, q));
    const Eigen::MatrixXd info =
        restriction.R.transpose() * (w_inv / model.sigma2) * restriction.R;  // R' Psi^-1 R
    const Eigen::MatrixXd whitened = C * info * C.transpose();

    SymmetricEigen eig = symmetric_eigen(whitened);
    if (!(eig.values(q - 1) > kRankTolerance * std::max(eig.values(0), 0.0))) {
        throw NumericalError("R' Psi^-1 R has rank below q");
    }
    for (Eigen::Index i = q; i < l; ++i) eig.values(i) = 0.0;

    RestrictedCanonicalModel rcm;
    rcm.B = C.transpose() * eig.vectors;
    rcm.lambda_star = std::move(eig.values);
    rcm.Zstar = model.x1 * rcm.B;
    rcm.Rstar = restriction.R * rcm.B;
    rcm.gamma_star = rcm.B.partialPivLu().solve(model.beta1);
    rcm.restriction = restriction;
    rcm.delta = model.p() > 0 ? Eigen::VectorXd(model.x2 * model.beta2)
                              : Eigen::VectorXd::Zero(model.n());
    rcm.y = model.y;
    rcm.x1 = model.x1;
    rcm.T = spectral.vectors;
    rcm.sigma2 = model.sigma2;
    return rcm;
}

}  // namespace shrinkest
