#pragma once

// Random instances shared by the unit and acceptance tests.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <random>

#include "shrinkest/canon.hpp"
#include "shrinkest/risk.hpp"

namespace testing_support {

using Rng = std::mt19937_64;

inline Eigen::MatrixXd gaussian(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index j = 0; j < cols; ++j)
        for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = z(rng);
    return m;
}

inline Eigen::VectorXd gaussian_vector(Rng& rng, Eigen::Index size) { return gaussian(rng, size, 1).col(0); }

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline Eigen::Index uniform_index(Rng& rng, Eigen::Index lo, Eigen::Index hi) {
    return std::uniform_int_distribution<Eigen::Index>(lo, hi)(rng);
}

/// Well-conditioned SPD matrix.
inline Eigen::MatrixXd spd(Rng& rng, Eigen::Index size) {
    const Eigen::MatrixXd a = gaussian(rng, size, size);
    return a * a.transpose() + 0.5 * Eigen::MatrixXd::Identity(size, size);
}

/// Correlated design with an optional excluded block.
inline shrinkest::PartitionedModel random_model(Rng& rng, Eigen::Index n, Eigen::Index l, Eigen::Index p,
                                                double collinearity = 0.5) {
    const Eigen::MatrixXd z = gaussian(rng, n, l + p + 1);
    Eigen::MatrixXd x(n, l + p);
    for (Eigen::Index j = 0; j < l + p; ++j) x.col(j) = z.col(j) + collinearity * z.col(l + p);
    shrinkest::PartitionedModel pm;
    pm.x1 = x.leftCols(l);
    pm.x2 = x.rightCols(p);
    pm.beta1 = gaussian_vector(rng, l);
    pm.beta2 = gaussian_vector(rng, p);
    pm.sigma2 = uniform(rng, 0.3, 2.0);
    pm.y = pm.x1 * pm.beta1 + pm.x2 * pm.beta2 + std::sqrt(pm.sigma2) * gaussian_vector(rng, n);
    return pm;
}

inline shrinkest::RestrictionSpec random_restriction(Rng& rng, Eigen::Index q, Eigen::Index l, bool with_g = true) {
    shrinkest::RestrictionSpec rs;
    rs.R = gaussian(rng, q, l);
    rs.W = spd(rng, q);
    rs.g = with_g ? Eigen::VectorXd(gaussian_vector(rng, q)) : Eigen::VectorXd(Eigen::VectorXd::Zero(q));
    rs.r = gaussian_vector(rng, q);
    return rs;
}

/// Spectral or restricted context built from a random model.
inline shrinkest::RiskContext random_context(Rng& rng, shrinkest::Family family, Eigen::Index l = 0,
                                             bool misspecified = true) {
    if (l == 0) l = uniform_index(rng, 2, 5);
    const Eigen::Index p = misspecified ? uniform_index(rng, 1, 3) : 0;
    const Eigen::Index n = uniform_index(rng, l + p + 8, 40);
    const shrinkest::PartitionedModel pm = random_model(rng, n, l, p);
    if (family == shrinkest::Family::spectral) return shrinkest::spectral_context(shrinkest::spectral_canonical(pm));
    const Eigen::Index q = uniform_index(rng, 1, l);
    const auto rs = random_restriction(rng, q, l, misspecified);
    return shrinkest::restricted_context(shrinkest::simultaneous_canonical(pm, rs));
}

inline double rel_frobenius(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
    return (a - b).norm() / std::max(b.norm(), 1e-300);
}

}  // namespace testing_support
