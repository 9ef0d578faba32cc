#include "shrinkest/estimators.hpp"

#include <array>
#include <cctype>
#include <cmath>
#include <string>

#include "shrinkest/errors.hpp"
#include "shrinkest/optimal.hpp"

namespace shrinkest {

namespace {

constexpr std::array kAllKinds = {
    EstimatorKind::OLSE,   EstimatorKind::RE,     EstimatorKind::AURE,   EstimatorKind::LE,
    EstimatorKind::AULE,   EstimatorKind::PCRE,   EstimatorKind::RK,     EstimatorKind::RD,
    EstimatorKind::MRE,    EstimatorKind::SRRE,   EstimatorKind::SRAURE, EstimatorKind::SRLE,
    EstimatorKind::SRAULE, EstimatorKind::SRPCRE, EstimatorKind::SRRK,   EstimatorKind::SRRD,
    EstimatorKind::SIOE,   EstimatorKind::SROE,
};

constexpr std::array kSpectral = {
    EstimatorKind::OLSE, EstimatorKind::RE,   EstimatorKind::AURE, EstimatorKind::LE,
    EstimatorKind::AULE, EstimatorKind::PCRE, EstimatorKind::RK,   EstimatorKind::RD,
    EstimatorKind::SIOE,
};

constexpr std::array kRestricted = {
    EstimatorKind::MRE,    EstimatorKind::SRRE,   EstimatorKind::SRAURE,
    EstimatorKind::SRLE,   EstimatorKind::SRAULE, EstimatorKind::SRPCRE,
    EstimatorKind::SRRK,   EstimatorKind::SRRD,   EstimatorKind::SROE,
};

std::string normalize(std::string_view s) {
    std::string out;
    for (char c : s) {
        if (c == '-' || c == '_' || c == ' ') continue;
        out.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    return out;
}

Eigen::MatrixXd projector(const Eigen::MatrixXd& basis, Eigen::Index h) {
    const Eigen::MatrixXd th = basis.leftCols(h);
    return th * th.transpose();
}

}  // namespace

std::string_view to_string(MreConvention c) {
    return c == MreConvention::paper ? "paper" : "definitional";
}

std::string_view to_string(OptimalForm f) {
    return f == OptimalForm::exact ? "exact" : "symmetric";
}

MreConvention parse_mre_convention(std::string_view s) {
    if (s == "paper") return MreConvention::paper;
    if (s == "definitional") return MreConvention::definitional;
    throw ConfigError("unknown MRE convention '" + std::string(s) + "'");
}

OptimalForm parse_optimal_form(std::string_view s) {
    if (s == "exact") return OptimalForm::exact;
    if (s == "symmetric") return OptimalForm::symmetric;
    throw ConfigError("unknown optimal form '" + std::string(s) + "'");
}

std::string_view to_string(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::OLSE: return "OLSE";
        case EstimatorKind::RE: return "RE";
        case EstimatorKind::AURE: return "AURE";
        case EstimatorKind::LE: return "LE";
        case EstimatorKind::AULE: return "AULE";
        case EstimatorKind::PCRE: return "PCRE";
        case EstimatorKind::RK: return "RK";
        case EstimatorKind::RD: return "RD";
        case EstimatorKind::MRE: return "MRE";
        case EstimatorKind::SRRE: return "SRRE";
        case EstimatorKind::SRAURE: return "SRAURE";
        case EstimatorKind::SRLE: return "SRLE";
        case EstimatorKind::SRAULE: return "SRAULE";
        case EstimatorKind::SRPCRE: return "SRPCRE";
        case EstimatorKind::SRRK: return "SRRK";
        case EstimatorKind::SRRD: return "SRRD";
        case EstimatorKind::SIOE: return "SIOE";
        case EstimatorKind::SROE: return "SROE";
    }
    return "?";
}

EstimatorKind parse_estimator_kind(std::string_view name) {
    const std::string key = normalize(name);
    for (EstimatorKind kind : kAllKinds) {
        if (key == to_string(kind)) return kind;
    }
    throw ConfigError("unknown estimator '" + std::string(name) + "'");
}

Family family_of(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::OLSE:
        case EstimatorKind::RE:
        case EstimatorKind::AURE:
        case EstimatorKind::LE:
        case EstimatorKind::AULE:
        case EstimatorKind::PCRE:
        case EstimatorKind::RK:
        case EstimatorKind::RD:
        case EstimatorKind::SIOE:
            return Family::spectral;
        default:
            return Family::restricted;
    }
}

bool needs_k(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::RE:
        case EstimatorKind::AURE:
        case EstimatorKind::RK:
        case EstimatorKind::SRRE:
        case EstimatorKind::SRAURE:
        case EstimatorKind::SRRK:
            return true;
        default:
            return false;
    }
}

bool needs_d(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::LE:
        case EstimatorKind::AULE:
        case EstimatorKind::RD:
        case EstimatorKind::SRLE:
        case EstimatorKind::SRAULE:
        case EstimatorKind::SRRD:
            return true;
        default:
            return false;
    }
}

bool needs_h(EstimatorKind kind) {
    switch (kind) {
        case EstimatorKind::PCRE:
        case EstimatorKind::RK:
        case EstimatorKind::RD:
        case EstimatorKind::SRPCRE:
        case EstimatorKind::SRRK:
        case EstimatorKind::SRRD:
            return true;
        default:
            return false;
    }
}

bool has_shrinkage_matrix(EstimatorKind kind) {
    return kind != EstimatorKind::OLSE && kind != EstimatorKind::MRE &&
           kind != EstimatorKind::SIOE && kind != EstimatorKind::SROE;
}

std::span<const EstimatorKind> spectral_kinds() { return kSpectral; }
std::span<const EstimatorKind> restricted_kinds() { return kRestricted; }

void EstimatorSpec::validate(Eigen::Index l) const {
    const std::string name(to_string(kind));
    if (needs_k(kind)) {
        if (!k) throw ConfigError(name + " requires the ridge parameter k");
        if (!(*k > 0.0) || !std::isfinite(*k)) throw ConfigError(name + ": k must be positive");
    }
    if (needs_d(kind)) {
        if (!d) throw ConfigError(name + " requires the Liu parameter d");
        if (!(*d > 0.0 && *d <= 1.0)) throw ConfigError(name + ": d must lie in (0, 1]");
    }
    if (needs_h(kind)) {
        if (!h) throw ConfigError(name + " requires the component count h");
        if (*h < 1 || *h > l) {
            throw ConfigError(name + ": h must lie in [1, " + std::to_string(l) + "]");
        }
    }
}

Eigen::VectorXd ols(const CanonicalModel& cm) {
    return (cm.Z.transpose() * cm.y).cwiseQuotient(cm.lambda);
}

Eigen::VectorXd mre(const RestrictedCanonicalModel& rcm, MreConvention convention) {
    const RestrictionSpec& rs = rcm.restriction;
    const auto q = rs.q();
    const Eigen::MatrixXd w_inv = rs.W.llt().solve(Eigen::MatrixXd::Identity(q, q));

    if (convention == MreConvention::paper) {
        const Eigen::VectorXd rhs = rcm.Zstar.transpose() * rcm.y + rcm.Rstar.transpose() * (w_inv * rs.r);
        const Eigen::ArrayXd scale = 1.0 + rcm.sigma2 * rcm.lambda_star.array();
        return (rhs.array() / scale).matrix();
    }

    const Eigen::MatrixXd lhs = rcm.x1.transpose() * rcm.x1 + rs.R.transpose() * w_inv * rs.R;
    const Eigen::VectorXd rhs = rcm.x1.transpose() * rcm.y + rs.R.transpose() * (w_inv * rs.r);
    const Eigen::VectorXd beta = lhs.ldlt().solve(rhs);
    return rcm.B.partialPivLu().solve(beta);
}

Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const Eigen::VectorXd& lambda,
                                 const Eigen::MatrixXd& basis) {
    const Eigen::Index l = basis.cols();
    if (!has_shrinkage_matrix(spec.kind)) {
        throw ConfigError(std::string(to_string(spec.kind)) + " has no shrinkage-matrix form");
    }
    spec.validate(l);
    if (family_of(spec.kind) == Family::spectral && lambda.size() != l) {
        throw ConfigError("eigenvalue vector does not match basis size");
    }

    const Eigen::ArrayXd lam = lambda.array();
    const auto identity = Eigen::MatrixXd::Identity(l, l);
    switch (spec.kind) {
        case EstimatorKind::RE: {
            const double k = *spec.k;
            return (lam / (lam + k)).matrix().asDiagonal();
        }
        case EstimatorKind::AURE: {
            const double k = *spec.k;
            return (1.0 - k * k / (lam + k).square()).matrix().asDiagonal();
        }
        case EstimatorKind::LE: {
            const double d = *spec.d;
            return ((lam + d) / (lam + 1.0)).matrix().asDiagonal();
        }
        case EstimatorKind::AULE: {
            const double d = *spec.d;
            return (1.0 - (1.0 - d) * (1.0 - d) / (lam + 1.0).square()).matrix().asDiagonal();
        }
        case EstimatorKind::PCRE:
            return projector(basis, *spec.h);
        case EstimatorKind::RK: {
            const double k = *spec.k;
            return projector(basis, *spec.h) * (lam / (lam + k)).matrix().asDiagonal();
        }
        case EstimatorKind::RD: {
            const double d = *spec.d;
            return projector(basis, *spec.h) * ((lam + d) / (lam + 1.0)).matrix().asDiagonal();
        }
        case EstimatorKind::SRRE:
            return identity / (1.0 + *spec.k);
        case EstimatorKind::SRAURE: {
            const double k = *spec.k;
            return identity * ((1.0 + 2.0 * k) / ((1.0 + k) * (1.0 + k)));
        }
        case EstimatorKind::SRLE:
            return identity * (0.5 * (1.0 + *spec.d));
        case EstimatorKind::SRAULE: {
            const double d = *spec.d;
            return identity * (0.25 * (1.0 + d) * (3.0 - d));
        }
        case EstimatorKind::SRPCRE:
            return projector(basis, *spec.h);
        case EstimatorKind::SRRK:
            return projector(basis, *spec.h) / (1.0 + *spec.k);
        case EstimatorKind::SRRD:
            return projector(basis, *spec.h) * (0.5 * (1.0 + *spec.d));
        default:
            break;
    }
    throw ConfigError("unhandled estimator kind");
}

Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const CanonicalModel& cm) {
    if (family_of(spec.kind) != Family::spectral) {
        throw ConfigError(std::string(to_string(spec.kind)) + " needs the restricted canonical model");
    }
    return shrinkage_matrix(spec, cm.lambda, cm.T);
}

Eigen::MatrixXd shrinkage_matrix(const EstimatorSpec& spec, const RestrictedCanonicalModel& rcm) {
    if (family_of(spec.kind) != Family::restricted) {
        throw ConfigError(std::string(to_string(spec.kind)) + " needs the spectral canonical model");
    }
    return shrinkage_matrix(spec, rcm.lambda_star, rcm.T);
}

Eigen::Index default_components(const Eigen::VectorXd& lambda) {
    const double mean = lambda.mean();
    Eigen::Index h = 0;
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda(i) > mean) ++h;
    }
    return std::max<Eigen::Index>(h, 1);
}

CoefficientEstimate estimate(const EstimatorSpec& spec, const CanonicalModel& cm,
                             const RestrictedCanonicalModel* rcm, const Eigen::VectorXd* anchor,
                             const EstimateOptions& options) {
    const std::string name(to_string(spec.kind));
    if (family_of(spec.kind) == Family::restricted && rcm == nullptr) {
        throw ConfigError(name + " requires a stochastic restriction");
    }
    if ((spec.kind == EstimatorKind::SIOE || spec.kind == EstimatorKind::SROE) && anchor == nullptr) {
        throw ConfigError(name + " requires an anchor coefficient vector");
    }

    switch (spec.kind) {
        case EstimatorKind::SIOE: {
            CoefficientEstimate out = sioe(cm, *anchor, options.optimal);
            out.spec = spec;
            return out;
        }
        case EstimatorKind::SROE: {
            CoefficientEstimate out = sroe(*rcm, *anchor, options.optimal, options.mre);
            out.spec = spec;
            return out;
        }
        case EstimatorKind::OLSE: {
            CoefficientEstimate out{ols(cm), {}, spec};
            out.beta_hat = cm.T * out.gamma_hat;
            return out;
        }
        case EstimatorKind::MRE: {
            CoefficientEstimate out{mre(*rcm, options.mre), {}, spec};
            out.beta_hat = rcm->B * out.gamma_hat;
            return out;
        }
        default:
            break;
    }

    CoefficientEstimate out;
    out.spec = spec;
    if (family_of(spec.kind) == Family::spectral) {
        out.gamma_hat = shrinkage_matrix(spec, cm) * ols(cm);
        out.beta_hat = cm.T * out.gamma_hat;
    } else {
        out.gamma_hat = shrinkage_matrix(spec, *rcm) * mre(*rcm, options.mre);
        out.beta_hat = rcm->B * out.gamma_hat;
    }
    return out;
}

}  // namespace shrinkest
