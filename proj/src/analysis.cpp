#include "shrinkest/analysis.hpp"

#include <algorithm>
#include <set>
#include <string>

#include "shrinkest/errors.hpp"
#include "shrinkest/optimal.hpp"

namespace shrinkest {

namespace {

Eigen::MatrixXd columns(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& idx) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(idx[j]);
    return out;
}

Eigen::VectorXd entries(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out(static_cast<Eigen::Index>(j)) = v(idx[j]);
    return out;
}

EstimatorSpec spec_at(EstimatorKind kind, const GridPoint& p, Eigen::Index h) {
    EstimatorSpec spec;
    spec.kind = kind;
    if (needs_k(kind)) spec.k = p.k;
    if (needs_d(kind)) spec.d = p.d;
    if (needs_h(kind)) spec.h = h;
    return spec;
}

Eigen::VectorXd choose_anchor(AnchorSource source, const Eigen::MatrixXd& x1, const Eigen::VectorXd& ols_part,
                              std::vector<std::string>& warnings) {
    if (source == AnchorSource::ols) return ols_part;
    Anchor a = newhouse_oman_anchor(x1);
    if (a.warning) warnings.push_back(*a.warning);
    return a.beta;
}

}  // namespace

std::string_view to_string(AnchorSource a) { return a == AnchorSource::newhouse_oman ? "newhouse-oman" : "ols"; }

AnchorSource parse_anchor_source(std::string_view s) {
    if (s == "newhouse-oman" || s == "newhouse_oman") return AnchorSource::newhouse_oman;
    if (s == "ols") return AnchorSource::ols;
    throw ConfigError("unknown anchor source '" + std::string(s) + "'");
}

PreparedData prepare_data(const Dataset& data, const AnalysisConfig& config) {
    const Eigen::Index n = data.X.rows();
    const Eigen::Index m = data.X.cols();
    if (m < 2) throw DataError("analysis needs at least two regressors");
    if (n <= m) throw DataError("analysis needs more observations than regressors");

    std::vector<Eigen::Index> retained = config.retained;
    std::vector<Eigen::Index> excluded = config.excluded;
    if (retained.empty() && excluded.empty()) {
        for (Eigen::Index j = 0; j + 1 < m; ++j) retained.push_back(j);
        excluded.push_back(m - 1);
    }
    std::set<Eigen::Index> seen(retained.begin(), retained.end());
    seen.insert(excluded.begin(), excluded.end());
    if (retained.empty() || seen.size() != retained.size() + excluded.size() ||
        seen.size() != static_cast<std::size_t>(m) || *seen.begin() != 0 || *seen.rbegin() != m - 1) {
        throw ConfigError("partition must cover regressors 1.." + std::to_string(m) + " disjointly");
    }

    PreparedData out;
    out.vif = vif(data.X);
    const Standardized st = standardize(data.X, data.y);

    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(st.X);
    if (qr.rank() < m) throw NumericalError("full-model design is rank deficient");
    out.beta_full = qr.solve(st.y);
    const double rss = (st.y - st.X * out.beta_full).squaredNorm();
    out.sigma2 = rss / static_cast<double>(n - m);
    if (!(out.sigma2 > 0.0)) throw NumericalError("full-model residual variance is zero");

    std::optional<RestrictionSpec> full_restriction;
    if (config.R) {
        RestrictionSpec rs;
        rs.R = *config.R;
        const Eigen::Index q = rs.R.rows();
        if (rs.R.cols() != m) {
            throw ConfigError("restriction R has " + std::to_string(rs.R.cols()) + " columns, expected " +
                              std::to_string(m));
        }
        rs.g = config.g ? *config.g : Eigen::VectorXd::Zero(q);
        rs.W = config.W ? *config.W : Eigen::MatrixXd::Identity(q, q);
        rs.r = config.r ? *config.r : Eigen::VectorXd(rs.R * out.beta_full);
        full_restriction = rs;
    }

    for (std::size_t slot = 0; slot < 2; ++slot) {
        const ModelMode mode = slot == 0 ? ModelMode::correct : ModelMode::misspecified;
        std::vector<Eigen::Index> kept;
        if (mode == ModelMode::correct) {
            for (Eigen::Index j = 0; j < m; ++j) kept.push_back(j);
        } else {
            kept = retained;
        }

        PartitionedModel pm;
        pm.y = st.y;
        pm.sigma2 = out.sigma2;
        pm.x1 = columns(st.X, kept);
        pm.beta1 = choose_anchor(config.anchor, pm.x1, entries(out.beta_full, kept), out.warnings);
        if (mode == ModelMode::misspecified) {
            pm.x2 = columns(st.X, excluded);
            pm.beta2 = entries(out.beta_full, excluded);
        } else {
            pm.x2 = Eigen::MatrixXd(n, 0);
            pm.beta2 = Eigen::VectorXd(0);
        }

        ModeModels& mm = out.modes[slot];
        mm.mode = mode;
        mm.cm = spectral_canonical(pm);
        mm.spectral = spectral_context(mm.cm);
        mm.h = config.h ? std::min(*config.h, pm.l()) : default_components(mm.cm.lambda);
        if (full_restriction) {
            RestrictionSpec rs = *full_restriction;
            if (mode == ModelMode::misspecified) {
                rs.R = columns(full_restriction->R, kept);
            } else {
                rs.g = Eigen::VectorXd::Zero(rs.q());
            }
            mm.rcm = simultaneous_canonical(pm, rs);
            mm.restricted = restricted_context(*mm.rcm);
        }
    }
    return out;
}

AnalysisResult analyze(const Dataset& data, const AnalysisConfig& config) {
    if (config.grid.empty()) throw ConfigError("grid must be non-empty");
    std::vector<EstimatorKind> kinds = config.estimators;
    if (kinds.empty()) {
        kinds.assign(spectral_kinds().begin(), spectral_kinds().end());
        if (config.R) kinds.insert(kinds.end(), restricted_kinds().begin(), restricted_kinds().end());
    }
    for (EstimatorKind kind : kinds) {
        if (family_of(kind) == Family::restricted && !config.R) {
            throw ConfigError(std::string(to_string(kind)) + " requires a stochastic restriction");
        }
    }

    AnalysisResult result;
    result.prepared = prepare_data(data, config);

    for (const ModeModels& mm : result.prepared.modes) {
        for (EstimatorKind kind : kinds) {
            const RiskContext& ctx = family_of(kind) == Family::spectral ? mm.spectral : *mm.restricted;
            for (const GridPoint& p : config.grid) {
                const Eigen::MatrixXd G = effective_shrinkage(spec_at(kind, p, mm.h), ctx, config.optimal);
                result.rows.push_back({kind, p.k, p.d, mm.mode, smse(G, ctx), 0.0});
            }
        }
    }
    return result;
}

std::vector<DominanceRow> dominate(const std::array<ModeModels, 2>& modes, const DominateConfig& config) {
    const Family family = family_of(config.candidate);
    if (family_of(config.incumbent) != family) {
        throw ConfigError("candidate and incumbent must both be spectral-family or both restricted-family");
    }
    if (config.grid.empty()) throw ConfigError("grid must be non-empty");

    std::vector<DominanceRow> rows;
    for (ModelMode mode : config.modes) {
        const ModeModels& mm = modes[mode == ModelMode::correct ? 0 : 1];
        if (family == Family::restricted && !mm.restricted) {
            throw ConfigError("restricted-family comparison requires a stochastic restriction");
        }
        const RiskContext& ctx = family == Family::spectral ? mm.spectral : *mm.restricted;
        const Eigen::Index h = config.h ? std::min(*config.h, ctx.l()) : mm.h;
        for (const GridPoint& p : config.grid) {
            const Eigen::MatrixXd gc = effective_shrinkage(spec_at(config.candidate, p, h), ctx, config.optimal);
            const Eigen::MatrixXd gi = effective_shrinkage(spec_at(config.incumbent, p, h), ctx, config.optimal);
            rows.push_back({config.candidate, config.incumbent, p.k, p.d, mode, dominance_check(gc, gi, ctx)});
        }
    }
    return rows;
}

}  // namespace shrinkest
