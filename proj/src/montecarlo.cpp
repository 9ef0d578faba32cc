#include "shrinkest/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <set>
#include <string>
#include <thread>

#include "shrinkest/errors.hpp"
#include "shrinkest/optimal.hpp"

namespace shrinkest {

namespace {

constexpr std::uint64_t kFixedDesignStream = std::numeric_limits<std::uint64_t>::max();
constexpr int kMaxRedraws = 1000;

Eigen::MatrixXd select_columns(const Eigen::MatrixXd& X, const std::vector<Eigen::Index>& cols) {
    Eigen::MatrixXd out(X.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) out.col(static_cast<Eigen::Index>(j)) = X.col(cols[j]);
    return out;
}

Eigen::VectorXd select_entries(const Eigen::VectorXd& v, const std::vector<Eigen::Index>& idx) {
    Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
    for (std::size_t j = 0; j < idx.size(); ++j) out(static_cast<Eigen::Index>(j)) = v(idx[j]);
    return out;
}

bool well_conditioned(const Eigen::MatrixXd& X) {
    const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(X.transpose() * X).eigenvalues();
    return eig.maxCoeff() > 0.0 && eig.minCoeff() > kRankTolerance * eig.maxCoeff();
}

std::vector<EstimatorKind> simulated_kinds(const SimConfig& config) {
    std::vector<EstimatorKind> kinds(spectral_kinds().begin(), spectral_kinds().end());
    if (config.restriction) kinds.insert(kinds.end(), restricted_kinds().begin(), restricted_kinds().end());
    return kinds;
}

EstimatorSpec spec_at(EstimatorKind kind, const GridPoint& point, Eigen::Index h) {
    EstimatorSpec spec;
    spec.kind = kind;
    if (needs_k(kind)) spec.k = point.k;
    if (needs_d(kind)) spec.d = point.d;
    if (needs_h(kind)) spec.h = h;
    return spec;
}

ModeModels build_mode(const SimConfig& config, ModelMode mode, const Eigen::MatrixXd& X,
                      const Eigen::VectorXd& beta, const Eigen::VectorXd& y, const Eigen::VectorXd& v) {
    PartitionedModel pm;
    pm.y = y;
    pm.sigma2 = config.noise_variance;
    std::vector<Eigen::Index> all(static_cast<std::size_t>(kSimRegressors));
    for (Eigen::Index j = 0; j < kSimRegressors; ++j) all[static_cast<std::size_t>(j)] = j;
    const auto& kept = mode == ModelMode::correct ? all : config.retained;
    pm.x1 = select_columns(X, kept);
    pm.beta1 = select_entries(beta, kept);
    if (mode == ModelMode::misspecified) {
        pm.x2 = select_columns(X, config.excluded);
        pm.beta2 = select_entries(beta, config.excluded);
    } else {
        pm.x2 = Eigen::MatrixXd(X.rows(), 0);
        pm.beta2 = Eigen::VectorXd(0);
    }

    ModeModels out;
    out.mode = mode;
    out.cm = spectral_canonical(pm);
    out.spectral = spectral_context(out.cm);
    out.h = config.h ? std::min(*config.h, pm.l()) : default_components(out.cm.lambda);

    if (config.restriction) {
        const RestrictionSpec& full = *config.restriction;
        RestrictionSpec rs;
        rs.W = full.W;
        if (mode == ModelMode::correct) {
            rs.R = full.R;
            rs.g = Eigen::VectorXd::Zero(full.q());
        } else {
            rs.R = Eigen::MatrixXd(full.q(), pm.l());
            for (std::size_t j = 0; j < kept.size(); ++j) rs.R.col(static_cast<Eigen::Index>(j)) = full.R.col(kept[j]);
            rs.g = full.g;
        }
        rs.r = rs.R * pm.beta1 + rs.g + v;
        out.rcm = simultaneous_canonical(pm, rs);
        out.restricted = restricted_context(*out.rcm);
    }
    return out;
}

Eigen::VectorXd base_estimate(const ModeModels& mm, Family family, MreConvention convention) {
    return family == Family::spectral ? ols(mm.cm) : mre(*mm.rcm, convention);
}

}  // namespace

std::string_view to_string(XMode m) { return m == XMode::regenerate ? "regenerate" : "fixed"; }
std::string_view to_string(Aggregation a) { return a == Aggregation::analytic ? "analytic" : "empirical"; }
std::string_view to_string(ModelMode m) { return m == ModelMode::correct ? "correct" : "misspecified"; }

XMode parse_x_mode(std::string_view s) {
    if (s == "regenerate") return XMode::regenerate;
    if (s == "fixed") return XMode::fixed;
    throw ConfigError("unknown x-mode '" + std::string(s) + "'");
}

Aggregation parse_aggregation(std::string_view s) {
    if (s == "analytic") return Aggregation::analytic;
    if (s == "empirical") return Aggregation::empirical;
    throw ConfigError("unknown aggregation '" + std::string(s) + "'");
}

ModelMode parse_model_mode(std::string_view s) {
    if (s == "correct") return ModelMode::correct;
    if (s == "misspecified") return ModelMode::misspecified;
    throw ConfigError("unknown model mode '" + std::string(s) + "'");
}

std::vector<GridPoint> shared_grid(int points) {
    if (points < 1) throw ConfigError("grid needs at least one point");
    std::vector<GridPoint> out;
    out.reserve(static_cast<std::size_t>(points));
    for (int i = 1; i <= points; ++i) {
        const double t = static_cast<double>(i) / points;
        out.push_back({t, t});
    }
    return out;
}

std::vector<GridPoint> cartesian_grid(const std::vector<double>& k_values, const std::vector<double>& d_values) {
    if (k_values.empty() || d_values.empty()) throw ConfigError("k and d grids must be non-empty");
    std::vector<GridPoint> out;
    for (double k : k_values) {
        for (double d : d_values) out.push_back({k, d});
    }
    return out;
}

RestrictionSpec default_sim_restriction() {
    RestrictionSpec rs;
    rs.R = Eigen::MatrixXd::Ones(1, kSimRegressors);
    rs.g = Eigen::VectorXd::Zero(1);
    rs.W = Eigen::MatrixXd::Identity(1, 1);
    rs.r = Eigen::VectorXd::Zero(1);
    return rs;
}

void SimConfig::validate() const {
    if (n < 7) throw ConfigError("simulation needs n >= 7");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
    if (reps < 1) throw ConfigError("reps must be at least 1");
    if (!(noise_variance > 0.0)) throw ConfigError("noise variance must be positive");
    if (grid.empty()) throw ConfigError("grid must be non-empty");
    for (const GridPoint& p : grid) {
        if (!(p.k > 0.0)) throw ConfigError("grid k values must be positive");
        if (!(p.d > 0.0 && p.d <= 1.0)) throw ConfigError("grid d values must lie in (0, 1]");
    }
    if (retained.empty()) throw ConfigError("partition must retain at least one regressor");
    std::set<Eigen::Index> seen;
    for (Eigen::Index j : retained) seen.insert(j);
    for (Eigen::Index j : excluded) seen.insert(j);
    if (seen.size() != retained.size() + excluded.size() || seen.size() != static_cast<std::size_t>(kSimRegressors) ||
        *seen.begin() != 0 || *seen.rbegin() != kSimRegressors - 1) {
        throw ConfigError("partition must cover regressors 1..5 disjointly");
    }
    if (static_cast<Eigen::Index>(retained.size()) >= n) throw ConfigError("need n > retained regressors");
    if (h && *h < 1) throw ConfigError("h must be at least 1");
    if (restriction) {
        RestrictionSpec probe = *restriction;
        probe.r = Eigen::VectorXd::Zero(probe.q());
        probe.validate(kSimRegressors);
        Eigen::MatrixXd kept(probe.q(), static_cast<Eigen::Index>(retained.size()));
        for (std::size_t j = 0; j < retained.size(); ++j) kept.col(static_cast<Eigen::Index>(j)) = probe.R.col(retained[j]);
        RestrictionSpec sub = probe;
        sub.R = kept;
        sub.validate(static_cast<Eigen::Index>(retained.size()));
    }
}

Eigen::MatrixXd generate_design(Eigen::Index n, double alpha, RandomStream& stream) {
    if (n < 7) throw ConfigError("generate_design needs n >= 7");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw ConfigError("alpha must lie in [0, 1)");
    const Eigen::MatrixXd z = stream.normal_matrix(n, kSimRegressors + 1);
    const double own = std::sqrt(1.0 - alpha * alpha);
    Eigen::MatrixXd X(n, kSimRegressors);
    for (Eigen::Index j = 0; j < kSimRegressors; ++j) X.col(j) = own * z.col(j) + alpha * z.col(kSimRegressors);
    return X;
}

Eigen::VectorXd generate_response(const Eigen::MatrixXd& X, const Eigen::VectorXd& beta, RandomStream& stream,
                                  double noise_sd) {
    if (beta.size() != X.cols()) throw ConfigError("beta length does not match design columns");
    return X * beta + noise_sd * stream.normal_vector(X.rows());
}

Replicate draw_replicate(const SimConfig& config, std::uint64_t index) {
    const bool fixed = config.x_mode == XMode::fixed;
    RandomStream noise(config.seed, index);
    RandomStream design_stream(config.seed, fixed ? kFixedDesignStream : index);
    RandomStream& design = fixed ? design_stream : noise;

    Replicate rep;
    for (;;) {
        rep.X = generate_design(config.n, config.alpha, design);
        if (well_conditioned(rep.X) && well_conditioned(select_columns(rep.X, config.retained))) break;
        if (++rep.redraws > kMaxRedraws) throw NumericalError("could not draw a full-rank design");
    }
    rep.beta = newhouse_oman_anchor(rep.X).beta;
    rep.y = generate_response(rep.X, rep.beta, noise, std::sqrt(config.noise_variance));

    Eigen::VectorXd v;
    if (config.restriction) {
        const Eigen::MatrixXd L = config.restriction->W.llt().matrixL();
        v = std::sqrt(config.noise_variance) * (L * noise.normal_vector(config.restriction->q()));
    }
    rep.modes[0] = build_mode(config, ModelMode::correct, rep.X, rep.beta, rep.y, v);
    rep.modes[1] = build_mode(config, ModelMode::misspecified, rep.X, rep.beta, rep.y, v);
    return rep;
}

SimReport simulate_smse(const SimConfig& config) {
    config.validate();
    const std::vector<EstimatorKind> kinds = simulated_kinds(config);
    const std::size_t grid_size = config.grid.size();
    const std::size_t per_mode = kinds.size() * grid_size;
    const std::size_t width = 2 * per_mode;
    const auto reps = static_cast<std::size_t>(config.reps);

    std::vector<std::vector<double>> values(reps);
    std::vector<int> redraws(reps, 0);

    auto run_replicate = [&](std::size_t r) {
        const Replicate rep = draw_replicate(config, r);
        redraws[r] = rep.redraws;
        std::vector<double> out(width);
        for (std::size_t m = 0; m < 2; ++m) {
            const ModeModels& mm = rep.modes[m];
            for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
                const EstimatorKind kind = kinds[ki];
                const Family family = family_of(kind);
                const RiskContext& ctx = family == Family::spectral ? mm.spectral : *mm.restricted;
                Eigen::VectorXd base;
                if (config.aggregation == Aggregation::empirical) base = base_estimate(mm, family, config.mre);

                const bool grid_free = !needs_k(kind) && !needs_d(kind);
                Eigen::MatrixXd G;
                for (std::size_t gi = 0; gi < grid_size; ++gi) {
                    if (!grid_free || gi == 0) G = effective_shrinkage(spec_at(kind, config.grid[gi], mm.h), ctx, config.optimal);
                    const double value = config.aggregation == Aggregation::analytic
                                             ? smse(G, ctx)
                                             : (G * base - ctx.gamma).squaredNorm();
                    out[m * per_mode + ki * grid_size + gi] = value;
                }
            }
        }
        values[r] = std::move(out);
    };

    unsigned threads = config.threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : config.threads;
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
    if (threads <= 1) {
        for (std::size_t r = 0; r < reps; ++r) run_replicate(r);
    } else {
        std::atomic<std::size_t> next{0};
        std::exception_ptr failure;
        std::mutex failure_mutex;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < reps; r = next++) {
                    try {
                        run_replicate(r);
                    } catch (...) {
                        std::lock_guard<std::mutex> lock(failure_mutex);
                        if (!failure) failure = std::current_exception();
                        next = reps;
                    }
                }
            });
        }
        for (std::thread& th : pool) th.join();
        if (failure) std::rethrow_exception(failure);
    }

    SimReport report;
    report.config = config;
    report.version = SHRINKEST_VERSION;
    if (config.x_mode == XMode::fixed) {
        report.redraws = redraws[0];
    } else {
        for (int c : redraws) report.redraws += c;
    }
    if (report.redraws * 100 > config.reps) {
        report.warnings.push_back("more than 1% of replicates redrawn for rank deficiency (" +
                                  std::to_string(report.redraws) + ")");
    }

    report.rows.reserve(width);
    for (std::size_t m = 0; m < 2; ++m) {
        for (std::size_t ki = 0; ki < kinds.size(); ++ki) {
            for (std::size_t gi = 0; gi < grid_size; ++gi) {
                const std::size_t col = m * per_mode + ki * grid_size + gi;
                double sum = 0.0;
                for (std::size_t r = 0; r < reps; ++r) sum += values[r][col];
                const double mean = sum / static_cast<double>(reps);
                double ss = 0.0;
                for (std::size_t r = 0; r < reps; ++r) {
                    const double dev = values[r][col] - mean;
                    ss += dev * dev;
                }
                const double se = reps > 1 ? std::sqrt(ss / static_cast<double>(reps - 1) / static_cast<double>(reps))
                                           : 0.0;
                report.rows.push_back({kinds[ki], config.grid[gi].k, config.grid[gi].d,
                                       m == 0 ? ModelMode::correct : ModelMode::misspecified, mean, se});
            }
        }
    }
    return report;
}

EmpiricalComparison empirical_msem(const SimConfig& config, const EstimatorSpec& spec, ModelMode mode) {
    config.validate();
    if (config.x_mode != XMode::fixed) throw ConfigError("empirical_msem requires x_mode = fixed");
    const Family family = family_of(spec.kind);
    if (family == Family::restricted && !config.restriction) {
        throw ConfigError(std::string(to_string(spec.kind)) + " requires a stochastic restriction");
    }
    const std::size_t slot = mode == ModelMode::correct ? 0 : 1;

    EmpiricalComparison out;
    out.reps = config.reps;
    for (int r = 0; r < config.reps; ++r) {
        const Replicate rep = draw_replicate(config, static_cast<std::uint64_t>(r));
        const ModeModels& mm = rep.modes[slot];
        const RiskContext& ctx = family == Family::spectral ? mm.spectral : *mm.restricted;
        const Eigen::MatrixXd G = effective_shrinkage(spec, ctx, config.optimal);
        if (r == 0) {
            out.analytic = msem(G, ctx);
            out.empirical = Eigen::MatrixXd::Zero(ctx.l(), ctx.l());
        }
        const Eigen::VectorXd err = G * base_estimate(mm, family, config.mre) - ctx.gamma;
        out.empirical += err * err.transpose();
    }
    out.empirical /= static_cast<double>(config.reps);
    return out;
}

}  // namespace shrinkest
