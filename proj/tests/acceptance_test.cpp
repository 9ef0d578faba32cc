// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <thread>

#include "shrinkest/canon.hpp"
#include "shrinkest/dataset.hpp"
#include "shrinkest/dominance.hpp"
#include "shrinkest/estimators.hpp"
#include "shrinkest/montecarlo.hpp"
#include "shrinkest/optimal.hpp"
#include "shrinkest/risk.hpp"
#include "support.hpp"

using namespace shrinkest;
using namespace testing_support;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

EstimatorSpec random_spec(Rng& rng, EstimatorKind kind, Eigen::Index l) {
    EstimatorSpec s;
    s.kind = kind;
    if (needs_k(kind)) s.k = uniform(rng, 0.01, 3.0);
    if (needs_d(kind)) s.d = uniform(rng, 0.01, 1.0);
    if (needs_h(kind)) s.h = uniform_index(rng, 1, l);
    return s;
}

std::vector<EstimatorKind> named_kinds() {
    std::vector<EstimatorKind> out;
    for (EstimatorKind k : spectral_kinds())
        if (has_shrinkage_matrix(k)) out.push_back(k);
    for (EstimatorKind k : restricted_kinds())
        if (has_shrinkage_matrix(k)) out.push_back(k);
    return out;
}

std::string fmt(double x) {
    std::ostringstream s;
    s.precision(3);
    s << x;
    return s.str();
}

Outcome vif_reproduction() {
    const Eigen::VectorXd v = vif(load_dataset(kBuiltinGruber).X);
    const Eigen::Vector4d published(6.91, 21.58, 29.75, 1.79);
    const double worst = (v - published).cwiseAbs().maxCoeff();
    std::ostringstream s;
    s << "vif = (" << fmt(v(0)) << ", " << fmt(v(1)) << ", " << fmt(v(2)) << ", " << fmt(v(3))
      << "), max deviation " << fmt(worst);
    return {worst <= 0.01, s.str()};
}

Outcome closed_form_equivalence() {
    Rng rng(1001);
    const auto kinds = named_kinds();
    double worst = 0.0;
    int cases = 0;
    for (int model = 0; model < 50; ++model) {
        const RiskContext sctx = random_context(rng, Family::spectral);
        const RiskContext rctx = random_context(rng, Family::restricted);
        for (EstimatorKind kind : kinds) {
            const RiskContext& ctx = family_of(kind) == Family::spectral ? sctx : rctx;
            const EstimatorSpec spec = random_spec(rng, kind, ctx.l());
            const Eigen::MatrixXd generic = msem(shrinkage_matrix(spec, ctx), ctx);
            worst = std::max(worst, rel_frobenius(closed_form_risk(spec, ctx).msem, generic));
            ++cases;
        }
    }
    return {kinds.size() == 14 && worst < 1e-9,
            std::to_string(kinds.size()) + " estimators, " + std::to_string(cases) + " cases, worst relative error " +
                fmt(worst)};
}

Outcome stationarity() {
    Rng rng(1002);
    double worst_grad = 0.0;
    double worst_drop = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        const RiskContext ctx = random_context(rng, trial % 2 ? Family::spectral : Family::restricted);
        const Eigen::MatrixXd G = optimal_shrinkage(ctx);
        worst_grad = std::max(worst_grad, smse_gradient(G, ctx).cwiseAbs().maxCoeff());
        const double best = smse(G, ctx);
        for (int e = 0; e < 20; ++e) {
            Eigen::MatrixXd E = gaussian(rng, ctx.l(), ctx.l());
            E /= E.norm();
            for (double eps : {1e-3, 1e-2, 1e-1}) worst_drop = std::max(worst_drop, best - smse(G + eps * E, ctx));
        }
    }
    return {worst_grad < 1e-8 && worst_drop <= 1e-12,
            "max |gradient| " + fmt(worst_grad) + ", max SMSE decrease under perturbation " + fmt(worst_drop)};
}

Outcome gradient_check() {
    Rng rng(1003);
    const double step = 1e-6;
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const RiskContext ctx = random_context(rng, trial % 2 ? Family::spectral : Family::restricted);
        const Eigen::MatrixXd G = gaussian(rng, ctx.l(), ctx.l());
        const Eigen::MatrixXd grad = smse_gradient(G, ctx);
        for (Eigen::Index i = 0; i < G.rows(); ++i) {
            for (Eigen::Index j = 0; j < G.cols(); ++j) {
                Eigen::MatrixXd up = G, down = G;
                up(i, j) += step;
                down(i, j) -= step;
                const double fd = (smse(up, ctx) - smse(down, ctx)) / (2.0 * step);
                worst = std::max(worst, std::abs(fd - grad(i, j)) / std::max(std::abs(grad(i, j)), 1.0));
            }
        }
    }
    return {worst < 1e-4, "50 instances, worst entrywise relative error " + fmt(worst)};
}

Outcome reductions() {
    Rng rng(1004);
    double worst = 0.0;
    double worst_remark = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const Eigen::Index l = uniform_index(rng, 2, 5);
        const PartitionedModel pm = random_model(rng, 30, l, 1);
        const CanonicalModel cm = spectral_canonical(pm);
        const RestrictedCanonicalModel rcm = simultaneous_canonical(pm, random_restriction(rng, 1, l));
        const Eigen::VectorXd olse = ols(cm);
        const Eigen::VectorXd base_mre = mre(rcm);
        auto spec = [](EstimatorKind kind, std::optional<double> k, std::optional<double> d,
                       std::optional<Eigen::Index> h) {
            EstimatorSpec s;
            s.kind = kind;
            s.k = k;
            s.d = d;
            s.h = h;
            return s;
        };
        const auto diff = [](const Eigen::VectorXd& a, const Eigen::VectorXd& b) {
            return (a - b).norm() / std::max(1.0, b.norm());
        };
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::RE, 1e-12, {}, {}), cm).gamma_hat, olse));
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::LE, {}, 1.0, {}), cm).gamma_hat, olse));
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::PCRE, {}, {}, l), cm).gamma_hat, olse));
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::SRRE, 1e-12, {}, {}), cm, &rcm).gamma_hat, base_mre));
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::SRLE, {}, 1.0, {}), cm, &rcm).gamma_hat, base_mre));
        worst = std::max(worst, diff(estimate(spec(EstimatorKind::SRPCRE, {}, {}, l), cm, &rcm).gamma_hat, base_mre));

        RiskContext ctx = spectral_context(cm);
        ctx.A.setZero();
        const Eigen::MatrixXd gg = ctx.gamma * ctx.gamma.transpose();
        const Eigen::MatrixXd remark = gg * (ctx.sigma2 * ctx.lambda.cwiseInverse().asDiagonal().toDenseMatrix() + gg).inverse();
        worst_remark = std::max(worst_remark, (optimal_shrinkage(ctx) - remark).cwiseAbs().maxCoeff());
    }
    return {worst < 1e-9 && worst_remark < 1e-10,
            "worst estimator reduction " + fmt(worst) + ", unshifted optimum deviation " + fmt(worst_remark)};
}

Outcome simulation_ordering() {
    std::ostringstream detail;
    bool pass = true;
    int violations = 0;
    for (double alpha : {0.9, 0.99, 0.999}) {
        SimConfig c;
        c.n = 50;
        c.reps = 500;
        c.alpha = alpha;
        c.grid = shared_grid(25);
        c.restriction = default_sim_restriction();
        c.threads = 0;
        const SimReport report = simulate_smse(c);

        std::map<std::tuple<EstimatorKind, ModelMode, double>, double> value;
        for (const SimRow& r : report.rows) value[{r.kind, r.mode, r.k}] = r.mean_smse;
        for (ModelMode mode : {ModelMode::correct, ModelMode::misspecified}) {
            for (const GridPoint& p : c.grid) {
                const double sioe_v = value.at({EstimatorKind::SIOE, mode, p.k});
                for (EstimatorKind k : spectral_kinds()) {
                    if (value.at({k, mode, p.k}) < sioe_v) ++violations;
                }
                const double sroe_v = value.at({EstimatorKind::SROE, mode, p.k});
                if (alpha == 0.9) {
                    for (EstimatorKind k : restricted_kinds()) {
                        if (value.at({k, mode, p.k}) < sroe_v) ++violations;
                    }
                } else {
                    const double ref = std::min(value.at({EstimatorKind::SRRE, mode, p.k}),
                                                value.at({EstimatorKind::SRLE, mode, p.k}));
                    if (sroe_v > 1.02 * ref) ++violations;
                }
            }
        }
        const double sioe_mid = value.at({EstimatorKind::SIOE, ModelMode::misspecified, c.grid[12].k});
        const double sroe_mid = value.at({EstimatorKind::SROE, ModelMode::misspecified, c.grid[12].k});
        detail << "alpha " << alpha << ": SIOE " << fmt(sioe_mid) << ", SROE " << fmt(sroe_mid) << "; ";
    }
    pass = violations == 0;
    detail << violations << " ordering violations";
    return {pass, detail.str()};
}

Outcome dominance_oracle() {
    Rng rng(1007);
    int agree = 0;
    int checked = 0;
    int attempts = 0;
    while (checked < 200 && attempts < 100000) {
        ++attempts;
        const Family family = attempts % 2 ? Family::spectral : Family::restricted;
        const RiskContext ctx = random_context(rng, family);
        const auto kinds = family == Family::spectral ? spectral_kinds() : restricted_kinds();
        const auto pick = [&] { return kinds[static_cast<std::size_t>(uniform_index(rng, 0, kinds.size() - 1))]; };
        const EstimatorSpec cand = random_spec(rng, pick(), ctx.l());
        const EstimatorSpec inc = random_spec(rng, pick(), ctx.l());
        const Eigen::MatrixXd gc = effective_shrinkage(cand, ctx);
        const Eigen::MatrixXd gi = effective_shrinkage(inc, ctx);
        const DominanceVerdict v = dominance_check(gc, gi, ctx);
        if (!(v.precondition_eig < 1.0 - kDominanceSlack)) continue;
        ++checked;
        Eigen::MatrixXd d = msem(gi, ctx) - msem(gc, ctx);
        d = 0.5 * (d + d.transpose());
        const Eigen::VectorXd eig = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(d).eigenvalues();
        const bool oracle = eig.minCoeff() >= -1e-10 * std::max(1.0, eig.cwiseAbs().maxCoeff());
        if (v.status != VerdictStatus::boundary && v.status != VerdictStatus::inconclusive && v.dominated == oracle) {
            ++agree;
        }
    }
    return {checked == 200 && agree == 200,
            std::to_string(agree) + "/" + std::to_string(checked) + " agree (" + std::to_string(attempts) +
                " instances drawn)"};
}

Outcome empirical_agreement() {
    SimConfig c;
    c.n = 50;
    c.alpha = 0.9;
    c.reps = 2000;
    c.seed = 8;
    c.x_mode = XMode::fixed;
    EstimatorSpec olse;
    const EmpiricalComparison cmp = empirical_msem(c, olse, ModelMode::misspecified);

    const Replicate rep = draw_replicate(c, 0);
    const CanonicalModel& cm = rep.modes[1].cm;
    const Eigen::VectorXd inv = cm.lambda.cwiseInverse();
    const Eigen::VectorXd b = inv.asDiagonal() * (cm.Z.transpose() * cm.delta);
    const Eigen::MatrixXd analytic = c.noise_variance * inv.asDiagonal().toDenseMatrix() + b * b.transpose();
    const double err = rel_frobenius(cmp.empirical, analytic);
    return {err < 0.05, "relative Frobenius error " + fmt(err) + " over " + std::to_string(cmp.reps) + " replicates"};
}

Outcome determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "shrinkest_acceptance";
    fs::create_directories(dir);
    const std::string common = " simulate --n 50 --alpha 0.9 --reps 500 --seed 424242 --partition 1,2,3:4,5 --grid 25";
    const unsigned many = std::max(2u, std::thread::hardware_concurrency());
    const fs::path a = dir / "one.csv";
    const fs::path b = dir / "many.csv";
    const int ra = std::system((std::string(SHRINKEST_CLI) + common + " --threads 1 --out " + a.string()).c_str());
    const int rb = std::system(
        (std::string(SHRINKEST_CLI) + common + " --threads " + std::to_string(many) + " --out " + b.string()).c_str());
    const auto slurp = [](const fs::path& p) {
        std::ifstream in(p, std::ios::binary);
        std::stringstream s;
        s << in.rdbuf();
        return s.str();
    };
    const std::string sa = slurp(a);
    const std::string sb = slurp(b);
    const bool same = ra == 0 && rb == 0 && !sa.empty() && sa == sb;
    return {same, "threads 1 vs " + std::to_string(many) + ": " + std::to_string(sa.size()) + " bytes, " +
                      (same ? "identical" : "different")};
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria = {
        {"VIF reproduction on builtin data", 1, vif_reproduction},
        {"closed-form vs generic MSEM", 30, closed_form_equivalence},
        {"optimality stationarity and perturbation", 30, stationarity},
        {"gradient vs central differences", 30, gradient_check},
        {"reduction identities", 5, reductions},
        {"simulation ordering at three collinearity levels", 300, simulation_ordering},
        {"dominance certificate vs eigenvalue oracle", 30, dominance_oracle},
        {"fixed-design empirical vs analytic MSEM", 60, empirical_agreement},
        {"simulate output independent of thread count", 120, determinism},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].run();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const bool in_time = secs < criteria[i].limit_seconds;
        const bool pass = out.pass && in_time;
        if (!pass) ++failures;
        std::cout << (pass ? "PASS" : "FAIL") << " criterion " << i + 1 << ": " << criteria[i].name << " | "
                  << out.detail << " | " << fmt(secs) << " s (limit " << criteria[i].limit_seconds << " s)"
                  << (in_time ? "" : " TOO SLOW") << std::endl;
    }
    std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << std::endl;
    return failures == 0 ? 0 : 1;
}
