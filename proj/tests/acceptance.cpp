// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "axireg/config.hpp"
#include "axireg/ensemble.hpp"
#include "axireg/exponents.hpp"
#include "axireg/functionals.hpp"
#include "axireg/inequalities.hpp"
#include "axireg/monitor.hpp"
#include "axireg/operators.hpp"
#include "axireg/solver.hpp"
#include "analytic_fields.hpp"
#include "dense_quadrature.hpp"
#include "mms.hpp"

using namespace axireg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            if (pass) detail.clear();
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
    void note(const std::string& what) {
        if (pass) detail += (detail.empty() ? "" : "; ") + what;
    }
};

std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

// Closed forms of the family, kept apart from the library.
struct Family {
    double p, q, mu, gamma, a, alpha;
};

Family family(double e) {
    return {2.0 * (1.0 - e * e),     2.0 * (1.0 - e), (1.0 - e) / (1.0 + e),
            2.0 * (1.0 - e),         1.0 - 2.0 * (1.0 - e * e) * e,
            -2.0 * (1.0 - 2.0 * e) * (1.0 + e) * e};
}

Outcome exponent_algebra() {
    Outcome o;
    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> ue(0.0, 1.0 / 14.0), ut(1e-9, 1.0 - 1e-9);
    const SerrinCondition cond;
    int tested = 0;
    double worst_alpha = 0.0, worst_id = 0.0;
    while (tested < 1000) {
        const double e = ue(rng);
        if (e == 0.0) continue;
        const double lo = minimal_delta0(e);
        const double d = lo + (1.0 / 3.0 - lo) * ut(rng);
        const CriterionParams c = params_from_epsilon(e, d);
        ++tested;
        for (const ValidationReport& r : validate_all(c, cond)) {
            if (!r.pass()) o.require(false, r.name + " failed at eps=" + fmt("%.6g", e));
        }
        const Family f = family(e);
        worst_alpha = std::max({worst_alpha, std::abs(c.alpha - f.alpha),
                                std::abs(alpha_relation(f.gamma, f.mu, f.a, f.q) - f.alpha)});
        // Multiplied through by 2 - q, which vanishes as eps -> 0.
        worst_id = std::max(worst_id, std::abs((4.0 - c.p - c.gamma) * c.q - c.p * (2.0 - c.q)));
    }
    o.require(worst_alpha <= 1e-12, "alpha mismatch " + fmt("%.3g", worst_alpha));
    o.require(worst_id <= 1e-12, "[4-p-gamma]q = p(2-q) off by " + fmt("%.3g", worst_id));
    o.note("1000 members, max |alpha diff| " + fmt("%.2g", worst_alpha) + ", max identity residual " +
           fmt("%.2g", worst_id));
    return o;
}

Outcome operator_convergence() {
    Outcome o;
    const std::vector<std::size_t> sizes = {65, 129, 257};
    double worst = INFINITY;
    for (const analytic::Field& f : analytic::all()) {
        std::vector<analytic::Errors> e;
        for (std::size_t n : sizes) e.push_back(analytic::errors(f, n, StencilSpec{2}));
        const auto pick = [&](std::size_t k, int which) {
            const analytic::Errors& x = e[k];
            const double v[] = {x.div, x.omega_r, x.omega_theta, x.omega_z, x.lap_theta};
            return v[which];
        };
        const char* names[] = {"div", "omega_r", "omega_theta", "omega_z", "swirl_laplacian"};
        for (int w = 0; w < 5; ++w) {
            for (std::size_t k = 0; k + 1 < sizes.size(); ++k) {
                if (pick(k + 1, w) < 1e-10) continue;  // exact up to rounding
                const double order = std::log2(pick(k, w) / pick(k + 1, w));
                worst = std::min(worst, order);
                o.require(order >= 1.8, f.name + " " + names[w] + " order " + fmt("%.2f", order));
            }
        }
    }
    o.note("min order " + fmt("%.2f", worst) + " over 3 fields, grids 65 -> 129 -> 257");
    return o;
}

Outcome quadrature_oracle() {
    Outcome o;
    const CriterionParams c = params_from_epsilon(0.05, 0.2);
    const SerrinCondition cond;
    const GridPtr g = make_grid(4.0, 4.0, 257, 1025);
    const FunctionalOptions opt{Quadrature::AxisCorrected, StencilSpec{4}};
    double worst = 0.0;
    for (const EnsembleMember& m : make_ensemble(31337, 20)) {
        const FunctionalSet f = evaluate_functionals(sample_member(m, g), c, cond, opt);
        const dense::Values ref = dense::reference(m, c, cond);
        const double errs[] = {rel(f.phi_p, ref.phi_p), rel(f.omega_q, ref.omega_q),
                               rel(f.I1, ref.I1),       rel(f.I2, ref.I2),
                               rel(f.I3, ref.I3),       rel(f.f_serrin, ref.f_serrin),
                               rel(f.g_ur, ref.g_ur)};
        worst = std::max(worst, *std::max_element(std::begin(errs), std::end(errs)));
    }
    o.require(worst <= 1e-5, "max relative difference " + fmt("%.3g", worst));
    o.note("20 members, max relative difference " + fmt("%.2g", worst));
    return o;
}

struct IdentityLevel {
    double res_d = 0.0, res_i = 0.0, bookkeeping = 0.0;
};

IdentityLevel identity_level(std::size_t n, double dt, double t_end) {
    const GridPtr g = make_grid(4.0, 4.0, n, n);
    SolverConfig cfg;
    cfg.nu = 0.1;
    cfg.dt = dt;
    cfg.t_end = t_end;
    InitialData init;
    init.recipe = "swirl_ring";
    const CriterionParams c = params_from_epsilon(0.05, 0.2);
    const AxiSolver solver(g, cfg);
    AxisymState s = solver.prepare(make_initial_state(init, g));
    refresh_vorticity(s);
    IdentityLevel out;
    const long steps = std::lround(t_end / dt);
    for (long k = 0; k < steps; ++k) {
        AxisymState next = solver.step(s);
        refresh_vorticity(next);
        if (k % 10 != 0 && k + 1 != steps) {
            s = std::move(next);
            continue;
        }
        const IdentityTerms d = eval_identity_d_terms(s, next, c, cfg.nu);
        const IdentityTerms i = eval_identity_i_terms(s, next, c, cfg.nu);
        const IdentityTerms m = assemble_main(d, i);
        const double scale = std::abs(d.lhs) + std::abs(i.lhs) + std::abs(d.rhs) + std::abs(i.rhs);
        const double book = std::max(std::abs(m.lhs - (d.lhs + i.lhs)), std::abs(m.rhs - (d.rhs + i.rhs)));
        out.bookkeeping = std::max(out.bookkeeping, book / std::max(scale, 1e-300));
        if (k + 1 == steps) {
            out.res_d = std::abs(d.residual);
            out.res_i = std::abs(i.residual);
        }
        s = std::move(next);
    }
    return out;
}

Outcome identity_residuals() {
    Outcome o;
    const double T = 0.1;
    const IdentityLevel a = identity_level(65, 2e-3, T);
    const IdentityLevel b = identity_level(129, 1e-3, T);
    const IdentityLevel c = identity_level(257, 5e-4, T);
    const double order_d = 0.5 * std::log2(a.res_d / c.res_d);
    const double order_i = 0.5 * std::log2(a.res_i / c.res_i);
    o.require(b.res_d < a.res_d && c.res_d < b.res_d, "identity d residual not decreasing");
    o.require(b.res_i < a.res_i && c.res_i < b.res_i, "identity i residual not decreasing");
    o.require(order_d >= 1.0, "identity d order " + fmt("%.2f", order_d));
    o.require(order_i >= 1.0, "identity i order " + fmt("%.2f", order_i));
    const double book = std::max({a.bookkeeping, b.bookkeeping, c.bookkeeping});
    o.require(book <= 1e-12, "main bookkeeping " + fmt("%.3g", book));
    o.note("residual d " + fmt("%.2e", a.res_d) + " -> " + fmt("%.2e", b.res_d) + " -> " +
           fmt("%.2e", c.res_d) + " (order " + fmt("%.2f", order_d) + "), i " + fmt("%.2e", a.res_i) +
           " -> " + fmt("%.2e", b.res_i) + " -> " + fmt("%.2e", c.res_i) + " (order " +
           fmt("%.2f", order_i) + "), bookkeeping " + fmt("%.1e", book));
    return o;
}

Outcome explicit_inequalities() {
    Outcome o;
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    int young_bad = 0;
    for (int k = 0; k < 100000; ++k) {
        const double A = 10.0 * u(rng), B = 10.0 * u(rng);
        const double p = 1.0 + 1e-3 + 9.0 * u(rng);
        const double eps = std::exp(8.0 * u(rng) - 4.0);
        if (A * B > young(A, B, p, p / (p - 1.0), eps).bound() * (1.0 + 1e-12)) ++young_bad;
    }
    o.require(young_bad == 0, std::to_string(young_bad) + " Young violations");

    int holder_bad = 0;
    const GridPtr small = make_grid(2.0, 2.0, 17, 17);
    std::uniform_real_distribution<double> s(-1.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        ScalarField2D f(small), h(small);
        for (double& v : f.values()) v = s(rng);
        for (double& v : h.values()) v = s(rng);
        const double p = 1.1 + 4.0 * u(rng);
        if (!verify_holder_step(f, h, p, p / (p - 1.0)).pass) ++holder_bad;
    }
    o.require(holder_bad == 0, std::to_string(holder_bad) + " Hoelder violations");

    const CriterionParams c = params_from_epsilon(0.05, 0.2);
    const GridPtr g = make_grid(4.0, 4.0, 65, 65);
    int chain_bad = 0;
    double min_margin = INFINITY;
    for (const EnsembleMember& m : make_ensemble(777, 100)) {
        const InequalityReport r = verify_I3_chain(sample_member(m, g), c, 0.1, 0.1, 0.1);
        if (!r.pass) ++chain_bad;
        if (r.rhs > 0.0) min_margin = std::min(min_margin, r.margin / r.rhs);
    }
    o.require(chain_bad == 0, std::to_string(chain_bad) + " of 100 I3 chain violations");
    o.note("1e5 Young, 200 Hoelder, 100 I3 chains; min relative I3 margin " + fmt("%.3f", min_margin));
    return o;
}

Outcome empirical_constants() {
    Outcome o;
    const CriterionParams c = params_from_epsilon(0.05, 0.2);
    const SerrinCondition cond;
    const GridPtr g = make_grid(4.0, 4.0, 65, 65);
    const ChainOptions opt{StencilSpec{2}, 2.0};
    const std::uint64_t seed = 11;
    const AqEstimate cal = estimate_aq_constant(c.q, c.alpha, c.eps0, 100, g, seed);
    const AqEstimate big = estimate_aq_constant(c.q, c.alpha, c.eps0, 200, g, seed);
    const double drift = std::abs(big.sup_ratio / cal.sup_ratio - 1.0);
    o.require(drift <= 0.1, "A_q sup ratio drift " + fmt("%.3f", drift));

    int i1_bad = 0, i2_bad = 0;
    for (const EnsembleMember& m : make_ensemble(seed + 1000003, 100)) {
        const AxisymState s = sample_member(m, g);
        const InequalityReport r1 = verify_I1_chain(s, c, c.delta0, 0.1, 0.1, cal.sup_ratio, opt);
        const InequalityReport r2 = verify_I2_chain(s, cond, c.q, c.alpha, 0.1, 0.1, opt);
        if (!r1.pass || r1.inconclusive) ++i1_bad;
        if (!r2.pass || r2.inconclusive) ++i2_bad;
    }
    o.require(i1_bad == 0, std::to_string(i1_bad) + " of 100 I1 chain failures");
    o.require(i2_bad == 0, std::to_string(i2_bad) + " of 100 I2 chain failures");

    int sob_bad = 0, profiles = 0;
    const auto sob = [&](const ScalarField2D& G) {
        ++profiles;
        if (!verify_sobolev_step(G).pass) ++sob_bad;
    };
    const GridPtr wide = make_grid(5.0, 5.0, 129, 257);
    sob(ScalarField2D::sample(wide, Parity::Even, [](double r, double z) { return std::exp(-r * r - z * z); }));
    for (double R0 : {2.0, 5.0, 12.0}) {
        const double L = R0 + 0.5;
        const GridPtr gt = make_grid(L, L, 257, 513);
        const double floor_v = 1.0 / std::sqrt(1.0 + R0 * R0);
        sob(ScalarField2D::sample(gt, Parity::Even, [&](double r, double z) {
            return std::max(0.0, 1.0 / std::sqrt(1.0 + r * r + z * z) - floor_v);
        }));
    }
    for (const EnsembleMember& m : make_ensemble(99, 10)) {
        const AxisymState s = sample_member(m, g);
        ScalarField2D ur = s.u_r, ut = s.u_theta;
        for (double& v : ur.values()) v = std::abs(v);
        for (double& v : ut.values()) v = std::abs(v);
        sob(ur);
        sob(ut);
    }
    o.require(sob_bad == 0, std::to_string(sob_bad) + " Sobolev failures");
    o.note("A_q sup ratio " + fmt("%.4g", cal.sup_ratio) + " (100) vs " + fmt("%.4g", big.sup_ratio) +
           " (200), drift " + fmt("%.3f", drift) + "; 100 held-out I1/I2 chains; " +
           std::to_string(profiles) + " Sobolev profiles");
    return o;
}

Outcome gronwall_tracking() {
    Outcome o;
    RunConfig cfg;
    cfg.grid.n_r = 129;
    cfg.grid.n_z = 129;
    cfg.solver.nu = 0.1;
    cfg.solver.dt = 2e-3;
    cfg.solver.t_end = 1.0;
    cfg.initial.recipe = "swirl_ring";
    cfg.monitor.cadence = 25;
    cfg.monitor.aq_ensemble = 40;
    cfg.monitor.write_files = false;
    const RunResult res = run(cfg);
    const Trajectory& traj = res.trajectory;
    o.require(traj.complete, "run " + traj.status);
    if (!traj.complete || traj.records.empty()) return o;
    double worst = 0.0;
    for (const MonitorRecord& r : traj.records) {
        worst = std::max(worst, r.f.omega_q / r.gronwall_bound);
    }
    o.require(worst <= 1.0, "omega_q / bound reached " + fmt("%.4g", worst));
    const double decay = traj.records.back().f.phi_p / traj.records.front().f.phi_p;
    o.require(decay < 0.9, "swirl functional decayed only to " + fmt("%.3f", decay));

    // Double-log variant on synthetic series, small and growing norms.
    int tighter = 0;
    std::mt19937_64 rng(8);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < 200; ++k) {
        std::vector<double> t, a;
        const double growth = 5.0 * u(rng);
        for (int j = 0; j <= 200; ++j) {
            t.push_back(0.01 * j);
            a.push_back(1.0 + growth * t.back() * t.back() + u(rng));
        }
        const double y0 = std::exp(6.0 * u(rng) - 3.0);
        const double C = 2.0 * u(rng);
        const auto plain = gronwall_bound(t, a, y0, C);
        const auto ll = loglog_gronwall(t, a, y0, C);
        for (std::size_t j = 0; j < t.size(); ++j) {
            if (ll[j] < plain[j] * (1.0 - 1e-12)) {
                ++tighter;
                break;
            }
        }
    }
    o.require(tighter == 0, std::to_string(tighter) + " synthetic series with loglog below plain");
    o.note(std::to_string(traj.records.size()) + " rows, max omega_q/bound " + fmt("%.3g", worst) +
           ", phi_p ratio " + fmt("%.3f", decay) + ", composed C " + fmt("%.4g", res.composed_C) +
           ", chain failures " + std::to_string(res.chain_failures));
    return o;
}

Outcome solver_correctness() {
    Outcome o;
    const double T = 0.1;
    std::vector<double> err;
    double max_div_excess = 0.0;
    for (std::size_t n : {33, 65, 129}) {
        const mms::Run r = mms::run(n, 2.5e-4, T);
        err.push_back(mms::l2_distance(r.final_state, mms::exact(r.final_state.u_r.grid_ptr(), r.final_state.t)));
        max_div_excess = std::max(max_div_excess, r.max_divergence / r.projection_tol);
    }
    const double space1 = std::log2(err[0] / err[1]), space2 = std::log2(err[1] / err[2]);
    o.require(std::min(space1, space2) >= 1.8, "space order " + fmt("%.2f", std::min(space1, space2)));

    const AxisymState ref = mms::run(33, 1.25e-3 / 8.0, T).final_state;
    std::vector<double> terr;
    for (double dt : {1e-2, 5e-3, 2.5e-3}) terr.push_back(mms::l2_distance(mms::run(33, dt, T).final_state, ref));
    const double time1 = std::log2(terr[0] / terr[1]), time2 = std::log2(terr[1] / terr[2]);
    o.require(std::min(time1, time2) >= 0.9, "time order " + fmt("%.2f", std::min(time1, time2)));
    o.require(max_div_excess <= 1.0, "divergence above projection_tol");

    const GridPtr g = make_grid(4.0, 4.0, 33, 33);
    SolverConfig cfg;
    const AxiSolver solver(g, cfg);
    const AxisymState rest = AxisymState::zeros(g);
    AxisymState s = rest;
    for (int k = 0; k < 20; ++k) s = solver.step(s);
    bool fixed = true;
    for (const ScalarField2D* f : {&s.u_r, &s.u_theta, &s.u_z}) {
        for (double v : f->values()) fixed = fixed && v == 0.0;
    }
    o.require(fixed, "rest state moved");
    o.note("space orders " + fmt("%.2f", space1) + ", " + fmt("%.2f", space2) + "; time orders " +
           fmt("%.2f", time1) + ", " + fmt("%.2f", time2) + "; max div / tol " + fmt("%.2g", max_div_excess));
    return o;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Outcome determinism() {
    Outcome o;
    const auto root = std::filesystem::temp_directory_path() / "axireg_acceptance_determinism";
    std::filesystem::remove_all(root);
    std::vector<std::string> series;
    for (const char* name : {"first", "second"}) {
        RunConfig cfg;
        cfg.grid.n_r = 33;
        cfg.grid.n_z = 65;
        cfg.solver.nu = 0.1;
        cfg.solver.dt = 2e-3;
        cfg.solver.t_end = 0.1;
        cfg.initial.recipe = "swirl_ring";
        cfg.monitor.cadence = 5;
        cfg.monitor.aq_ensemble = 10;
        cfg.monitor.seed = 4711;
        cfg.monitor.out_dir = root;
        cfg.monitor.name = name;
        const RunResult res = run(cfg);
        o.require(res.trajectory.complete, std::string(name) + " run " + res.trajectory.status);
        series.push_back(slurp(res.dir / "series.csv"));
    }
    o.require(!series[0].empty() && series[0] == series[1], "series.csv differs between runs");
    o.note("two runs, " + std::to_string(series[0].size()) + " identical bytes");
    std::filesystem::remove_all(root);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* name;
        std::function<Outcome()> fn;
    };
    const std::vector<Criterion> criteria = {
        {"exponent algebra", exponent_algebra},
        {"operator convergence", operator_convergence},
        {"quadrature oracle equivalence", quadrature_oracle},
        {"energy identity residuals", identity_residuals},
        {"explicit inequalities", explicit_inequalities},
        {"empirical constants", empirical_constants},
        {"Gronwall tracking", gronwall_tracking},
        {"solver correctness", solver_correctness},
        {"determinism", determinism},
    };
    bool all = true;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = criteria[k].fn();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        std::printf("criterion %zu %s: %s [%.1f s] %s\n", k + 1, o.pass ? "PASS" : "FAIL", criteria[k].name,
                    secs, o.detail.c_str());
        std::fflush(stdout);
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
