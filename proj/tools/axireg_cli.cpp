// Command-line front end: parameter validation, simulation runs, inequality
// checks on random ensembles, quadrature self-checks and run reports.

#include <CLI11.hpp>

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>

#include "axireg/config.hpp"
#include "axireg/ensemble.hpp"
#include "axireg/exponents.hpp"
#include "axireg/functionals.hpp"
#include "axireg/inequalities.hpp"
#include "axireg/monitor.hpp"

using namespace axireg;

namespace {

struct Common {
    std::optional<std::uint64_t> seed;
};

int cmd_validate(double eps, double delta0, const SerrinCondition& cond) {
    const CriterionParams c = params_from_epsilon(eps, delta0);
    nlohmann::json reports = nlohmann::json::array();
    bool ok = true;
    for (const auto& r : validate_all(c, cond)) {
        reports.push_back(to_json(r));
        ok = ok && r.pass();
    }
    const ValidationReport bw = validate_b_window(c);
    reports.push_back(to_json(bw));
    ok = ok && bw.pass();
    std::cout << nlohmann::json{{"params", to_json(c)}, {"reports", reports}, {"pass", ok}}.dump(2)
              << '\n';
    return ok ? 0 : 1;
}

int cmd_simulate(const std::string& config_path, const std::vector<std::string>& sets,
                 const Common& common) {
    RunConfig cfg = config_path.empty() ? RunConfig{} : load_run_config(config_path);
    for (const auto& s : sets) apply_override(cfg, s);
    if (common.seed) cfg.monitor.seed = *common.seed;
    const RunResult res = run(cfg);
    const CriterionParams c = cfg.params();
    const Verdict v = verdict(res.trajectory, c, cfg.serrin,
                              res.aq_unweighted.sup_ratio * cfg.monitor.safety);
    std::cout << "run: " << res.dir.string() << '\n'
              << "status: " << res.trajectory.status << '\n'
              << "records: " << res.trajectory.records.size() << '\n'
              << "composed C: " << res.composed_C << '\n'
              << "verdict: " << v.summary << '\n';
    return res.trajectory.complete ? 0 : 2;
}

int cmd_verify(double eps, double delta0, std::size_t count, std::size_t n, double chain_eps,
               double safety, const Common& common) {
    const CriterionParams c = params_from_epsilon(eps, delta0);
    const SerrinCondition cond;
    const std::uint64_t seed = common.seed.value_or(1);
    const GridPtr grid = make_grid(4.0, 4.0, n, n);
    const ChainOptions opt{StencilSpec{2}, safety};
    const AqEstimate aq = estimate_aq_constant(c.q, c.alpha, c.eps0, count, grid, seed);
    nlohmann::json out = nlohmann::json::array();
    bool explicit_ok = true;
    // Held-out members come from a different seed than the calibration set.
    const auto members = make_ensemble(seed + 1000003, count);
    for (std::size_t k = 0; k < members.size(); ++k) {
        const AxisymState s = sample_member(members[k], grid);
        const InequalityReport r3 = verify_I3_chain(s, c, chain_eps, chain_eps, chain_eps, opt);
        const InequalityReport r1 =
            verify_I1_chain(s, c, delta0, chain_eps, chain_eps, aq.sup_ratio, opt);
        const InequalityReport r2 = verify_I2_chain(s, cond, c.q, c.alpha, chain_eps, chain_eps, opt);
        explicit_ok = explicit_ok && r3.pass;
        for (const auto* r : {&r3, &r1, &r2}) {
            nlohmann::json j = to_json(*r);
            j["member"] = k;
            out.push_back(j);
        }
    }
    std::cout << out.dump(2) << '\n';
    return explicit_ok ? 0 : 1;
}

int cmd_oracle(double eps, double delta0, std::size_t n, std::size_t nz, std::size_t count,
               const Common& common) {
    if (nz == 0) nz = 2 * n - 1;
    const CriterionParams c = params_from_epsilon(eps, delta0);
    const SerrinCondition cond;
    const GridPtr coarse = make_grid(4.0, 4.0, n, nz);
    const GridPtr fine = make_grid(4.0, 4.0, 4 * (n - 1) + 1, 4 * (nz - 1) + 1);
    const FunctionalOptions opt{Quadrature::AxisCorrected, StencilSpec{4}};
    const auto members = make_ensemble(common.seed.value_or(1), count);
    nlohmann::json out = nlohmann::json::array();
    double worst = 0.0;
    for (std::size_t k = 0; k < members.size(); ++k) {
        const FunctionalSet a = evaluate_functionals(sample_member(members[k], coarse), c, cond, opt);
        const FunctionalSet b = evaluate_functionals(sample_member(members[k], fine), c, cond, opt);
        const auto rel = [](double x, double y) {
            return std::abs(x - y) / std::max(std::abs(y), 1e-300);
        };
        nlohmann::json j = {{"member", k},
                            {"phi_p", rel(a.phi_p, b.phi_p)},
                            {"omega_q", rel(a.omega_q, b.omega_q)},
                            {"I1", rel(a.I1, b.I1)},
                            {"I2", rel(a.I2, b.I2)},
                            {"I3", rel(a.I3, b.I3)},
                            {"f_serrin", rel(a.f_serrin, b.f_serrin)},
                            {"g_ur", rel(a.g_ur, b.g_ur)}};
        for (const auto& [key, val] : j.items()) {
            if (key != "member") worst = std::max(worst, val.get<double>());
        }
        out.push_back(j);
    }
    std::cout << nlohmann::json{{"relative_differences", out}, {"max", worst}}.dump(2) << '\n';
    return 0;
}

int cmd_report(const std::string& dir) {
    const std::filesystem::path root(dir);
    const Trajectory traj = read_series(root / "series.csv");
    std::ifstream meta_in(root / "meta.json");
    if (!meta_in) throw Error("report: missing meta.json in " + dir);
    const nlohmann::json meta = nlohmann::json::parse(meta_in);
    const auto& crit = meta.at("config").at("criterion");
    const CriterionParams c =
        params_from_epsilon(crit.at("eps").get<double>(), crit.at("delta0").get<double>());
    const auto& sj = meta.at("config").at("serrin");
    SerrinCondition cond{sj.at("s").get<double>(), sj.at("w").get<double>(), sj.at("d").get<double>(),
                         sj.at("delta1").get<double>()};
    const double safety = meta.at("config").at("monitor").at("safety").get<double>();
    const double al = meta.at("calibration").at("aq_unweighted").at("sup_ratio").get<double>() * safety;
    const Verdict v = verdict(traj, c, cond, al);
    double sup_omega = 0.0;
    for (const auto& r : traj.records) sup_omega = std::max(sup_omega, r.f.omega_q);
    std::cout << nlohmann::json{{"records", traj.records.size()},
                                {"status", traj.status},
                                {"sup_omega_q", sup_omega},
                                {"composed_constant", meta.at("composed_constant")},
                                {"verdict", to_json(v)}}
                     .dump(2)
              << '\n';
    return v.status == Verdict::Status::Violated ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Weighted regularity-criterion monitor for axisymmetric Navier-Stokes flows"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--seed", common.seed, "Seed for every random ensemble");

    double eps = 0.05, delta0 = 0.2;
    SerrinCondition cond;
    auto* val = app.add_subcommand("validate-params", "Check every exponent window");
    val->add_option("--eps", eps, "Family parameter in (0, 1/14)");
    val->add_option("--delta0", delta0, "Swirl decay exponent");
    val->add_option("--s", cond.s);
    val->add_option("--w", cond.w);
    val->add_option("--d", cond.d);
    val->add_option("--delta1", cond.delta1);

    std::string config_path;
    std::vector<std::string> sets;
    auto* sim = app.add_subcommand("simulate", "Run and monitor a simulation");
    sim->add_option("-c,--config", config_path, "INI configuration file")->check(CLI::ExistingFile);
    sim->add_option("--set", sets, "Override, e.g. solver.dt=5e-4 (repeatable)");

    std::size_t count = 20, n = 65;
    double chain_eps = 0.1, safety = 2.0;
    auto* ver = app.add_subcommand("verify", "Check the estimate chains on a random ensemble");
    ver->add_option("--eps", eps);
    ver->add_option("--delta0", delta0);
    ver->add_option("--count", count, "Ensemble size");
    ver->add_option("--n", n, "Nodes per direction");
    ver->add_option("--chain-eps", chain_eps);
    ver->add_option("--safety", safety);

    auto* ora = app.add_subcommand("oracle-quadrature",
                                   "Compare functionals against a 4x refined evaluation");
    ora->add_option("--eps", eps);
    ora->add_option("--delta0", delta0);
    ora->add_option("--n", n, "Radial nodes of the coarse grid");
    std::size_t nz = 0;
    ora->add_option("--nz", nz, "Axial nodes of the coarse grid (default 2n-1)");
    ora->add_option("--count", count, "Ensemble size");

    std::string run_dir;
    auto* rep = app.add_subcommand("report", "Summarize a finished run");
    rep->add_option("run_dir", run_dir, "Directory holding series.csv and meta.json")->required();

    CLI11_PARSE(app, argc, argv);
    try {
        if (*val) return cmd_validate(eps, delta0, cond);
        if (*sim) return cmd_simulate(config_path, sets, common);
        if (*ver) return cmd_verify(eps, delta0, count, n, chain_eps, safety, common);
        if (*ora) return cmd_oracle(eps, delta0, n, nz, count, common);
        if (*rep) return cmd_report(run_dir);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    }
    return 0;
}
