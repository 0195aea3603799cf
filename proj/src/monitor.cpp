#include "axireg/monitor.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "axireg/checkpoint.hpp"
#include "axireg/config.hpp"

namespace axireg {

namespace {

constexpr const char* kStatusPrefix = "#status,";

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view s) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
        // from_chars does not accept "inf"/"nan" spelled by to_chars on every
        // platform, so fall back to strtod for those.
        std::string tmp(s);
        char* end = nullptr;
        v = std::strtod(tmp.c_str(), &end);
        if (end != tmp.c_str() + tmp.size()) throw Error("read_series: bad number '" + tmp + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t pos = line.find(sep, start);
        if (pos == std::string_view::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

void write_header(std::ostream& out) {
    const auto& cols = record_columns();
    for (std::size_t k = 0; k < cols.size(); ++k) out << (k ? "," : "") << cols[k];
    out << '\n';
}

void write_row(std::ostream& out, const MonitorRecord& r) {
    const auto vals = record_values(r);
    for (std::size_t k = 0; k < vals.size(); ++k) out << (k ? "," : "") << format_double(vals[k]);
    out << '\n';
}

double label_value(const InequalityReport& r, const std::string& label) {
    for (const auto& c : r.constants_used) {
        if (c.label == label) return c.value;
    }
    throw Error("monitor: chain report " + r.name + " lacks constant '" + label + "'");
}

}  // namespace

void RunConfig::validate() const {
    solver.validate();
    if (grid.n_r < 8 || grid.n_z < 8) throw Error("RunConfig: n_r and n_z must be at least 8");
    if (!(grid.r_max > 0.0 && grid.z_half > 0.0)) throw Error("RunConfig: domain must be positive");
    StencilSpec{grid.stencil_order}.validate();
    (void)params();
    const ValidationReport s = validate_serrin(serrin);
    if (!s.pass()) throw Error("RunConfig: Serrin condition invalid: " + s.violations().front());
    if (monitor.cadence < 1) throw Error("RunConfig: cadence must be at least 1");
    if (monitor.checkpoint_every < 0) throw Error("RunConfig: checkpoint_every must be >= 0");
    if (!(monitor.chain_eps > 0.0)) throw Error("RunConfig: chain_eps must be positive");
    if (!(monitor.safety >= 1.0)) throw Error("RunConfig: safety must be >= 1");
    if (monitor.aq_ensemble < 2) throw Error("RunConfig: aq_ensemble must be at least 2");
    if (monitor.name.empty()) throw Error("RunConfig: empty run name");
}

CriterionParams RunConfig::params() const { return params_from_epsilon(eps, delta0); }

const std::vector<std::string>& record_columns() {
    static const std::vector<std::string> cols = {
        "t",          "phi_p",      "omega_q",  "grad_phi", "grad_omega",
        "axis_phi",   "axis_omega", "damp_phi", "damp_omega", "I1",
        "I2",         "I3",         "f_serrin", "g_ur",     "varpi",
        "r_ut_inf",   "identity_d_residual",    "identity_i_residual",
        "bf_lhs",     "bf_rhs",     "gronwall_bound",       "loglog_bound",
        "al_ratio"};
    return cols;
}

std::vector<double> record_values(const MonitorRecord& r) {
    const FunctionalSet& f = r.f;
    return {r.t,          f.phi_p,      f.omega_q,  f.grad_phi, f.grad_omega,
            f.axis_phi,   f.axis_omega, f.damp_phi, f.damp_omega, f.I1,
            f.I2,         f.I3,         f.f_serrin, f.g_ur,     f.varpi,
            f.r_ut_inf,   r.identity_d_residual,    r.identity_i_residual,
            r.bf_lhs,     r.bf_rhs,     r.gronwall_bound,       r.loglog_bound,
            r.al_ratio};
}

MonitorRecord record_from_values(const std::vector<double>& v) {
    if (v.size() != record_columns().size()) throw Error("record_from_values: wrong column count");
    MonitorRecord r;
    FunctionalSet& f = r.f;
    std::size_t k = 0;
    for (double* dst : {&r.t, &f.phi_p, &f.omega_q, &f.grad_phi, &f.grad_omega, &f.axis_phi,
                        &f.axis_omega, &f.damp_phi, &f.damp_omega, &f.I1, &f.I2, &f.I3,
                        &f.f_serrin, &f.g_ur, &f.varpi, &f.r_ut_inf, &r.identity_d_residual,
                        &r.identity_i_residual, &r.bf_lhs, &r.bf_rhs, &r.gronwall_bound,
                        &r.loglog_bound, &r.al_ratio}) {
        *dst = v[k++];
    }
    return r;
}

void write_series(std::ostream& out, const Trajectory& traj) {
    write_header(out);
    for (const auto& r : traj.records) write_row(out, r);
    out << kStatusPrefix << traj.status << '\n';
}

void write_series(const std::filesystem::path& path, const Trajectory& traj) {
    std::ofstream out(path);
    if (!out) throw Error("write_series: cannot open " + path.string());
    write_series(out, traj);
}

Trajectory read_series(std::istream& in) {
    Trajectory traj;
    std::string line;
    if (!std::getline(in, line)) throw Error("read_series: empty input");
    const auto head = split(line, ',');
    const auto& cols = record_columns();
    if (head.size() != cols.size() || !std::equal(head.begin(), head.end(), cols.begin())) {
        throw Error("read_series: header does not match the record columns");
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line.rfind(kStatusPrefix, 0) == 0) {
            traj.status = line.substr(std::string_view(kStatusPrefix).size());
            traj.complete = traj.status == "completed";
            continue;
        }
        const auto cells = split(line, ',');
        std::vector<double> vals;
        vals.reserve(cells.size());
        for (auto c : cells) vals.push_back(parse_double(c));
        traj.records.push_back(record_from_values(vals));
    }
    return traj;
}

Trajectory read_series(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("read_series: cannot open " + path.string());
    return read_series(in);
}

double compose_constant(const CriterionParams& c, double C_I1, double C_I2, double C_I3) {
    return std::max(c.p, c.q) *
           std::max((1.0 + c.mu) * C_I1 + 2.0 * C_I3, (1.0 - c.alpha) * C_I2);
}

double ln_plus(double x) { return x > 1.0 ? std::log(x) : 0.0; }

std::vector<double> gronwall_bound(const std::vector<double>& t, const std::vector<double>& a,
                                   double y0, double C) {
    return gronwall_bound(t, a, y0, std::vector<double>(t.size(), C));
}

std::vector<double> gronwall_bound(const std::vector<double>& t, const std::vector<double>& a,
                                   double y0, const std::vector<double>& C) {
    if (t.size() != a.size() || t.size() != C.size()) throw Error("gronwall_bound: size mismatch");
    std::vector<double> out(t.size());
    double integral = 0.0;
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (k > 0) integral += 0.5 * (a[k] + a[k - 1]) * (t[k] - t[k - 1]);
        out[k] = y0 * std::exp(C[k] * integral);
    }
    return out;
}

std::vector<double> loglog_gronwall(const std::vector<double>& t, const std::vector<double>& a,
                                    double y0, double C) {
    if (t.size() != a.size()) throw Error("loglog_gronwall: size mismatch");
    std::vector<double> out(t.size());
    if (t.empty()) return out;
    if (y0 <= 0.0) return out;  // y stays 0 by the plain bound
    double logB = std::log(y0);
    out[0] = y0;
    for (std::size_t k = 1; k < t.size(); ++k) {
        double delta = C * 0.5 * (a[k] + a[k - 1]) * (t[k] - t[k - 1]);
        if (logB < 0.0) {
            // Plain Gronwall until the bound reaches 1.
            const double to_one = -logB;
            if (delta <= to_one) {
                logB += delta;
                out[k] = std::exp(logB);
                continue;
            }
            delta -= to_one;
            logB = 0.0;
        }
        logB = (1.0 + logB) * std::exp(delta) - 1.0;
        out[k] = std::exp(logB);
    }
    return out;
}

RunResult run(const RunConfig& cfg) {
    cfg.validate();
    const CriterionParams c = cfg.params();
    const MonitorSettings& mon = cfg.monitor;
    const GridPtr grid =
        make_grid(cfg.grid.r_max, cfg.grid.z_half, cfg.grid.n_r, cfg.grid.n_z);
    const StencilSpec stencil{cfg.grid.stencil_order};
    const FunctionalOptions fo{Quadrature::AxisCorrected, stencil};
    const ChainOptions co{stencil, mon.safety};
    const double nu = cfg.solver.nu;
    const double dt = cfg.solver.dt;
    const double e = mon.chain_eps;

    RunResult res;
    res.dir = mon.out_dir / mon.name;
    std::ofstream csv;
    if (mon.write_files) {
        std::filesystem::create_directories(res.dir / "checkpoints");
        csv.open(res.dir / "series.csv");
        if (!csv) throw Error("run: cannot open " + (res.dir / "series.csv").string());
        write_header(csv);
    }

    res.aq_weighted = estimate_aq_constant(c.q, c.alpha, c.eps0, mon.aq_ensemble, grid, mon.seed);
    res.aq_unweighted =
        estimate_aq_constant(c.q, c.alpha, 2.0 / c.q, mon.aq_ensemble, grid, mon.seed + 1);

    std::vector<double> ts, a_plain, a_log, c_run;
    double y0 = 0.0;
    double C_run = 0.0;
    ComposedConstant last;
    Trajectory& traj = res.trajectory;
    int records_since_ckpt = 0;

    const auto checkpoint = [&](const AxisymState& s, long step) {
        if (!mon.write_files) return;
        write_checkpoint(res.dir / "checkpoints" / ("step_" + std::to_string(step) + ".axrg"), s);
    };

    const auto record = [&](const AxisymState& row, const AxisymState& sa, const AxisymState& sb,
                            long step) {
        const FunctionalSet Fa = evaluate_functionals(sa, c, cfg.serrin, fo);
        const FunctionalSet Fb = evaluate_functionals(sb, c, cfg.serrin, fo);
        const FunctionalSet& Fr = (&row == &sa) ? Fa : Fb;
        const IdentityTerms d = identity_d_from(Fa, Fb, sb.t - sa.t, c, nu);
        const IdentityTerms i = identity_i_from(Fa, Fb, sb.t - sa.t, c, nu);

        const InequalityReport r3 = verify_I3_chain(row, c, e, e, e, co);
        const InequalityReport r1 =
            verify_I1_chain(row, c, c.delta0, e, e, res.aq_weighted.sup_ratio, co);
        const InequalityReport r2 = verify_I2_chain(row, cfg.serrin, c.q, c.alpha, e, e, co);
        for (const auto* r : {&r1, &r2, &r3}) {
            if (!r->pass && !r->inconclusive) ++res.chain_failures;
        }
        ComposedConstant cc;
        cc.C_I3 = label_value(r3, "C");
        cc.C_I1 = r1.inconclusive ? 0.0 : label_value(r1, "C");
        cc.C_I2 = std::max(label_value(r2, "C near axis"), label_value(r2, "C far field"));
        cc.C = compose_constant(c, cc.C_I1, cc.C_I2, cc.C_I3);
        cc.parts = {{"C_I1", cc.C_I1, "empirical"},
                    {"C_I2", cc.C_I2, "explicit with literature Sobolev constant"},
                    {"C_I3", cc.C_I3, "explicit"}};
        if (cc.C >= C_run) last = cc;
        C_run = std::max(C_run, cc.C);

        MonitorRecord rec;
        rec.t = row.t;
        rec.f = Fr;
        rec.identity_d_residual = d.residual;
        rec.identity_i_residual = i.residual;
        rec.bf_lhs = (Fb.phi_p - Fa.phi_p) / dt + (Fb.omega_q - Fa.omega_q) / dt +
                     4.0 * (c.p - 1.0) * nu / c.p * Fr.grad_phi +
                     4.0 * nu * (c.q - 1.0) / c.q * Fr.grad_omega +
                     nu * (1.0 - c.mu * c.mu) * Fr.axis_phi +
                     nu * (1.0 - c.alpha * c.alpha) * Fr.axis_omega;
        rec.bf_rhs = C_run * (1.0 + Fr.f_serrin + Fr.g_ur) * Fr.omega_q;

        if (ts.empty()) y0 = Fr.phi_p + Fr.omega_q;
        ts.push_back(row.t);
        a_plain.push_back(1.0 + Fr.f_serrin + Fr.g_ur);
        a_log.push_back(1.0 + (Fr.f_serrin + Fr.g_ur) / (1.0 + ln_plus(Fr.phi_p + Fr.omega_q)));
        c_run.push_back(C_run);
        rec.gronwall_bound = gronwall_bound(ts, a_plain, y0, std::vector<double>(ts.size(), C_run)).back();
        rec.loglog_bound = loglog_gronwall(ts, a_log, y0, C_run).back();

        const AqIntegrals al = aq_integrals(row, c.q, c.alpha, 2.0 / c.q);
        rec.al_ratio = al.rhs > 0.0 ? al.lhs / al.rhs : (al.lhs > 0.0 ? HUGE_VAL : 0.0);

        traj.records.push_back(rec);
        if (mon.write_files) {
            write_row(csv, rec);
            csv.flush();
        }
        if (mon.checkpoint_every > 0 && ++records_since_ckpt >= mon.checkpoint_every) {
            checkpoint(row, step);
            records_since_ckpt = 0;
        }
    };

    const long n_total = std::lround(cfg.solver.t_end / dt);
    try {
        const AxiSolver solver(grid, cfg.solver);
        AxisymState state = solver.prepare(make_initial_state(cfg.initial, grid));
        refresh_vorticity(state, stencil);
        AxisymState prev = state;
        for (long n = 0; n < n_total; ++n) {
            AxisymState next = solver.step(state);
            refresh_vorticity(next, stencil);
            if (n % mon.cadence == 0) record(state, state, next, n);
            prev = std::move(state);
            state = std::move(next);
        }
        if (n_total > 0 && n_total % mon.cadence == 0) record(state, prev, state, n_total);
        checkpoint(state, n_total);
        traj.complete = true;
        traj.status = "completed";
    } catch (const std::exception& ex) {
        traj.complete = false;
        traj.status = std::string("failed: ") + ex.what();
        // Keep a single line so the status row stays one CSV row.
        std::replace(traj.status.begin(), traj.status.end(), '\n', ' ');
    }
    res.composed_C = C_run;

    if (mon.write_files) {
        csv << kStatusPrefix << traj.status << '\n';
        csv.close();
        const Verdict v = verdict(traj, c, cfg.serrin, res.aq_unweighted.sup_ratio * mon.safety);
        nlohmann::json parts = nlohmann::json::array();
        for (const auto& p : last.parts) {
            parts.push_back({{"label", p.label}, {"value", p.value}, {"provenance", p.provenance}});
        }
        const auto est = [](const AqEstimate& a) {
            return nlohmann::json{{"sup_ratio", a.sup_ratio},
                                  {"members", a.ratios.size()},
                                  {"skipped", a.skipped},
                                  {"growth", a.growth}};
        };
        nlohmann::json meta = {
            {"config", to_json(cfg)},
            {"params", to_json(c)},
            {"composed_constant",
             {{"C", C_run},
              {"formula", "max(p,q) * max((1+mu) C_I1 + 2 C_I3, (1-alpha) C_I2)"},
              {"parts", parts},
              {"chain_eps", e},
              {"safety", mon.safety}}},
            {"calibration",
             {{"aq_weighted", est(res.aq_weighted)}, {"aq_unweighted", est(res.aq_unweighted)}}},
            {"chain_failures", res.chain_failures},
            {"status", traj.status},
            {"verdict", to_json(v)}};
        std::ofstream(res.dir / "meta.json") << meta.dump(2) << '\n';
    }
    return res;
}

std::string to_string(Verdict::Status s) {
    switch (s) {
        case Verdict::Status::Consistent: return "consistent";
        case Verdict::Status::Violated: return "violated";
        case Verdict::Status::Inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

Verdict verdict(const Trajectory& traj, const CriterionParams& params,
                const SerrinCondition& cond, double al_constant) {
    Verdict v;
    if (traj.records.empty() || !traj.complete) {
        v.status = Verdict::Status::Inconclusive;
        v.summary = traj.records.empty() ? "inconclusive: empty trajectory"
                                         : "inconclusive: incomplete trajectory (" + traj.status + ")";
        return v;
    }

    {
        VerdictCheck ck{"omega_q below Gronwall bound", true, ""};
        for (const auto& r : traj.records) {
            if (r.f.omega_q > r.gronwall_bound * (1.0 + 1e-12)) {
                ck.pass = false;
                ck.detail = "exceeded at t = " + format_double(r.t);
                break;
            }
        }
        v.checks.push_back(ck);
    }
    {
        VerdictCheck ck{"weighted radial ratio finite and bounded", true, ""};
        double worst = 0.0;
        for (const auto& r : traj.records) {
            if (!std::isfinite(r.al_ratio) || r.al_ratio > al_constant) {
                ck.pass = false;
                ck.detail = "ratio " + format_double(r.al_ratio) + " at t = " + format_double(r.t) +
                            " against " + format_double(al_constant);
                break;
            }
            worst = std::max(worst, r.al_ratio);
        }
        if (ck.pass) ck.detail = "max ratio " + format_double(worst);
        v.checks.push_back(ck);
    }
    for (const auto& rep : validate_all(params, cond)) {
        VerdictCheck ck{"window " + rep.name, rep.pass(), ""};
        if (!rep.pass()) ck.detail = rep.violations().front();
        v.checks.push_back(ck);
    }

    const auto bad = std::find_if(v.checks.begin(), v.checks.end(),
                                  [](const VerdictCheck& c) { return !c.pass; });
    if (bad == v.checks.end()) {
        v.status = Verdict::Status::Consistent;
        v.summary =
            "criterion hypotheses numerically consistent; the regularity conclusion rests on an "
            "external theorem invoked, not verified here";
    } else {
        v.status = Verdict::Status::Violated;
        v.summary = "first violated check: " + bad->name + (bad->detail.empty() ? "" : " (" + bad->detail + ")");
    }
    return v;
}

nlohmann::json to_json(const Verdict& v) {
    nlohmann::json checks = nlohmann::json::array();
    for (const auto& c : v.checks) {
        checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    }
    return nlohmann::json{{"status", to_string(v.status)}, {"summary", v.summary}, {"checks", checks}};
}

}  // namespace axireg
