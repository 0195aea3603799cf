#include "axireg/inequalities.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "axireg/functionals.hpp"

namespace axireg {

namespace {

constexpr double kConjugateTol = 1e-12;

FunctionalOptions trapezoid(const ChainOptions& opt) {
    return FunctionalOptions{Quadrature::Trapezoid, opt.stencil};
}

void require_pass(const ValidationReport& r, const char* where) {
    if (r.pass()) return;
    std::ostringstream os;
    os << where << ": " << r.name << " violated:";
    for (const auto& v : r.violations()) os << " [" << v << "]";
    throw Error(os.str());
}

// log of young_constant, usable when the constant itself would overflow.
double log_young_constant(double eps, double p_exp, double q_exp) {
    return -std::log(q_exp) - (q_exp / p_exp) * std::log(eps * p_exp);
}

void check_conjugate(double p_exp, double q_exp) {
    if (!(p_exp > 1.0 && q_exp > 1.0) ||
        std::abs(1.0 / p_exp + 1.0 / q_exp - 1.0) > kConjugateTol) {
        std::ostringstream os;
        os << "young: exponents " << p_exp << ", " << q_exp << " are not conjugate";
        throw Error(os.str());
    }
}

template <class Fn>
double trapezoid_sum(const GridPtr& grid, Fn&& fn) {
    const CylGrid& g = *grid;
    ScalarField2D integrand(grid, Parity::Even);
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) integrand(i, j) = fn(i, j, g.r(i));
    }
    return integrate_cyl(integrand);
}

void add_term(InequalityReport& rep, const std::string& label, double coef, double integral) {
    rep.terms.push_back({label, coef, integral});
}

double sum_terms(const InequalityReport& rep) {
    double s = 0.0;
    for (const auto& t : rep.terms) {
        if (t.coefficient != 0.0) s += t.coefficient * t.integral;
    }
    return s;
}

}  // namespace

double sobolev_constant_sq() {
    return std::pow(2.0 / std::numbers::pi, 4.0 / 3.0) / 3.0;
}

void InequalityReport::finalize() {
    margin = rhs - lhs;
    const double scale = std::max({std::abs(lhs), std::abs(rhs), 1.0});
    const bool books =
        std::all_of(bookkeeping.begin(), bookkeeping.end(), [](const WindowCheck& c) { return c.pass; });
    pass = !inconclusive && std::isfinite(rhs) && std::isfinite(lhs) &&
           margin >= -kReportRelTol * scale && books;
}

double InequalityReport::coefficient(const std::string& label) const {
    for (const auto& t : terms) {
        if (t.label == label) return t.coefficient;
    }
    return 0.0;
}

double young_constant(double eps, double p_exp, double q_exp) {
    check_conjugate(p_exp, q_exp);
    if (!(eps > 0.0)) throw Error("young: eps must be positive");
    return std::exp(log_young_constant(eps, p_exp, q_exp));
}

YoungBound young(double A, double B, double p_exp, double q_exp, double eps) {
    check_conjugate(p_exp, q_exp);
    if (!(eps > 0.0)) throw Error("young: eps must be positive");
    if (!(A >= 0.0 && B >= 0.0)) throw Error("young: arguments must be nonnegative");
    YoungBound y;
    y.constant = young_constant(eps, p_exp, q_exp);
    y.first = eps * std::pow(A, p_exp);
    y.second = B == 0.0 ? 0.0
                        : std::exp(log_young_constant(eps, p_exp, q_exp) + q_exp * std::log(B));
    return y;
}

double young_multi(const std::vector<double>& x, const std::vector<double>& exps) {
    if (x.size() != exps.size() || x.empty()) throw Error("young_multi: size mismatch");
    double recip = 0.0;
    for (double e : exps) {
        if (!(e > 1.0)) throw Error("young_multi: exponents must exceed 1");
        recip += 1.0 / e;
    }
    if (std::abs(recip - 1.0) > kConjugateTol) {
        throw Error("young_multi: reciprocal exponents do not sum to 1");
    }
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (!(x[k] >= 0.0)) throw Error("young_multi: arguments must be nonnegative");
        s += std::pow(x[k], exps[k]) / exps[k];
    }
    return s;
}

InequalityReport verify_holder_step(const ScalarField2D& f, const ScalarField2D& g, double p,
                                    double q) {
    check_conjugate(p, q);
    f.require_same_grid(g);
    const GridPtr& grid = f.grid_ptr();
    InequalityReport rep;
    rep.name = "holder";
    rep.lhs = trapezoid_sum(grid, [&](std::size_t i, std::size_t j, double) {
        return std::abs(f(i, j) * g(i, j));
    });
    const double fp = trapezoid_sum(
        grid, [&](std::size_t i, std::size_t j, double) { return std::pow(std::abs(f(i, j)), p); });
    const double gq = trapezoid_sum(
        grid, [&](std::size_t i, std::size_t j, double) { return std::pow(std::abs(g(i, j)), q); });
    rep.rhs = std::pow(fp, 1.0 / p) * std::pow(gq, 1.0 / q);
    rep.constants_used.push_back({"holder", 1.0, "explicit"});
    rep.finalize();
    return rep;
}

InequalityReport verify_I3_chain(const AxisymState& s, const CriterionParams& c, double eps1,
                                 double eps2, double eps3, const ChainOptions& opt) {
    require_pass(validate_prop_I3(c), "verify_I3_chain");
    if (!(eps1 > 0.0 && eps2 > 0.0 && eps3 > 0.0)) {
        throw Error("verify_I3_chain: eps1, eps2, eps3 must be positive");
    }
    const FunctionalOptions fo = trapezoid(opt);
    InequalityReport rep;
    rep.name = "I3_chain";
    rep.lhs = std::abs(eval_I3(s, c, fo));

    const double K = eval_r_ut_inf(s);
    if (!std::isfinite(K)) throw Error("verify_I3_chain: ||r u_theta||_inf is not finite");
    const double P1 = c.q / (2.0 - c.q);
    const double P2 = c.q / (2.0 * (c.q - 1.0) * c.a);
    const double P3 = c.q / (2.0 * (c.q - 1.0) * (1.0 - c.a));
    rep.bookkeeping.push_back({"1/P1 + 1/P2 + 1/P3 = 1",
                               std::abs(1.0 / P1 + 1.0 / P2 + 1.0 / P3 - 1.0) <= kIdentityTol,
                               1.0 / P1 + 1.0 / P2 + 1.0 / P3, 1.0, 1.0, 0.0});

    double C = 0.0;
    if (K > 0.0) {
        const double logKg = c.gamma * std::log(K);
        const double log_pref = logKg - std::log(4.0 * eps1);
        const double log_l1 = (std::log(eps2 * P1 * 4.0 * eps1) - logKg) / P1;
        const double log_l2 = (std::log(eps3 * P2 * 4.0 * eps1) - logKg) / P2;
        C = std::exp(log_pref - std::log(P3) - P3 * (log_l1 + log_l2));
    }
    rep.constants_used.push_back({"||r u_theta||_inf", K, "explicit"});
    rep.constants_used.push_back({"young(2,2)", 1.0 / (4.0 * eps1), "explicit"});
    rep.constants_used.push_back({"C", C, "explicit"});

    add_term(rep, "swirl_z_energy", eps1, eval_swirl_z_energy(s, c, fo));
    add_term(rep, "axis_phi", eps2, eval_axis_weighted(s.u_theta, c.mu, c.p, fo));
    add_term(rep, "axis_omega", eps3, eval_axis_weighted(s.omega_theta, c.alpha, c.q, fo));
    add_term(rep, "omega_q", C, weighted_lp(s.omega_theta, c.alpha, c.q, Quadrature::Trapezoid));
    if (!std::isfinite(C)) rep.note = "constant overflow";
    rep.rhs = sum_terms(rep);
    rep.finalize();
    return rep;
}

AqIntegrals aq_integrals(const AxisymState& s, double q, double alpha, double eps0,
                         Quadrature rule) {
    const GridPtr& grid = s.u_r.grid_ptr();
    const CylGrid& g = *grid;
    const double wexp = -(2.0 - eps0 * q);
    ScalarField2D lhs(grid, Parity::Even), rhs(grid, Parity::Even);
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const double r = g.r(i);
        const double rw = std::pow(r, wexp);
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            lhs(i, j) = std::pow(std::abs(s.u_r(i, j)) * std::pow(r, -(1.0 + alpha)), q) * rw;
            rhs(i, j) = std::pow(std::abs(s.omega_theta(i, j)) * std::pow(r, -alpha), q) * rw;
        }
    }
    AqIntegrals out;
    out.lhs = integrate_cyl(lhs, rule, -q * alpha + wexp);
    out.rhs = integrate_cyl(rhs, rule, q * (1.0 - alpha) + wexp);
    return out;
}

AqEstimate estimate_aq_constant(double q, double alpha, double eps0,
                                const std::vector<AxisymState>& states) {
    require_pass(validate_aq_window(q, alpha, eps0), "estimate_aq_constant");
    AqEstimate est;
    double sup_half = 0.0;
    const std::size_t half = (states.size() + 1) / 2;
    for (std::size_t k = 0; k < states.size(); ++k) {
        const AqIntegrals v = aq_integrals(states[k], q, alpha, eps0);
        if (v.rhs == 0.0) {
            if (v.lhs > 0.0) {
                throw Error("estimate_aq_constant: member " + std::to_string(k) +
                            " has zero vorticity but nonzero radial velocity");
            }
            ++est.skipped;
            continue;
        }
        const double ratio = v.lhs / v.rhs;
        est.ratios.push_back(ratio);
        est.sup_ratio = std::max(est.sup_ratio, ratio);
        if (k < half) sup_half = std::max(sup_half, ratio);
    }
    est.growth = sup_half > 0.0 ? est.sup_ratio / sup_half - 1.0 : 0.0;
    return est;
}

AqEstimate estimate_aq_constant(double q, double alpha, double eps0, std::size_t ensemble_size,
                                const GridPtr& grid, std::uint64_t seed,
                                const EnsembleRanges& ranges) {
    std::vector<AxisymState> states;
    states.reserve(ensemble_size);
    for (const auto& m : make_ensemble(seed, ensemble_size, ranges)) {
        states.push_back(sample_member(m, grid));
    }
    return estimate_aq_constant(q, alpha, eps0, states);
}

InequalityReport verify_I1_chain(const AxisymState& s, const CriterionParams& c, double delta0,
                                 double eps4, double eps5, std::optional<double> aq_constant,
                                 const ChainOptions& opt) {
    require_pass(validate_prop_I1(c, delta0), "verify_I1_chain");
    const double eps0 = c.kappa + delta0 * c.p / c.q;
    const double b = 1.0 - c.q * eps0 / 2.0;
    require_pass(validate_aq_window(c.q, c.alpha, eps0), "verify_I1_chain");
    if (!(b > 0.0 && b < 1.0)) {
        throw Error("verify_I1_chain: b = 1 - q eps0/2 outside (0,1); raise delta0");
    }
    if (!(eps4 > 0.0 && eps5 > 0.0)) throw Error("verify_I1_chain: eps4, eps5 must be positive");

    const FunctionalOptions fo = trapezoid(opt);
    InequalityReport rep;
    rep.name = "I1_chain";
    rep.lhs = eval_I1(s, c, fo);

    // The radial power left after the first Young step must equal the A_q weight.
    const double e_step = -c.q - (1.0 - delta0) * c.p - c.mu * c.p + 2.0 * (c.q - 1.0);
    const double e_aq = -c.q * (1.0 + c.alpha) - (2.0 - eps0 * c.q);
    rep.bookkeeping.push_back({"step-1 radial power = A_q weight power",
                               std::abs(e_step - e_aq) <= kIdentityTol, e_step, e_aq, e_aq, 0.0});

    const double varpi = eval_varpi(s, delta0);
    if (!std::isfinite(varpi)) throw Error("verify_I1_chain: varpi is not finite");

    add_term(rep, "axis_phi", eps4, eval_axis_weighted(s.u_theta, c.mu, c.p, fo));
    add_term(rep, "axis_omega", eps5, eval_axis_weighted(s.omega_theta, c.alpha, c.q, fo));
    const double omega = weighted_lp(s.omega_theta, c.alpha, c.q, Quadrature::Trapezoid);

    rep.constants_used.push_back({"varpi", varpi, "explicit"});
    if (!aq_constant || !std::isfinite(*aq_constant) || *aq_constant < 0.0) {
        rep.inconclusive = true;
        rep.note = "empirical A_q constant unavailable";
        add_term(rep, "omega_q", 0.0, omega);
        rep.rhs = sum_terms(rep);
        rep.finalize();
        return rep;
    }
    const double caq = *aq_constant * opt.safety;
    rep.constants_used.push_back({"A_q", caq, "empirical"});
    const AqIntegrals aq = aq_integrals(s, c.q, c.alpha, eps0);
    if (aq.rhs > 0.0) rep.constants_used.push_back({"A_q ratio (this state)", aq.lhs / aq.rhs, "diagnostic"});

    double C = 0.0;
    if (varpi > 0.0 && caq > 0.0) {
        const double logK1 =
            log_young_constant(eps4, c.q / (c.q - 1.0), c.q) + c.p * std::log(varpi) + std::log(caq);
        C = std::exp(log_young_constant(eps5, 1.0 / b, 1.0 / (1.0 - b)) + logK1 / (1.0 - b));
    }
    rep.constants_used.push_back({"C", C, "empirical"});
    if (!std::isfinite(C)) rep.note = "constant overflow";
    add_term(rep, "omega_q", C, omega);
    rep.rhs = sum_terms(rep);
    rep.finalize();
    return rep;
}

InequalityReport verify_I2_chain(const AxisymState& s, const SerrinCondition& cond, double q,
                                 double alpha, double eps1, double eps2, const ChainOptions& opt) {
    require_pass(validate_serrin(cond), "verify_I2_chain");
    if (!(q > 1.0)) throw Error("verify_I2_chain: need q > 1");
    if (!(alpha > -1.0 && alpha < 1.0)) throw Error("verify_I2_chain: need alpha in (-1,1)");
    if (!(eps1 > 0.0 && eps2 > 0.0)) throw Error("verify_I2_chain: eps1, eps2 must be positive");

    CriterionParams c;
    c.q = q;
    c.alpha = alpha;
    const FunctionalOptions fo = trapezoid(opt);
    InequalityReport rep;
    rep.name = "I2_chain";
    rep.lhs = eval_I2(s, c, fo);

    const SerrinDerived ab = derived_ab(cond);
    const double a = ab.a, b = ab.b;
    const auto ident = [&](const std::string& name, double v, double target) {
        rep.bookkeeping.push_back(
            {name, std::abs(v - target) <= kIdentityTol, v, target, target, 0.0});
    };
    ident("ab/(2(a-1)) = s", a * b / (2.0 * (a - 1.0)), cond.s);
    ident("b(2-a)/(2(a-1)) = d s", b * (2.0 - a) / (2.0 * (a - 1.0)), cond.d * cond.s);
    ident("2/(b-3) = w/s", 2.0 / (b - 3.0), cond.w / cond.s);
    ident("far field: (b/2) a/(a-1) = 10/3", 2.5 * 4.0 / 3.0, 10.0 / 3.0);

    const double S = sobolev_constant_sq() * opt.safety;
    // eta + (1 - eta) = 1, so both parts share eps1; each Sobolev step takes eps2/2.
    const double e1 = eps1, e2 = 0.5 * eps2;

    // Near-axis part: Young(a, a'), Hoelder(b/2, b/(b-2)), interpolation, Sobolev, Young(b/3, b/(b-3)).
    const double C1 = young_constant(e1, a, a / (a - 1.0));
    const double C0 = young_constant(e2 / S, b / 3.0, b / (b - 3.0)) * std::pow(C1, b / (b - 3.0));
    // Far part: a = 4, b = 5, and r^{-2/3} <= (2/delta1)^{2/3} on the support of 1 - eta.
    const double rho = std::pow(2.0 / cond.delta1, 2.0 / 3.0);
    const double Cg =
        young_constant(e2 / S, 5.0 / 3.0, 2.5) * std::pow(young_constant(e1, 4.0, 4.0 / 3.0) * rho, 2.5);

    rep.constants_used.push_back({"sobolev S", S, "literature"});
    rep.constants_used.push_back({"young(a,a')", C1, "explicit"});
    rep.constants_used.push_back({"C near axis", C0, "explicit"});
    rep.constants_used.push_back({"C far field", Cg, "explicit"});

    const GridPtr& grid = s.u_r.grid_ptr();
    const double i20 = trapezoid_sum(grid, [&](std::size_t i, std::size_t j, double r) {
        const double up = std::max(s.u_r(i, j), 0.0);
        if (up == 0.0) return 0.0;
        return cutoff_profile(r, cond.delta1) * up / r *
               std::pow(std::abs(s.omega_theta(i, j)) * std::pow(r, -alpha), q);
    });
    rep.constants_used.push_back({"I2,0", i20, "diagnostic"});
    rep.constants_used.push_back({"I2,1", rep.lhs - i20, "diagnostic"});

    const double f = eval_f_serrin(s, cond, fo);
    const double g = eval_g(s, fo);
    const double omega = weighted_lp(s.omega_theta, alpha, q, Quadrature::Trapezoid);
    add_term(rep, "axis_omega", eps1, eval_axis_weighted(s.omega_theta, alpha, q, fo));
    add_term(rep, "grad_omega", eps2, eval_grad_weighted(s.omega_theta, alpha, q, fo));
    add_term(rep, "f omega_q", C0, f * omega);
    add_term(rep, "g omega_q", Cg, g * omega);
    rep.rhs = sum_terms(rep);
    rep.finalize();
    return rep;
}

InequalityReport verify_sobolev_step(const ScalarField2D& G, const StencilSpec& stencil,
                                     Quadrature rule) {
    const CylGrid& g = G.grid();
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            if (G(i, j) < 0.0) throw Error("verify_sobolev_step: G must be nonnegative");
        }
    }
    const ScalarField2D gr = d_dr(G, stencil);
    const ScalarField2D gz = d_dz(G, stencil);
    ScalarField2D six(G.grid_ptr(), Parity::Even), grad(G.grid_ptr(), Parity::Even);
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            six(i, j) = std::pow(G(i, j), 6);
            grad(i, j) = gr(i, j) * gr(i, j) + gz(i, j) * gz(i, j);
        }
    }
    InequalityReport rep;
    rep.name = "sobolev";
    rep.lhs = std::cbrt(integrate_cyl(six, rule, 6.0 * axis_order(G.parity())));
    const double S = sobolev_constant_sq();
    rep.constants_used.push_back({"sobolev S", S, "literature"});
    add_term(rep, "grad", S, integrate_cyl(grad, rule, 0.0));
    rep.rhs = sum_terms(rep);
    rep.finalize();
    return rep;
}

nlohmann::json to_json(const InequalityReport& r) {
    const auto num = [](double x) {
        return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(std::to_string(x));
    };
    nlohmann::json consts = nlohmann::json::array();
    for (const auto& c : r.constants_used) {
        consts.push_back({{"label", c.label}, {"value", num(c.value)}, {"provenance", c.provenance}});
    }
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& t : r.terms) {
        terms.push_back({{"label", t.label}, {"coefficient", num(t.coefficient)}, {"integral", num(t.integral)}});
    }
    nlohmann::json books = nlohmann::json::array();
    for (const auto& b : r.bookkeeping) {
        books.push_back({{"name", b.name}, {"pass", b.pass}, {"value", num(b.value)}, {"target", num(b.lower)}});
    }
    return nlohmann::json{{"name", r.name},
                          {"lhs", num(r.lhs)},
                          {"rhs", num(r.rhs)},
                          {"margin", num(r.margin)},
                          {"pass", r.pass},
                          {"inconclusive", r.inconclusive},
                          {"note", r.note},
                          {"constants_used", consts},
                          {"terms", terms},
                          {"bookkeeping", books}};
}

}  // namespace axireg
