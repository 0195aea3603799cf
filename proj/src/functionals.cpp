#include "axireg/functionals.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "axireg/cut_quadrature.hpp"

namespace axireg {

namespace {

// Samples fn(i, j, r) on the off-axis nodes. Axis nodes carry zero weight and
// are never evaluated.
template <class Fn>
ScalarField2D off_axis_field(const GridPtr& grid, const char* what, Fn&& fn) {
    const CylGrid& g = *grid;
    ScalarField2D out(grid, Parity::Even);
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const double r = g.r(i);
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const double val = fn(i, j, r);
            if (!std::isfinite(val)) {
                throw Error(std::string(what) + ": non-finite integrand at r=" + std::to_string(r) +
                            ", z=" + std::to_string(g.z(j)));
            }
            out(i, j) = val;
        }
    }
    return out;
}

template <class Fn>
double integrate_off_axis(const GridPtr& grid, const FunctionalOptions& opt, double axis_power,
                          const char* what, Fn&& fn) {
    return integrate_cyl(off_axis_field(grid, what, fn), opt.rule, axis_power);
}

// Integrand kind(s)^lambda * H. With the axis-corrected rule the zeros of s
// along each column get their local error terms removed.
template <class Fn, class HFn>
double integrate_switched(const GridPtr& grid, const FunctionalOptions& opt, double axis_power,
                          const char* what, Fn&& fn, const ScalarField2D& s, CutKind kind,
                          double lambda, HFn&& hfn) {
    const ScalarField2D f = off_axis_field(grid, what, fn);
    if (opt.rule != Quadrature::AxisCorrected) return integrate_cyl(f, opt.rule, axis_power);
    const ScalarField2D H = off_axis_field(grid, what, hfn);
    return integrate_cyl_corrected(f, opt.rule, axis_power,
                                   column_cut_corrections(s, H, kind, lambda)) -
           turning_point_correction(s, H, kind, lambda);
}

double pos(double x) { return x > 0.0 ? x : 0.0; }
double neg(double x) { return x < 0.0 ? -x : 0.0; }

// |f/r^beta|^m
double weighted_power(double f, double r, double beta, double m) {
    return std::pow(std::abs(f) * std::pow(r, -beta), m);
}

// int (u_r^{+ or -} / r) |f / r^beta|^m
double damped(const AxisymState& s, const ScalarField2D& f, double beta, double m, bool positive,
              const FunctionalOptions& opt, const char* what) {
    const auto H = [&](std::size_t i, std::size_t j, double r) {
        return weighted_power(f(i, j), r, beta, m) / r;
    };
    return integrate_switched(
        s.u_r.grid_ptr(), opt, m * (axis_order(f.parity()) - beta), what,
        [&](std::size_t i, std::size_t j, double r) {
            const double u = positive ? pos(s.u_r(i, j)) : neg(s.u_r(i, j));
            return u == 0.0 ? 0.0 : u * H(i, j, r);
        },
        s.u_r, positive ? CutKind::Positive : CutKind::Negative, 1.0, H);
}

}  // namespace

double eval_I1(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt) {
    return damped(s, s.u_theta, c.mu, c.p, false, opt, "eval_I1");
}

double eval_I2(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt) {
    return damped(s, s.omega_theta, c.alpha, c.q, true, opt, "eval_I2");
}

double eval_I3(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt) {
    if (!(c.q > 1.0)) throw Error("eval_I3: need q > 1");
    const ScalarField2D ut_z = d_dz(s.u_theta, opt.stencil);
    // |w|^{q-2} w / r^alpha = sign(omega) |omega|^{q-1} r^{-alpha q}
    const auto H = [&](std::size_t i, std::size_t j, double r) {
        return s.u_theta(i, j) / r * ut_z(i, j) * std::pow(r, -c.alpha * c.q);
    };
    return integrate_switched(
        s.u_r.grid_ptr(), opt, c.q * (1.0 - c.alpha), "eval_I3",
        [&](std::size_t i, std::size_t j, double r) {
            return signed_pow(s.omega_theta(i, j), c.q - 1.0) * H(i, j, r);
        },
        s.omega_theta, CutKind::Odd, c.q - 1.0, H);
}

double eval_f_serrin(const AxisymState& s, const SerrinCondition& cond,
                     const FunctionalOptions& opt) {
    const CylGrid& g = s.grid();
    const double h = g.dr();
    const auto S = [&](std::size_t i, std::size_t j) {
        const double up = pos(s.u_r(i, j));
        return up == 0.0 ? 0.0 : std::pow(std::pow(g.r(i), cond.d) * up, cond.s);
    };
    const double power = cond.s * (cond.d + 1.0);
    double inner = 0.0;
    const auto last = static_cast<std::size_t>(std::floor(cond.delta1 / h));
    if (opt.rule == Quadrature::AxisCorrected && last >= 2 && last + 2 < g.n_r()) {
        // Nodes up to delta1 at full weight, then the generalized
        // Euler-Maclaurin terms of the sharp cut, row by row.
        inner = integrate_off_axis(s.u_r.grid_ptr(), opt, power, "eval_f_serrin",
                                   [&](std::size_t i, std::size_t j, double) {
                                       return i <= last ? S(i, j) : 0.0;
                                   });
        const double theta = std::clamp(cond.delta1 / h - static_cast<double>(last), 0.0, 1.0);
        const double two_pi = 2.0 * std::numbers::pi;
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const auto y = [&](std::size_t i) { return two_pi * g.r(i) * S(i, j); };
            const double ym = y(last - 1), y0 = y(last), y1 = y(last + 1), y2 = y(last + 2);
            const double a2 = 0.5 * (y1 + ym) - y0;
            const double a3 = (y2 - y0 - 4.0 * a2 - (y1 - ym)) / 6.0;
            const double a1 = 0.5 * (y1 - ym) - a3;
            const double t = theta;
            const double S0 = y0 + t * (a1 + t * (a2 + t * a3));
            const double S1 = (a1 + t * (2.0 * a2 + 3.0 * t * a3)) / h;
            const double S2 = (2.0 * a2 + 6.0 * t * a3) / (h * h);
            const double S3 = 6.0 * a3 / (h * h * h);
            inner -= g.z_weight(j) * left_cut_error(S0, S1, S2, S3, h, theta);
        }
    } else {
        // Each node carries the fraction of its radial cell [r - h/2, r + h/2]
        // inside r < delta1; positive weights throughout.
        inner = integrate_off_axis(
            s.u_r.grid_ptr(), opt, power, "eval_f_serrin",
            [&](std::size_t i, std::size_t j, double r) {
                const double cover = std::clamp((cond.delta1 - (r - 0.5 * h)) / h, 0.0, 1.0);
                return cover == 0.0 ? 0.0 : cover * S(i, j);
            });
    }
    return std::pow(std::max(inner, 0.0), cond.w / cond.s);
}

double eval_g(const AxisymState& s, const FunctionalOptions& opt) {
    return integrate_off_axis(s.u_r.grid_ptr(), opt, 10.0 / 3.0, "eval_g",
                              [&](std::size_t i, std::size_t j, double) {
                                  return std::pow(pos(s.u_r(i, j)), 10.0 / 3.0);
                              });
}

double cutoff_profile(double r, double delta1) {
    const double half = 0.5 * delta1;
    if (r <= half) return 1.0;
    if (r >= delta1) return 0.0;
    const double x = (r - half) / half;
    return 1.0 - x * x * x * (10.0 + x * (-15.0 + 6.0 * x));
}

ScalarField2D smooth_cutoff(const GridPtr& grid, double delta1) {
    if (!(delta1 > 0.0)) throw Error("smooth_cutoff: delta1 must be positive");
    return ScalarField2D::sample(grid, Parity::Even,
                                 [&](double r, double) { return cutoff_profile(r, delta1); });
}

double eval_axis_weighted(const ScalarField2D& f, double beta, double m,
                          const FunctionalOptions& opt) {
    return integrate_off_axis(f.grid_ptr(), opt, m * (axis_order(f.parity()) - beta) - 2.0,
                              "eval_axis_weighted", [&](std::size_t i, std::size_t j, double r) {
                                  return weighted_power(f(i, j), r, beta, m) / (r * r);
                              });
}

double eval_grad_weighted(const ScalarField2D& f, double beta, double m,
                          const FunctionalOptions& opt) {
    const ScalarField2D fr = d_dr(f, opt.stencil);
    const ScalarField2D fz = d_dz(f, opt.stencil);
    const double half = 0.5 * m;
    // |grad G|^2 = |f|^{m-2} H with H = (m/2)^2 r^{-beta(m-2)} |grad v|^2
    const auto H = [&](std::size_t i, std::size_t j, double r) {
        const double rb = std::pow(r, -beta);
        const double vr = (fr(i, j) - beta * f(i, j) / r) * rb;
        const double vz = fz(i, j) * rb;
        return half * half * std::pow(r, -beta * (m - 2.0)) * (vr * vr + vz * vz);
    };
    return integrate_switched(
        f.grid_ptr(), opt, m * (axis_order(f.parity()) - beta) - 2.0, "eval_grad_weighted",
        [&](std::size_t i, std::size_t j, double r) {
            if (f(i, j) == 0.0) return 0.0;
            return std::pow(std::abs(f(i, j)), m - 2.0) * H(i, j, r);
        },
        f, CutKind::Even, m - 2.0, H);
}

double eval_swirl_z_energy(const AxisymState& s, const CriterionParams& c,
                           const FunctionalOptions& opt) {
    const ScalarField2D ut_z = d_dz(s.u_theta, opt.stencil);
    const auto H = [&](std::size_t i, std::size_t j, double r) {
        const double dz = ut_z(i, j) * std::pow(r, -c.mu);
        return std::pow(r, -c.mu * (c.p - 2.0)) * dz * dz;
    };
    return integrate_switched(
        s.u_r.grid_ptr(), opt, c.p * (1.0 - c.mu), "eval_swirl_z_energy",
        [&](std::size_t i, std::size_t j, double r) {
            if (s.u_theta(i, j) == 0.0) return 0.0;
            return std::pow(std::abs(s.u_theta(i, j)), c.p - 2.0) * H(i, j, r);
        },
        s.u_theta, CutKind::Even, c.p - 2.0, H);
}

double eval_varpi(const AxisymState& s, double delta0) {
    const CylGrid& g = s.grid();
    double m = 0.0;
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const double w = std::pow(g.r(i), 1.0 - delta0);
        for (std::size_t j = 0; j < g.n_z(); ++j) m = std::max(m, std::abs(w * s.u_theta(i, j)));
    }
    return m;
}

double eval_r_ut_inf(const AxisymState& s) { return eval_varpi(s, 0.0); }

FunctionalSet evaluate_functionals(const AxisymState& s, const CriterionParams& c,
                                   const SerrinCondition& cond, const FunctionalOptions& opt) {
    FunctionalSet f;
    f.phi_p = weighted_lp(s.u_theta, c.mu, c.p, opt.rule);
    f.omega_q = weighted_lp(s.omega_theta, c.alpha, c.q, opt.rule);
    f.grad_phi = eval_grad_weighted(s.u_theta, c.mu, c.p, opt);
    f.grad_omega = eval_grad_weighted(s.omega_theta, c.alpha, c.q, opt);
    f.axis_phi = eval_axis_weighted(s.u_theta, c.mu, c.p, opt);
    f.axis_omega = eval_axis_weighted(s.omega_theta, c.alpha, c.q, opt);
    f.damp_phi = damped(s, s.u_theta, c.mu, c.p, true, opt, "damp_phi");
    f.damp_omega = damped(s, s.omega_theta, c.alpha, c.q, false, opt, "damp_omega");
    f.I1 = eval_I1(s, c, opt);
    f.I2 = eval_I2(s, c, opt);
    f.I3 = eval_I3(s, c, opt);
    f.f_serrin = eval_f_serrin(s, cond, opt);
    f.g_ur = eval_g(s, opt);
    f.varpi = eval_varpi(s, c.delta0);
    f.r_ut_inf = eval_r_ut_inf(s);
    return f;
}


namespace {

double avg(double a, double b) { return 0.5 * (a + b); }

void close(IdentityTerms& t) {
    t.lhs = t.time_derivative + t.gradient + t.axis + t.damping;
    t.rhs = t.rhs_radial + t.rhs_coupling;
    t.residual = t.lhs - t.rhs;
}

}  // namespace

IdentityTerms identity_d_from(const FunctionalSet& a, const FunctionalSet& b, double dt,
                              const CriterionParams& c, double nu) {
    if (!(dt > 0.0)) throw Error("identity terms: states are not time ordered");
    IdentityTerms t;
    t.time_derivative = (b.phi_p - a.phi_p) / (c.p * dt);
    t.gradient = 4.0 * (c.p - 1.0) * nu / (c.p * c.p) * avg(a.grad_phi, b.grad_phi);
    t.axis = nu * (1.0 - c.mu * c.mu) * avg(a.axis_phi, b.axis_phi);
    t.damping = (1.0 + c.mu) * avg(a.damp_phi, b.damp_phi);
    t.rhs_radial = (1.0 + c.mu) * avg(a.I1, b.I1);
    close(t);
    return t;
}

IdentityTerms identity_i_from(const FunctionalSet& a, const FunctionalSet& b, double dt,
                              const CriterionParams& c, double nu) {
    if (!(dt > 0.0)) throw Error("identity terms: states are not time ordered");
    IdentityTerms t;
    t.time_derivative = (b.omega_q - a.omega_q) / (c.q * dt);
    t.gradient = 4.0 * nu * (c.q - 1.0) / (c.q * c.q) * avg(a.grad_omega, b.grad_omega);
    t.axis = nu * (1.0 - c.alpha * c.alpha) * avg(a.axis_omega, b.axis_omega);
    t.damping = (1.0 - c.alpha) * avg(a.damp_omega, b.damp_omega);
    t.rhs_radial = (1.0 - c.alpha) * avg(a.I2, b.I2);
    t.rhs_coupling = 2.0 * avg(a.I3, b.I3);
    close(t);
    return t;
}

IdentityTerms eval_identity_d_terms(const AxisymState& s0, const AxisymState& s1,
                                    const CriterionParams& c, double nu,
                                    const FunctionalOptions& opt) {
    const SerrinCondition cond{};
    return identity_d_from(evaluate_functionals(s0, c, cond, opt),
                           evaluate_functionals(s1, c, cond, opt), s1.t - s0.t, c, nu);
}

IdentityTerms eval_identity_i_terms(const AxisymState& s0, const AxisymState& s1,
                                    const CriterionParams& c, double nu,
                                    const FunctionalOptions& opt) {
    const SerrinCondition cond{};
    return identity_i_from(evaluate_functionals(s0, c, cond, opt),
                           evaluate_functionals(s1, c, cond, opt), s1.t - s0.t, c, nu);
}

IdentityTerms assemble_main(const IdentityTerms& d, const IdentityTerms& i) {
    IdentityTerms m;
    m.time_derivative = d.time_derivative + i.time_derivative;
    m.gradient = d.gradient + i.gradient;
    m.axis = d.axis + i.axis;
    m.damping = d.damping + i.damping;
    m.rhs_radial = d.rhs_radial + i.rhs_radial;
    m.rhs_coupling = d.rhs_coupling + i.rhs_coupling;
    close(m);
    return m;
}

}  // namespace axireg
