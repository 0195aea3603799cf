#pragma once

// Independent reference values for the weighted integrals on ensemble
// members: closed-form fields from oracles.hpp, adaptive quadrature in r and
// z, with the z integrals split at every sign change of u_r, u_theta and
// omega_theta so each piece is smooth up to its endpoints.

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/tools/roots.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "axireg/ensemble.hpp"
#include "axireg/exponents.hpp"
#include "oracles.hpp"

namespace dense {

struct Point {
    double u_r = 0.0, u_theta = 0.0, omega_theta = 0.0, du_theta_dz = 0.0;
};

inline Point fields(const axireg::EnsembleMember& m, double r, double z) {
    Point p;
    for (const auto& g : m.stream) {
        p.u_r += oracle::mode::stream_u_r(g.amp, g.center, g.width, 0.0, r, z);
        p.omega_theta += oracle::mode::stream_omega_theta(g.amp, g.center, g.width, 0.0, r, z);
    }
    for (const auto& g : m.swirl) {
        p.u_theta += oracle::mode::swirl_u_theta(g.amp, g.center, g.width, g.tilt, r, z);
        p.du_theta_dz += oracle::mode::swirl_du_theta_dz(g.amp, g.center, g.width, g.tilt, r, z);
    }
    return p;
}

struct Box {
    double r_max = 4.0;
    double z_half = 4.0;
};

using Integrand = std::function<double(const Point&, double r)>;

class Integrator {
public:
    Integrator(const axireg::EnsembleMember& m, Box box, double tol = 1e-8)
        : m_(m), box_(box), tol_(tol) {}

    mutable long columns = 0;

    /// int over the box of 2 pi r F, restricted to r in [r0, r1].
    double operator()(const Integrand& F, double r0, double r1) const {
        const auto G = [&](double r) { return 2.0 * std::numbers::pi * r * column(F, r); };
        return boost::math::quadrature::gauss_kronrod<double, 15>::integrate(G, r0, r1, 15, tol_);
    }

    double operator()(const Integrand& F) const { return (*this)(F, 0.0, box_.r_max); }

private:
    double column(const Integrand& F, double r) const {
        ++columns;
        std::vector<double> cuts = {-box_.z_half};
        const int n = 400;
        const double h = 2.0 * box_.z_half / n;
        const auto sw = [&](int k, double z) {
            const Point p = fields(m_, r, z);
            return k == 0 ? p.u_r : (k == 1 ? p.u_theta : p.omega_theta);
        };
        const auto all = [&](double z) {
            const Point p = fields(m_, r, z);
            return std::array<double, 3>{p.u_r, p.u_theta, p.omega_theta};
        };
        double za = -box_.z_half;
        auto fa = all(za);
        for (int j = 1; j <= n; ++j) {
            const double zb = -box_.z_half + j * h;
            const auto fb = all(zb);
            for (int k = 0; k < 3; ++k) {
                if ((fa[k] < 0.0) != (fb[k] < 0.0) && fa[k] != 0.0 && fb[k] != 0.0) {
                    std::uintmax_t iters = 60;
                    const auto root = boost::math::tools::toms748_solve(
                        [&](double z) { return sw(k, z); }, za, zb, fa[k], fb[k],
                        boost::math::tools::eps_tolerance<double>(50), iters);
                    cuts.push_back(0.5 * (root.first + root.second));
                }
            }
            za = zb;
            fa = fb;
        }
        cuts.push_back(box_.z_half);
        std::sort(cuts.begin(), cuts.end());
        const auto f = [&](double z, double) { return F(fields(m_, r, z), r); };
        double total = 0.0;
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const double a = cuts[k], b = cuts[k + 1];
            if (b - a < 1e-10) continue;
            // Pieces cut out by a positive or negative part vanish identically.
            if (f(a + 0.25 * (b - a), 0.0) == 0.0 && f(0.5 * (a + b), 0.0) == 0.0 &&
                f(a + 0.75 * (b - a), 0.0) == 0.0) {
                continue;
            }
            total += ts_.integrate(f, a, b, 1e-10);
        }
        return total;
    }

    const axireg::EnsembleMember& m_;
    Box box_;
    double tol_;
    mutable boost::math::quadrature::tanh_sinh<double> ts_;
};

struct Values {
    double phi_p, omega_q, I1, I2, I3, f_serrin, g_ur;
};

inline double pos(double x) { return x > 0.0 ? x : 0.0; }
inline double neg(double x) { return x < 0.0 ? -x : 0.0; }

inline Values reference(const axireg::EnsembleMember& m, const axireg::CriterionParams& c,
                        const axireg::SerrinCondition& k, Box box = {}) {
    const Integrator I(m, box);
    const auto v = [&](const Point& p, double r) { return std::abs(p.u_theta) * std::pow(r, -c.mu); };
    const auto w = [&](const Point& p, double r) {
        return std::abs(p.omega_theta) * std::pow(r, -c.alpha);
    };
    Values out{};
    out.phi_p = I([&](const Point& p, double r) { return std::pow(v(p, r), c.p); });
    out.omega_q = I([&](const Point& p, double r) { return std::pow(w(p, r), c.q); });
    out.I1 = I([&](const Point& p, double r) { return neg(p.u_r) / r * std::pow(v(p, r), c.p); });
    out.I2 = I([&](const Point& p, double r) { return pos(p.u_r) / r * std::pow(w(p, r), c.q); });
    out.I3 = I([&](const Point& p, double r) {
        const double sw = p.omega_theta < 0.0 ? -1.0 : 1.0;
        return p.u_theta / r * p.du_theta_dz * sw * std::pow(w(p, r), c.q - 1.0) *
               std::pow(r, -c.alpha);
    });
    const double inner = I(
        [&](const Point& p, double r) { return std::pow(std::pow(r, k.d) * pos(p.u_r), k.s); }, 0.0,
        k.delta1);
    out.f_serrin = std::pow(inner, k.w / k.s);
    out.g_ur = I([&](const Point& p, double) { return std::pow(pos(p.u_r), 10.0 / 3.0); });
    return out;
}

}  // namespace dense
