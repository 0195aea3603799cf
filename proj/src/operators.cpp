#include "axireg/operators.hpp"

#include <array>
#include <cmath>
#include <cstddef>
#include <span>

namespace axireg {

namespace {

Parity flip(Parity p) { return p == Parity::Odd ? Parity::Even : Parity::Odd; }

// One-sided closures, written for a boundary on the low side; m is the
// distance (in nodes) of the evaluation point from the boundary.
constexpr std::array<double, 3> kD1o2 = {-3.0, 4.0, -1.0};               // / 2h
constexpr std::array<double, 4> kD2o2 = {2.0, -5.0, 4.0, -1.0};          // / h^2
constexpr std::array<double, 5> kD1o4m0 = {-25.0, 48.0, -36.0, 16.0, -3.0};  // / 12h
constexpr std::array<double, 5> kD1o4m1 = {-3.0, -10.0, 18.0, -6.0, 1.0};    // / 12h
constexpr std::array<double, 6> kD2o4m0 = {45.0, -154.0, 214.0, -156.0, 61.0, -10.0};  // / 12h^2
constexpr std::array<double, 6> kD2o4m1 = {10.0, -15.0, -4.0, 14.0, -6.0, 1.0};        // / 12h^2

// Derivative along a line of n samples. at(k) must accept k in [-order/2, n).
template <class At>
double line_derivative(const At& at, long n, long k, double h, int order, int deriv,
                       bool ghost_low) {
    const long half = order / 2;
    const bool low_ok = ghost_low || k >= half;
    const bool high_ok = k + half <= n - 1;
    if (low_ok && high_ok) {
        if (order == 2) {
            if (deriv == 1) return (at(k + 1) - at(k - 1)) / (2.0 * h);
            return (at(k + 1) - 2.0 * at(k) + at(k - 1)) / (h * h);
        }
        if (deriv == 1) {
            return (-at(k + 2) + 8.0 * at(k + 1) - 8.0 * at(k - 1) + at(k - 2)) / (12.0 * h);
        }
        return (-at(k + 2) + 16.0 * at(k + 1) - 30.0 * at(k) + 16.0 * at(k - 1) - at(k - 2)) /
               (12.0 * h * h);
    }

    // One-sided. For the high end walk the line backwards; first derivatives
    // change sign under the reversal, second derivatives do not.
    const bool at_low = !low_ok;
    const long m = at_low ? k : (n - 1 - k);
    const long base = at_low ? 0 : n - 1;
    const long step = at_low ? 1 : -1;
    auto pt = [&](long q) { return at(base + step * q); };
    const double sgn = at_low ? 1.0 : -1.0;

    auto apply = [&](std::span<const double> c) {
        double acc = 0.0;
        for (std::size_t q = 0; q < c.size(); ++q) acc += c[q] * pt(static_cast<long>(q));
        return acc;
    };

    if (order == 2) {
        if (deriv == 1) return sgn * apply(kD1o2) / (2.0 * h);
        return apply(kD2o2) / (h * h);
    }
    if (deriv == 1) return sgn * apply(m == 0 ? std::span<const double>(kD1o4m0)
                                              : std::span<const double>(kD1o4m1)) /
                           (12.0 * h);
    return apply(m == 0 ? std::span<const double>(kD2o4m0) : std::span<const double>(kD2o4m1)) /
           (12.0 * h * h);
}

double r_derivative(const ScalarField2D& f, std::size_t i, std::size_t j, int order, int deriv) {
    const CylGrid& g = f.grid();
    const double sign = f.parity() == Parity::Odd ? -1.0 : 1.0;
    auto at = [&](long k) {
        if (k < 0) return sign * f(static_cast<std::size_t>(-k), j);
        return f(static_cast<std::size_t>(k), j);
    };
    return line_derivative(at, static_cast<long>(g.n_r()), static_cast<long>(i), g.dr(), order,
                           deriv, true);
}

double z_derivative(const ScalarField2D& f, std::size_t i, std::size_t j, int order, int deriv) {
    const CylGrid& g = f.grid();
    auto at = [&](long k) { return f(i, static_cast<std::size_t>(k)); };
    return line_derivative(at, static_cast<long>(g.n_z()), static_cast<long>(j), g.dz(), order,
                           deriv, false);
}

template <class Fn>
ScalarField2D build(const GridPtr& grid, Parity parity, Fn&& fn) {
    ScalarField2D out(grid, parity);
    const CylGrid& g = *grid;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) out(i, j) = fn(i, j);
    }
    return out;
}

void require_parity(const ScalarField2D& f, Parity want, const char* what) {
    if (f.parity() != want) {
        throw Error(std::string(what) + ": field has the wrong axis parity");
    }
}

// f/r with the axis limit df/dr for odd f.
double over_r(const ScalarField2D& f, std::size_t i, std::size_t j, int order) {
    if (i == 0) return r_derivative(f, 0, j, order, 1);
    return f(i, j) / f.grid().r(i);
}

}  // namespace

std::string StencilSpec::boundary_scheme() const {
    return "parity ghost nodes at r=0; one-sided order-" + std::to_string(order) +
           " closures at r=R and z=+-Z";
}

void StencilSpec::validate() const {
    if (order != 2 && order != 4) throw Error("StencilSpec: order must be 2 or 4");
}

ScalarField2D d_dr(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    return build(f.grid_ptr(), flip(f.parity()),
                 [&](std::size_t i, std::size_t j) { return r_derivative(f, i, j, spec.order, 1); });
}

ScalarField2D d_dz(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    return build(f.grid_ptr(), f.parity(),
                 [&](std::size_t i, std::size_t j) { return z_derivative(f, i, j, spec.order, 1); });
}

ScalarField2D d2_dr2(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    return build(f.grid_ptr(), f.parity(),
                 [&](std::size_t i, std::size_t j) { return r_derivative(f, i, j, spec.order, 2); });
}

ScalarField2D d2_dz2(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    return build(f.grid_ptr(), f.parity(),
                 [&](std::size_t i, std::size_t j) { return z_derivative(f, i, j, spec.order, 2); });
}

ScalarField2D divergence_cyl(const ScalarField2D& u_r, const ScalarField2D& u_z,
                             StencilSpec spec) {
    spec.validate();
    u_r.require_same_grid(u_z);
    require_parity(u_r, Parity::Odd, "divergence_cyl(u_r)");
    require_parity(u_z, Parity::Even, "divergence_cyl(u_z)");
    const int o = spec.order;
    return build(u_r.grid_ptr(), Parity::Even, [&](std::size_t i, std::size_t j) {
        return r_derivative(u_r, i, j, o, 1) + over_r(u_r, i, j, o) + z_derivative(u_z, i, j, o, 1);
    });
}

VorticityField curl_cyl(const ScalarField2D& u_r, const ScalarField2D& u_theta,
                        const ScalarField2D& u_z, StencilSpec spec) {
    spec.validate();
    u_r.require_same_grid(u_theta);
    u_r.require_same_grid(u_z);
    require_parity(u_r, Parity::Odd, "curl_cyl(u_r)");
    require_parity(u_theta, Parity::Odd, "curl_cyl(u_theta)");
    require_parity(u_z, Parity::Even, "curl_cyl(u_z)");
    const int o = spec.order;
    const GridPtr& grid = u_r.grid_ptr();
    return VorticityField{
        build(grid, Parity::Odd,
              [&](std::size_t i, std::size_t j) { return -z_derivative(u_theta, i, j, o, 1); }),
        build(grid, Parity::Odd,
              [&](std::size_t i, std::size_t j) {
                  return z_derivative(u_r, i, j, o, 1) - r_derivative(u_z, i, j, o, 1);
              }),
        build(grid, Parity::Even, [&](std::size_t i, std::size_t j) {
            return r_derivative(u_theta, i, j, o, 1) + over_r(u_theta, i, j, o);
        })};
}

ScalarField2D swirl_laplacian(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    require_parity(f, Parity::Odd, "swirl_laplacian");
    const CylGrid& g = f.grid();
    const double tol = 1e-12 * std::max(1.0, f.max_abs());
    for (std::size_t j = 0; j < g.n_z(); ++j) {
        if (std::abs(f(0, j)) > tol) {
            throw Error("swirl_laplacian: field does not vanish on the axis at z=" +
                        std::to_string(g.z(j)));
        }
    }
    const int o = spec.order;
    // f_r/r - f/r^2 = d/dr (f/r), and f/r is even and smooth. Its axis value
    // comes from the even interpolant c0 + c1 r^2 (+ c2 r^4) through the first
    // off-axis nodes.
    ScalarField2D over_r(f.grid_ptr(), Parity::Even);
    const double h = g.dr();
    for (std::size_t j = 0; j < g.n_z(); ++j) {
        for (std::size_t i = 1; i < g.n_r(); ++i) over_r(i, j) = f(i, j) / g.r(i);
        const double g1 = f(1, j) / h, g2 = f(2, j) / (2.0 * h), g3 = f(3, j) / (3.0 * h);
        over_r(0, j) = o == 2 ? (4.0 * g1 - g2) / 3.0 : 1.5 * g1 - 0.6 * g2 + 0.1 * g3;
    }
    return build(f.grid_ptr(), Parity::Odd, [&](std::size_t i, std::size_t j) {
        if (i == 0) return 0.0;
        return r_derivative(f, i, j, o, 2) + r_derivative(over_r, i, j, o, 1) +
               z_derivative(f, i, j, o, 2);
    });
}

ScalarField2D axial_laplacian(const ScalarField2D& f, StencilSpec spec) {
    spec.validate();
    require_parity(f, Parity::Even, "axial_laplacian");
    const CylGrid& g = f.grid();
    const int o = spec.order;
    return build(f.grid_ptr(), Parity::Even, [&](std::size_t i, std::size_t j) {
        const double fzz = z_derivative(f, i, j, o, 2);
        if (i == 0) return 2.0 * r_derivative(f, 0, j, o, 2) + fzz;
        return r_derivative(f, i, j, o, 2) + r_derivative(f, i, j, o, 1) / g.r(i) + fzz;
    });
}

GradientField gradient_cyl(const ScalarField2D& f, StencilSpec spec) {
    return GradientField{d_dr(f, spec), d_dz(f, spec)};
}

void refresh_vorticity(AxisymState& state, StencilSpec spec) {
    auto w = curl_cyl(state.u_r, state.u_theta, state.u_z, spec);
    state.omega_r = std::move(w.r);
    state.omega_theta = std::move(w.theta);
    state.omega_z = std::move(w.z);
}

}  // namespace axireg
