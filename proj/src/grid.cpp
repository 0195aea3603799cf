#include "axireg/grid.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace axireg {

namespace {

std::string node_name(const CylGrid& g, std::size_t k) {
    const std::size_t i = k / g.n_z();
    const std::size_t j = k % g.n_z();
    std::ostringstream os;
    os << "node (i_r=" << i << ", i_z=" << j << ") at r=" << g.r(i) << ", z=" << g.z(j);
    return os.str();
}

}  // namespace

CylGrid::CylGrid(double r_max, double z_half, std::size_t n_r, std::size_t n_z)
    : r_max_(r_max), z_half_(z_half), n_r_(n_r), n_z_(n_z) {
    if (n_r < 8 || n_z < 8) {
        throw Error("CylGrid: need n_r >= 8 and n_z >= 8");
    }
    if (!(r_max > 0.0) || !(z_half > 0.0)) {
        throw Error("CylGrid: r_max and z_half must be positive");
    }
    dr_ = r_max / static_cast<double>(n_r - 1);
    dz_ = 2.0 * z_half / static_cast<double>(n_z - 1);

    weights_.resize(n_r * n_z);
    for (std::size_t i = 0; i < n_r; ++i) {
        const double wr = (i + 1 == n_r ? 0.5 : 1.0) * dr_ * r(i);
        for (std::size_t j = 0; j < n_z; ++j) {
            weights_[index(i, j)] = 2.0 * std::numbers::pi * wr * z_weight(j);
        }
    }
}

double CylGrid::z_weight(std::size_t j) const {
    return (j == 0 || j + 1 == n_z_) ? 0.5 * dz_ : dz_;
}

bool CylGrid::operator==(const CylGrid& other) const {
    return n_r_ == other.n_r_ && n_z_ == other.n_z_ && r_max_ == other.r_max_ &&
           z_half_ == other.z_half_;
}

GridPtr make_grid(double r_max, double z_half, std::size_t n_r, std::size_t n_z) {
    return std::make_shared<const CylGrid>(r_max, z_half, n_r, n_z);
}

ScalarField2D::ScalarField2D(GridPtr grid, Parity parity)
    : grid_(std::move(grid)), parity_(parity), values_(grid_->size(), 0.0) {}

ScalarField2D ScalarField2D::sample(GridPtr grid, Parity parity,
                                    const std::function<double(double, double)>& fn) {
    ScalarField2D f(std::move(grid), parity);
    const CylGrid& g = f.grid();
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            f(i, j) = fn(g.r(i), g.z(j));
        }
    }
    return f;
}

void ScalarField2D::require_finite(const std::string& what) const {
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (!std::isfinite(values_[k])) {
            throw Error(what + ": non-finite value at " + node_name(*grid_, k));
        }
    }
}

void ScalarField2D::require_same_grid(const ScalarField2D& other) const {
    if (grid_ != other.grid_ && !(*grid_ == *other.grid_)) {
        throw Error("fields live on different grids");
    }
}

double ScalarField2D::max_abs() const {
    double m = 0.0;
    for (double v : values_) m = std::max(m, std::abs(v));
    return m;
}

ScalarField2D& ScalarField2D::operator+=(const ScalarField2D& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] += other.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator-=(const ScalarField2D& other) {
    require_same_grid(other);
    for (std::size_t k = 0; k < values_.size(); ++k) values_[k] -= other.values_[k];
    return *this;
}

ScalarField2D& ScalarField2D::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b) { return a += b; }
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b) { return a -= b; }
ScalarField2D operator*(double s, ScalarField2D a) { return a *= s; }

AxisymState AxisymState::zeros(const GridPtr& grid, double t) {
    return AxisymState{t,
                       ScalarField2D(grid, Parity::Odd),
                       ScalarField2D(grid, Parity::Odd),
                       ScalarField2D(grid, Parity::Even),
                       ScalarField2D(grid, Parity::Even),
                       ScalarField2D(grid, Parity::Odd),
                       ScalarField2D(grid, Parity::Odd),
                       ScalarField2D(grid, Parity::Even)};
}

double integrate_cyl(const ScalarField2D& f) {
    f.require_finite("integrate_cyl");
    const CylGrid& g = f.grid();
    const auto w = g.quad_weights();
    const auto v = f.values();
    double total = 0.0;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const std::size_t k = g.index(i, j);
            row += v[k] * w[k];
        }
        total += row;
    }
    return total;
}

double integrate_cyl_axis_corrected(const ScalarField2D& f, double axis_power) {
    if (!(axis_power > -2.0)) {
        throw Error("integrate_cyl_axis_corrected: integrand not integrable at the axis");
    }
    const CylGrid& g = f.grid();
    const auto w = g.quad_weights();
    const auto v = f.values();
    double total = 0.0;
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        double row = 0.0;
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const std::size_t k = g.index(i, j);
            if (!std::isfinite(v[k])) {
                throw Error("integrate_cyl: non-finite value at " + node_name(g, k));
            }
            row += v[k] * w[k];
        }
        total += row;
    }

    // With the measure folded in, the radial integrand is c r^s, s = axis_power + 1.
    // Trapezoid minus integral = zeta(-s) c h^{s+1} + higher order; c h^s = G(r_1).
    const double s = axis_power + 1.0;
    const double zeta = std::riemann_zeta(-s);
    if (zeta == 0.0) return total;
    const double h = g.dr();
    double correction = 0.0;
    for (std::size_t j = 0; j < g.n_z(); ++j) {
        correction += g.z_weight(j) * f(1, j) * g.r(1);
    }
    return total - 2.0 * std::numbers::pi * zeta * h * correction;
}

double integrate_cyl(const ScalarField2D& f, Quadrature rule, double axis_power) {
    if (rule == Quadrature::Trapezoid) return integrate_cyl(f);
    return integrate_cyl_axis_corrected(f, axis_power);
}

double weighted_lp(const ScalarField2D& f, double beta, double p, Quadrature rule) {
    if (!(p >= 1.0)) throw Error("weighted_lp: need p >= 1");
    const CylGrid& g = f.grid();
    ScalarField2D integrand(f.grid_ptr(), Parity::Even);
    std::size_t worst = 0;
    double worst_val = -1.0;
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const double r = g.r(i);
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const double x = std::abs(f(i, j));
            if (!std::isfinite(x)) {
                throw Error("weighted_lp: non-finite input at " + node_name(g, g.index(i, j)));
            }
            const double val = std::pow(x / std::pow(r, beta), p);
            if (x > worst_val) {
                worst_val = x;
                worst = g.index(i, j);
            }
            integrand(i, j) = val;
            if (!std::isfinite(val)) {
                throw Error("weighted_lp: integrand overflow; largest |f| at " +
                            node_name(g, worst));
            }
        }
    }
    const double power = p * (axis_order(f.parity()) - beta);
    return integrate_cyl(integrand, rule, power);
}

ScalarField2D positive_part(const ScalarField2D& f) {
    ScalarField2D out(f.grid_ptr(), f.parity());
    auto src = f.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] > 0.0 ? src[k] : 0.0;
    return out;
}

ScalarField2D negative_part(const ScalarField2D& f) {
    ScalarField2D out(f.grid_ptr(), f.parity());
    auto src = f.values();
    auto dst = out.values();
    for (std::size_t k = 0; k < src.size(); ++k) dst[k] = src[k] < 0.0 ? -src[k] : 0.0;
    return out;
}

double signed_pow(double x, double e) {
    if (x == 0.0) return 0.0;
    const double m = std::pow(std::abs(x), e);
    return x > 0.0 ? m : -m;
}

}  // namespace axireg
