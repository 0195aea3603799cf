#pragma once

/// @file grid.hpp
/// @brief Truncated axisymmetric domain, scalar fields on it, and the
/// cylindrical-measure reductions every functional is built from.
///
/// The domain is [0, R] x [-Z, Z] in (r, z). Nodes sit on a uniform lattice
/// that includes the axis line r = 0. Values are stored row-major with r as
/// the outer index: value(i_r, i_z) lives at i_r * n_z + i_z.

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace axireg {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Behaviour of a component under the reflection r -> -r. Odd components
/// (u_r, u_theta, omega_r, omega_theta) vanish on the axis; even components
/// (u_z, p, omega_z) have zero radial derivative there.
enum class Parity { Even, Odd };

class CylGrid {
public:
    CylGrid(double r_max, double z_half, std::size_t n_r, std::size_t n_z);

    double r_max() const { return r_max_; }
    double z_half() const { return z_half_; }
    std::size_t n_r() const { return n_r_; }
    std::size_t n_z() const { return n_z_; }
    std::size_t size() const { return n_r_ * n_z_; }
    double dr() const { return dr_; }
    double dz() const { return dz_; }

    double r(std::size_t i) const { return static_cast<double>(i) * dr_; }
    double z(std::size_t j) const { return -z_half_ + static_cast<double>(j) * dz_; }
    std::size_t index(std::size_t i, std::size_t j) const { return i * n_z_ + j; }

    /// Per-node weight of the composite trapezoid rule for dx = 2 pi r dr dz.
    std::span<const double> quad_weights() const { return weights_; }
    double quad_weight(std::size_t i, std::size_t j) const { return weights_[index(i, j)]; }
    /// 1D trapezoid weight in z (includes dz).
    double z_weight(std::size_t j) const;

    bool is_boundary(std::size_t i, std::size_t j) const {
        return i + 1 == n_r_ || j == 0 || j + 1 == n_z_;
    }

    bool operator==(const CylGrid& other) const;

private:
    double r_max_;
    double z_half_;
    std::size_t n_r_;
    std::size_t n_z_;
    double dr_;
    double dz_;
    std::vector<double> weights_;
};

using GridPtr = std::shared_ptr<const CylGrid>;

GridPtr make_grid(double r_max, double z_half, std::size_t n_r, std::size_t n_z);

class ScalarField2D {
public:
    explicit ScalarField2D(GridPtr grid, Parity parity = Parity::Even);

    /// Samples fn(r, z) at every node.
    static ScalarField2D sample(GridPtr grid, Parity parity,
                                const std::function<double(double, double)>& fn);

    const CylGrid& grid() const { return *grid_; }
    const GridPtr& grid_ptr() const { return grid_; }
    Parity parity() const { return parity_; }
    void set_parity(Parity parity) { parity_ = parity; }

    double operator()(std::size_t i, std::size_t j) const { return values_[grid_->index(i, j)]; }
    double& operator()(std::size_t i, std::size_t j) { return values_[grid_->index(i, j)]; }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Throws Error naming the first non-finite node.
    void require_finite(const std::string& what) const;
    void require_same_grid(const ScalarField2D& other) const;

    double max_abs() const;

    ScalarField2D& operator+=(const ScalarField2D& other);
    ScalarField2D& operator-=(const ScalarField2D& other);
    ScalarField2D& operator*=(double s);

private:
    GridPtr grid_;
    Parity parity_;
    std::vector<double> values_;
};

ScalarField2D operator+(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator-(ScalarField2D a, const ScalarField2D& b);
ScalarField2D operator*(double s, ScalarField2D a);

/// Velocity, pressure, and the derived vorticity at one time.
struct AxisymState {
    double t = 0.0;
    ScalarField2D u_r;
    ScalarField2D u_theta;
    ScalarField2D u_z;
    ScalarField2D pressure;
    ScalarField2D omega_r;
    ScalarField2D omega_theta;
    ScalarField2D omega_z;

    static AxisymState zeros(const GridPtr& grid, double t = 0.0);
    const CylGrid& grid() const { return u_r.grid(); }
};

enum class Quadrature {
    Trapezoid,      ///< composite trapezoid, nonnegative weights, axis weight 0
    AxisCorrected,  ///< trapezoid plus power-law endpoint correction at r = 0
};

/// Sum of f * quad_weight over all nodes.
double integrate_cyl(const ScalarField2D& f);

/// Trapezoid with a generalized Euler-Maclaurin endpoint correction for
/// integrands behaving like c(z) r^axis_power as r -> 0 (axis_power > -2).
/// Axis values of f are never read.
double integrate_cyl_axis_corrected(const ScalarField2D& f, double axis_power);

/// Dispatches on the quadrature rule; axis_power is ignored for Trapezoid.
double integrate_cyl(const ScalarField2D& f, Quadrature rule, double axis_power);

/// Leading power of |f| at the axis implied by parity (1 for odd, 0 for even).
inline double axis_order(Parity parity) { return parity == Parity::Odd ? 1.0 : 0.0; }

/// Integral of |f / r^beta|^p dx. Axis nodes are skipped (zero weight).
double weighted_lp(const ScalarField2D& f, double beta, double p,
                   Quadrature rule = Quadrature::Trapezoid);

ScalarField2D positive_part(const ScalarField2D& f);
ScalarField2D negative_part(const ScalarField2D& f);

/// sign(x) |x|^e, continuous at 0 for e > 0.
double signed_pow(double x, double e);

}  // namespace axireg
