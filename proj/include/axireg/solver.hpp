#pragma once

/// @file solver.hpp
/// @brief Explicit Heun (RK2) time stepping of the axisymmetric
/// Navier-Stokes equations in primitive variables with an exact discrete
/// pressure projection.

#include <functional>
#include <memory>
#include <vector>

#include <Eigen/Sparse>

#include "axireg/grid.hpp"
#include "axireg/operators.hpp"

namespace axireg {

/// Body force per unit mass (f_r, f_theta, f_z). Zero in the unforced problem;
/// used for manufactured-solution tests.
struct ForcingField {
    ScalarField2D r;
    ScalarField2D theta;
    ScalarField2D z;
};

using ForcingFn = std::function<ForcingField(double t, const GridPtr& grid)>;

enum class BoundaryCondition {
    /// u = 0 on r = R and z = +-Z; homogeneous Dirichlet projection potential.
    DecayingFarField,
};

struct SolverConfig {
    double nu = 0.05;
    double dt = 1e-3;
    double t_end = 1.0;
    double cfl_safety = 0.5;
    double projection_tol = 1e-10;
    BoundaryCondition bc = BoundaryCondition::DecayingFarField;
    ForcingFn forcing;  // empty means unforced

    void validate() const;
};

/// Raised when the time step violates the advective or viscous limit.
class StepRejected : public Error {
public:
    StepRejected(const std::string& what, double suggested_dt)
        : Error(what), suggested_dt_(suggested_dt) {}
    double suggested_dt() const { return suggested_dt_; }

private:
    double suggested_dt_;
};

class ProjectionFailure : public Error {
public:
    ProjectionFailure(const std::string& what, std::vector<double> history)
        : Error(what), history_(std::move(history)) {}
    const std::vector<double>& residual_history() const { return history_; }

private:
    std::vector<double> history_;
};

/// Discrete projection onto fields whose continuity residual vanishes at
/// every axis and interior node. Solves (D G) phi = D u* where D and G are
/// the second-order divergence and gradient stencils used everywhere else.
class Projector {
public:
    explicit Projector(GridPtr grid);

    struct Result {
        ScalarField2D phi;
        std::vector<double> residual_history;  ///< max |div| after each solve
    };

    /// Projects (u_r, u_z) in place; boundary and axis u_r values are zeroed.
    Result project(ScalarField2D& u_r, ScalarField2D& u_z, double tol) const;

    /// max |du_r/dr + u_r/r + du_z/dz| over the nodes the projection controls.
    double divergence_residual(const ScalarField2D& u_r, const ScalarField2D& u_z) const;

    const GridPtr& grid() const { return grid_; }

private:
    std::size_t phi_index(std::size_t i, std::size_t j) const;
    Eigen::VectorXd divergence_vector(const ScalarField2D& u_r, const ScalarField2D& u_z) const;
    void subtract_gradient(const Eigen::VectorXd& phi, ScalarField2D& u_r,
                           ScalarField2D& u_z) const;

    GridPtr grid_;
    std::size_t n_unknowns_;
    std::unique_ptr<Eigen::SparseLU<Eigen::SparseMatrix<double>>> lu_;
};

class AxiSolver {
public:
    AxiSolver(GridPtr grid, SolverConfig cfg);

    /// Advances one step of cfg.dt. Throws StepRejected or ProjectionFailure.
    AxisymState step(const AxisymState& state) const;

    /// Projects arbitrary initial velocity, zeroes boundary values, and
    /// rebuilds vorticity.
    AxisymState prepare(AxisymState state) const;

    /// Throws StepRejected if dt is unstable for this state.
    void check_stability(const AxisymState& state) const;

    double divergence_residual(const AxisymState& state) const;

    const SolverConfig& config() const { return cfg_; }
    const GridPtr& grid() const { return grid_; }
    const Projector& projector() const { return projector_; }

private:
    struct Rates {
        ScalarField2D r, theta, z;
    };
    Rates rates(const AxisymState& s, double t) const;

    GridPtr grid_;
    SolverConfig cfg_;
    Projector projector_;
};

/// Convenience wrapper; factorizes the projection operator on every call.
AxisymState step(const AxisymState& state, const SolverConfig& cfg);

double kinetic_energy(const AxisymState& state);

struct VorticityResidual {
    double res_r = 0.0;
    double res_theta = 0.0;
    double res_z = 0.0;
};

/// L2 norms (cylindrical measure, excluding the two outermost node layers
/// at the walls and the three nearest the axis)
/// of the residuals of the three vorticity transport equations, evaluated at
/// the midpoint of two consecutive states.
VorticityResidual vorticity_residual(const AxisymState& prev, const AxisymState& next,
                                     const SolverConfig& cfg);

}  // namespace axireg
