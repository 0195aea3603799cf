#include "axireg/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <sstream>

namespace axireg {

void SolverConfig::validate() const {
    if (!(nu > 0.0)) throw Error("SolverConfig: nu must be positive");
    if (!(dt > 0.0)) throw Error("SolverConfig: dt must be positive");
    if (!(projection_tol > 0.0)) throw Error("SolverConfig: projection_tol must be positive");
    if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
        throw Error("SolverConfig: cfl_safety must lie in (0, 1]");
    }
    if (!(t_end >= 0.0)) throw Error("SolverConfig: t_end must be nonnegative");
}

// Unknowns: phi at i in [0, n_r-2], j in [1, n_z-2]; phi = 0 on the outer boundary.
std::size_t Projector::phi_index(std::size_t i, std::size_t j) const {
    return i * (grid_->n_z() - 2) + (j - 1);
}

Projector::Projector(GridPtr grid) : grid_(std::move(grid)) {
    const CylGrid& g = *grid_;
    const std::size_t nr = g.n_r() - 1;
    const std::size_t nz = g.n_z() - 2;
    n_unknowns_ = nr * nz;
    const double dr = g.dr();
    const double dz = g.dz();

    // Velocity unknowns share the phi numbering; u_r on the axis is fixed at zero.
    using Triplet = Eigen::Triplet<double>;
    std::vector<Triplet> grad_r, grad_z, div_r, div_z;
    for (std::size_t i = 0; i < nr; ++i) {
        for (std::size_t j = 1; j <= nz; ++j) {
            const auto row = static_cast<int>(phi_index(i, j));
            // G_r phi at (i, j) for i >= 1
            if (i >= 1) {
                if (i + 1 < nr) grad_r.emplace_back(row, static_cast<int>(phi_index(i + 1, j)), 0.5 / dr);
                grad_r.emplace_back(row, static_cast<int>(phi_index(i - 1, j)), -0.5 / dr);
            }
            // G_z phi at (i, j)
            if (j + 1 <= nz) grad_z.emplace_back(row, static_cast<int>(phi_index(i, j + 1)), 0.5 / dz);
            if (j - 1 >= 1) grad_z.emplace_back(row, static_cast<int>(phi_index(i, j - 1)), -0.5 / dz);

            // D u at (i, j)
            if (i == 0) {
                div_r.emplace_back(row, static_cast<int>(phi_index(1, j)), 2.0 / dr);
            } else {
                if (i + 1 < nr) div_r.emplace_back(row, static_cast<int>(phi_index(i + 1, j)), 0.5 / dr);
                if (i - 1 >= 1) div_r.emplace_back(row, static_cast<int>(phi_index(i - 1, j)), -0.5 / dr);
                div_r.emplace_back(row, row, 1.0 / g.r(i));
            }
            if (j + 1 <= nz) div_z.emplace_back(row, static_cast<int>(phi_index(i, j + 1)), 0.5 / dz);
            if (j - 1 >= 1) div_z.emplace_back(row, static_cast<int>(phi_index(i, j - 1)), -0.5 / dz);
        }
    }
    const auto n = static_cast<int>(n_unknowns_);
    Eigen::SparseMatrix<double> Gr(n, n), Gz(n, n), Dr(n, n), Dz(n, n);
    Gr.setFromTriplets(grad_r.begin(), grad_r.end());
    Gz.setFromTriplets(grad_z.begin(), grad_z.end());
    Dr.setFromTriplets(div_r.begin(), div_r.end());
    Dz.setFromTriplets(div_z.begin(), div_z.end());
    Eigen::SparseMatrix<double> A = Dr * Gr + Dz * Gz;
    A.makeCompressed();

    lu_ = std::make_unique<Eigen::SparseLU<Eigen::SparseMatrix<double>>>();
    lu_->compute(A);
    if (lu_->info() != Eigen::Success) {
        throw Error("Projector: factorization of the projection operator failed: " +
                    lu_->lastErrorMessage());
    }
}

Eigen::VectorXd Projector::divergence_vector(const ScalarField2D& u_r,
                                             const ScalarField2D& u_z) const {
    const CylGrid& g = *grid_;
    Eigen::VectorXd b(static_cast<Eigen::Index>(n_unknowns_));
    const double dr = g.dr();
    const double dz = g.dz();
    for (std::size_t i = 0; i + 1 < g.n_r(); ++i) {
        for (std::size_t j = 1; j + 1 < g.n_z(); ++j) {
            double div = (u_z(i, j + 1) - u_z(i, j - 1)) / (2.0 * dz);
            if (i == 0) {
                div += 2.0 * u_r(1, j) / dr;
            } else {
                div += (u_r(i + 1, j) - u_r(i - 1, j)) / (2.0 * dr) + u_r(i, j) / g.r(i);
            }
            b[static_cast<Eigen::Index>(phi_index(i, j))] = div;
        }
    }
    return b;
}

void Projector::subtract_gradient(const Eigen::VectorXd& phi, ScalarField2D& u_r,
                                  ScalarField2D& u_z) const {
    const CylGrid& g = *grid_;
    auto at = [&](std::size_t i, std::size_t j) -> double {
        if (i + 1 >= g.n_r() || j == 0 || j + 1 >= g.n_z()) return 0.0;
        return phi[static_cast<Eigen::Index>(phi_index(i, j))];
    };
    for (std::size_t i = 0; i + 1 < g.n_r(); ++i) {
        for (std::size_t j = 1; j + 1 < g.n_z(); ++j) {
            if (i >= 1) u_r(i, j) -= (at(i + 1, j) - at(i - 1, j)) / (2.0 * g.dr());
            u_z(i, j) -= (at(i, j + 1) - at(i, j - 1)) / (2.0 * g.dz());
        }
    }
}

Projector::Result Projector::project(ScalarField2D& u_r, ScalarField2D& u_z, double tol) const {
    const CylGrid& g = *grid_;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            if (g.is_boundary(i, j)) {
                u_r(i, j) = 0.0;
                u_z(i, j) = 0.0;
            }
        }
        if (i == 0) {
            for (std::size_t j = 0; j < g.n_z(); ++j) u_r(0, j) = 0.0;
        }
    }

    Result result{ScalarField2D(grid_, Parity::Even), {}};
    Eigen::VectorXd phi = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_unknowns_));
    Eigen::VectorXd residual = divergence_vector(u_r, u_z);
    constexpr int kMaxRefinements = 4;
    for (int it = 0; it <= kMaxRefinements; ++it) {
        const double res = residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0;
        if (it > 0) result.residual_history.push_back(res);
        if (res <= tol) break;
        if (it == kMaxRefinements) {
            std::ostringstream os;
            os << "projection did not reach tolerance " << tol << "; residual history:";
            for (double h : result.residual_history) os << ' ' << h;
            throw ProjectionFailure(os.str(), result.residual_history);
        }
        const Eigen::VectorXd correction = lu_->solve(residual);
        subtract_gradient(correction, u_r, u_z);
        phi += correction;
        residual = divergence_vector(u_r, u_z);
    }
    if (result.residual_history.empty()) result.residual_history.push_back(
        residual.size() ? residual.cwiseAbs().maxCoeff() : 0.0);

    for (std::size_t i = 0; i + 1 < g.n_r(); ++i) {
        for (std::size_t j = 1; j + 1 < g.n_z(); ++j) {
            result.phi(i, j) = phi[static_cast<Eigen::Index>(phi_index(i, j))];
        }
    }
    return result;
}

double Projector::divergence_residual(const ScalarField2D& u_r, const ScalarField2D& u_z) const {
    const Eigen::VectorXd b = divergence_vector(u_r, u_z);
    return b.size() ? b.cwiseAbs().maxCoeff() : 0.0;
}

AxiSolver::AxiSolver(GridPtr grid, SolverConfig cfg)
    : grid_(std::move(grid)), cfg_(std::move(cfg)), projector_(grid_) {
    cfg_.validate();
}

void AxiSolver::check_stability(const AxisymState& s) const {
    const CylGrid& g = *grid_;
    const double h = std::min(g.dr(), g.dz());
    double umax = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) {
        const double speed = std::hypot(s.u_r.values()[k], s.u_theta.values()[k], s.u_z.values()[k]);
        umax = std::max(umax, speed);
    }
    if (!std::isfinite(umax)) throw Error("AxiSolver: non-finite velocity");
    // Heun is stable for real eigenvalues down to -2/dt; the discrete swirl
    // Laplacian spectrum is bounded by 6/dr^2 + 4/dz^2.
    const double stiff = 6.0 / (g.dr() * g.dr()) + 4.0 / (g.dz() * g.dz());
    const double dt_adv = umax > 0.0 ? cfg_.cfl_safety * h / umax : INFINITY;
    const double dt_visc = 2.0 / (cfg_.nu * stiff);
    const double suggested = 0.9 * std::min(dt_adv, dt_visc);
    const double courant = umax * cfg_.dt / h;
    if (courant > cfg_.cfl_safety) {
        std::ostringstream os;
        os << "CFL violation: max|u| dt / h = " << courant << " > " << cfg_.cfl_safety;
        throw StepRejected(os.str(), suggested);
    }
    if (cfg_.nu * cfg_.dt * stiff > 2.0) {
        std::ostringstream os;
        os << "viscous stability violation: nu dt (6/dr^2 + 4/dz^2) = " << cfg_.nu * cfg_.dt * stiff
           << " > 2";
        throw StepRejected(os.str(), suggested);
    }
}

AxiSolver::Rates AxiSolver::rates(const AxisymState& s, double t) const {
    const CylGrid& g = *grid_;
    const double nu = cfg_.nu;
    const StencilSpec spec{2};
    const ScalarField2D ur_r = d_dr(s.u_r, spec), ur_z = d_dz(s.u_r, spec);
    const ScalarField2D ut_r = d_dr(s.u_theta, spec), ut_z = d_dz(s.u_theta, spec);
    const ScalarField2D uz_r = d_dr(s.u_z, spec), uz_z = d_dz(s.u_z, spec);
    const ScalarField2D lap_r = swirl_laplacian(s.u_r, spec);
    const ScalarField2D lap_t = swirl_laplacian(s.u_theta, spec);
    const ScalarField2D lap_z = axial_laplacian(s.u_z, spec);

    Rates out{ScalarField2D(grid_, Parity::Odd), ScalarField2D(grid_, Parity::Odd),
              ScalarField2D(grid_, Parity::Even)};
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        const double r = g.r(i);
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            if (g.is_boundary(i, j)) continue;
            const double ur = s.u_r(i, j), ut = s.u_theta(i, j), uz = s.u_z(i, j);
            out.z(i, j) = -ur * uz_r(i, j) - uz * uz_z(i, j) + nu * lap_z(i, j);
            if (i == 0) continue;
            out.r(i, j) = -ur * ur_r(i, j) - uz * ur_z(i, j) + ut * ut / r + nu * lap_r(i, j);
            out.theta(i, j) = -ur * ut_r(i, j) - uz * ut_z(i, j) - ut * ur / r + nu * lap_t(i, j);
        }
    }
    if (cfg_.forcing) {
        const ForcingField f = cfg_.forcing(t, grid_);
        for (std::size_t i = 0; i < g.n_r(); ++i) {
            for (std::size_t j = 0; j < g.n_z(); ++j) {
                if (g.is_boundary(i, j)) continue;
                out.z(i, j) += f.z(i, j);
                if (i == 0) continue;
                out.r(i, j) += f.r(i, j);
                out.theta(i, j) += f.theta(i, j);
            }
        }
    }
    return out;
}

AxisymState AxiSolver::prepare(AxisymState state) const {
    const CylGrid& g = *grid_;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            if (i == 0 || g.is_boundary(i, j)) state.u_theta(i, j) = 0.0;
        }
    }
    projector_.project(state.u_r, state.u_z, cfg_.projection_tol);
    refresh_vorticity(state);
    return state;
}

AxisymState AxiSolver::step(const AxisymState& s) const {
    check_stability(s);
    const double dt = cfg_.dt;

    // Stage 1: u1 = P(u + dt F(u, t)).
    const Rates k1 = rates(s, s.t);
    AxisymState s1 = s;
    s1.t = s.t + dt;
    for (std::size_t k = 0; k < grid_->size(); ++k) {
        s1.u_r.values()[k] += dt * k1.r.values()[k];
        s1.u_theta.values()[k] += dt * k1.theta.values()[k];
        s1.u_z.values()[k] += dt * k1.z.values()[k];
    }
    projector_.project(s1.u_r, s1.u_z, cfg_.projection_tol);

    // Stage 2: u^{n+1} = P((u + u1 + dt F(u1, t + dt)) / 2).
    const Rates k2 = rates(s1, s1.t);
    AxisymState next = s;
    next.t = s.t + dt;
    for (std::size_t k = 0; k < grid_->size(); ++k) {
        next.u_r.values()[k] = 0.5 * (s.u_r.values()[k] + s1.u_r.values()[k] + dt * k2.r.values()[k]);
        next.u_theta.values()[k] =
            0.5 * (s.u_theta.values()[k] + s1.u_theta.values()[k] + dt * k2.theta.values()[k]);
        next.u_z.values()[k] = 0.5 * (s.u_z.values()[k] + s1.u_z.values()[k] + dt * k2.z.values()[k]);
    }
    const Projector::Result proj = projector_.project(next.u_r, next.u_z, cfg_.projection_tol);

    // The last projection removes (dt/2) grad p.
    next.pressure = (2.0 / dt) * proj.phi;
    refresh_vorticity(next);
    next.u_r.require_finite("step(u_r)");
    next.u_theta.require_finite("step(u_theta)");
    next.u_z.require_finite("step(u_z)");
    return next;
}

double AxiSolver::divergence_residual(const AxisymState& state) const {
    return projector_.divergence_residual(state.u_r, state.u_z);
}

AxisymState step(const AxisymState& state, const SolverConfig& cfg) {
    return AxiSolver(state.u_r.grid_ptr(), cfg).step(state);
}

double kinetic_energy(const AxisymState& s) {
    ScalarField2D e(s.u_r.grid_ptr(), Parity::Even);
    for (std::size_t k = 0; k < e.values().size(); ++k) {
        const double a = s.u_r.values()[k], b = s.u_theta.values()[k], c = s.u_z.values()[k];
        e.values()[k] = 0.5 * (a * a + b * b + c * c);
    }
    return integrate_cyl(e);
}

namespace {

ScalarField2D midpoint(const ScalarField2D& a, const ScalarField2D& b) {
    ScalarField2D out = a;
    out += b;
    out *= 0.5;
    return out;
}

double over_r_at(const ScalarField2D& f, const ScalarField2D& df_dr, std::size_t i, std::size_t j) {
    if (i == 0) return df_dr(0, j);
    return f(i, j) / f.grid().r(i);
}

}  // namespace

VorticityResidual vorticity_residual(const AxisymState& prev, const AxisymState& next,
                                     const SolverConfig& cfg) {
    prev.u_r.require_same_grid(next.u_r);
    const GridPtr& grid = prev.u_r.grid_ptr();
    const CylGrid& g = *grid;
    const double dt = next.t - prev.t;
    if (!(dt > 0.0)) throw Error("vorticity_residual: states are not time ordered");

    const StencilSpec spec{2};
    const VorticityField w0 = curl_cyl(prev.u_r, prev.u_theta, prev.u_z, spec);
    const VorticityField w1 = curl_cyl(next.u_r, next.u_theta, next.u_z, spec);
    const ScalarField2D ur = midpoint(prev.u_r, next.u_r);
    const ScalarField2D ut = midpoint(prev.u_theta, next.u_theta);
    const ScalarField2D uz = midpoint(prev.u_z, next.u_z);
    const ScalarField2D wr = midpoint(w0.r, w1.r);
    const ScalarField2D wt = midpoint(w0.theta, w1.theta);
    const ScalarField2D wz = midpoint(w0.z, w1.z);

    const ScalarField2D ur_r = d_dr(ur, spec), ur_z = d_dz(ur, spec);
    const ScalarField2D ut_r = d_dr(ut, spec);
    const ScalarField2D uz_r = d_dr(uz, spec), uz_z = d_dz(uz, spec);
    const ScalarField2D wr_r = d_dr(wr, spec), wr_z = d_dz(wr, spec);
    const ScalarField2D wt_r = d_dr(wt, spec), wt_z = d_dz(wt, spec);
    const ScalarField2D wz_r = d_dr(wz, spec), wz_z = d_dz(wz, spec);
    const ScalarField2D lap_wr = swirl_laplacian(wr, spec);
    const ScalarField2D lap_wt = swirl_laplacian(wt, spec);
    const ScalarField2D lap_wz = axial_laplacian(wz, spec);

    std::optional<VorticityField> fcurl;
    if (cfg.forcing) {
        const ForcingField f = cfg.forcing(0.5 * (prev.t + next.t), grid);
        fcurl = curl_cyl(f.r, f.theta, f.z, spec);
    }

    const double nu = cfg.nu;
    constexpr std::size_t kAxisLayers = 3;
    double sr = 0.0, st = 0.0, sz = 0.0;
    for (std::size_t i = kAxisLayers; i + 2 < g.n_r(); ++i) {
        for (std::size_t j = 2; j + 2 < g.n_z(); ++j) {
            const double w = g.quad_weight(i, j);
            if (w == 0.0) continue;
            double rr = (w1.r(i, j) - w0.r(i, j)) / dt + ur(i, j) * wr_r(i, j) +
                        uz(i, j) * wr_z(i, j) - ur_r(i, j) * wr(i, j) - ur_z(i, j) * wz(i, j) -
                        nu * lap_wr(i, j);
            double rt = (w1.theta(i, j) - w0.theta(i, j)) / dt + ur(i, j) * wt_r(i, j) +
                        uz(i, j) * wt_z(i, j) - over_r_at(ur, ur_r, i, j) * wt(i, j) +
                        2.0 * over_r_at(ut, ut_r, i, j) * wr(i, j) - nu * lap_wt(i, j);
            double rz = (w1.z(i, j) - w0.z(i, j)) / dt + ur(i, j) * wz_r(i, j) +
                        uz(i, j) * wz_z(i, j) - uz_r(i, j) * wr(i, j) - uz_z(i, j) * wz(i, j) -
                        nu * lap_wz(i, j);
            if (fcurl) {
                rr -= fcurl->r(i, j);
                rt -= fcurl->theta(i, j);
                rz -= fcurl->z(i, j);
            }
            sr += w * rr * rr;
            st += w * rt * rt;
            sz += w * rz * rz;
        }
    }
    return VorticityResidual{std::sqrt(sr), std::sqrt(st), std::sqrt(sz)};
}

}  // namespace axireg
