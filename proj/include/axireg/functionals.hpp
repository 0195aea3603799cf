#pragma once

/// @file functionals.hpp
/// @brief Weighted functionals, the three coupling integrals, and the terms of
/// the two weighted energy balances evaluated on an AxisymState.
///
/// Notation used below, with v = u_theta / r^mu and w = omega_theta / r^alpha:
///   Phi   = int |v|^p dx             Omega = int |w|^q dx
///   I1    = int (u_r^- / r) |v|^p    I2    = int (u_r^+ / r) |w|^q
///   I3    = int (u_theta / r) du_theta/dz |w|^{q-2} w / r^alpha
/// where u^+ = max(u, 0) and u^- = max(-u, 0).
///
/// The two balances (continuous identities, exact for smooth decaying flows):
///   (1/p) dPhi/dt + 4(p-1)nu/p^2 int|grad |v|^{p/2}|^2 + nu(1-mu^2) int |v|^p/r^2
///       + (1+mu) int (u_r^+/r)|v|^p = (1+mu) I1
///   (1/q) dOmega/dt + 4nu(q-1)/q^2 int|grad |w|^{q/2}|^2 + nu(1-alpha^2) int |w|^q/r^2
///       + (1-alpha) int (u_r^-/r)|w|^q = (1-alpha) I2 + 2 I3
/// Their sum is the combined balance whose right side is
/// (1+mu) I1 + (1-alpha) I2 + 2 I3.

#include "axireg/exponents.hpp"
#include "axireg/grid.hpp"
#include "axireg/operators.hpp"

namespace axireg {

struct FunctionalOptions {
    Quadrature rule = Quadrature::AxisCorrected;
    StencilSpec stencil{2};
};

struct FunctionalSet {
    double phi_p = 0.0;
    double omega_q = 0.0;
    double grad_phi = 0.0;    ///< int |grad |v|^{p/2}|^2
    double grad_omega = 0.0;  ///< int |grad |w|^{q/2}|^2
    double axis_phi = 0.0;    ///< int |v|^p / r^2
    double axis_omega = 0.0;  ///< int |w|^q / r^2
    double damp_phi = 0.0;    ///< int (u_r^+/r) |v|^p
    double damp_omega = 0.0;  ///< int (u_r^-/r) |w|^q
    double I1 = 0.0;
    double I2 = 0.0;
    double I3 = 0.0;
    double f_serrin = 0.0;
    double g_ur = 0.0;        ///< int (u_r^+)^{10/3}
    double varpi = 0.0;       ///< max |r^{1-delta0} u_theta|
    double r_ut_inf = 0.0;    ///< max |r u_theta|
};

double eval_I1(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt = {});
double eval_I2(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt = {});
double eval_I3(const AxisymState& s, const CriterionParams& c, const FunctionalOptions& opt = {});

/// [ int_{r < delta1} |r^d u_r^+|^s dx ]^{w/s}
double eval_f_serrin(const AxisymState& s, const SerrinCondition& cond,
                     const FunctionalOptions& opt = {});
double eval_g(const AxisymState& s, const FunctionalOptions& opt = {});

/// C^2 cutoff: 1 on r <= delta1/2, 0 on r >= delta1, quintic smoothstep between.
double cutoff_profile(double r, double delta1);
ScalarField2D smooth_cutoff(const GridPtr& grid, double delta1);

/// int |f / r^beta|^m / r^2 dx
double eval_axis_weighted(const ScalarField2D& f, double beta, double m,
                          const FunctionalOptions& opt = {});

/// int |grad |f / r^beta|^{m/2}|^2 dx, using
/// |grad G|^2 = (m/2)^2 |v|^{m-2} |grad v|^2 with v = f / r^beta.
double eval_grad_weighted(const ScalarField2D& f, double beta, double m,
                          const FunctionalOptions& opt = {});

/// int |v|^{p-2} |du_theta/dz / r^mu|^2 dx (the first term of the I3 bound).
double eval_swirl_z_energy(const AxisymState& s, const CriterionParams& c,
                           const FunctionalOptions& opt = {});

double eval_varpi(const AxisymState& s, double delta0);
double eval_r_ut_inf(const AxisymState& s);

FunctionalSet evaluate_functionals(const AxisymState& s, const CriterionParams& c,
                                   const SerrinCondition& cond, const FunctionalOptions& opt = {});

/// Terms of one weighted energy balance over a step [t0, t1]: the time
/// derivative by a difference quotient, every other term averaged over the
/// two end states.
struct IdentityTerms {
    double time_derivative = 0.0;
    double gradient = 0.0;
    double axis = 0.0;
    double damping = 0.0;
    double rhs_radial = 0.0;   ///< (1+mu) I1 or (1-alpha) I2
    double rhs_coupling = 0.0; ///< 2 I3 (zero for the swirl balance)
    double lhs = 0.0;
    double rhs = 0.0;
    double residual = 0.0;     ///< lhs - rhs
};

IdentityTerms identity_d_from(const FunctionalSet& a, const FunctionalSet& b, double dt,
                              const CriterionParams& c, double nu);
IdentityTerms identity_i_from(const FunctionalSet& a, const FunctionalSet& b, double dt,
                              const CriterionParams& c, double nu);

IdentityTerms eval_identity_d_terms(const AxisymState& s0, const AxisymState& s1,
                                    const CriterionParams& c, double nu,
                                    const FunctionalOptions& opt = {});
IdentityTerms eval_identity_i_terms(const AxisymState& s0, const AxisymState& s1,
                                    const CriterionParams& c, double nu,
                                    const FunctionalOptions& opt = {});

/// Termwise sum of the two balances.
IdentityTerms assemble_main(const IdentityTerms& d, const IdentityTerms& i);

}  // namespace axireg
