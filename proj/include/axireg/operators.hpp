#pragma once

/// @file operators.hpp
/// @brief Finite-difference operators in cylindrical coordinates for
/// axisymmetric fields.
///
/// Interior nodes use centered stencils of the requested order. At r = 0 the
/// stencil reads ghost values mirrored through the axis with the field's
/// parity; at r = R and z = +-Z it switches to one-sided closures of the
/// same order. Terms carrying 1/r are replaced on the axis by their limits
/// (f/r -> df/dr for odd f, (1/r) df/dr -> d2f/dr2 for even f).

#include <string>

#include "axireg/grid.hpp"

namespace axireg {

struct StencilSpec {
    int order = 2;  ///< 2 or 4

    std::string boundary_scheme() const;
    void validate() const;
};

ScalarField2D d_dr(const ScalarField2D& f, StencilSpec spec = {});
ScalarField2D d_dz(const ScalarField2D& f, StencilSpec spec = {});
ScalarField2D d2_dr2(const ScalarField2D& f, StencilSpec spec = {});
ScalarField2D d2_dz2(const ScalarField2D& f, StencilSpec spec = {});

/// du_r/dr + u_r/r + du_z/dz.
ScalarField2D divergence_cyl(const ScalarField2D& u_r, const ScalarField2D& u_z,
                             StencilSpec spec = {});

struct VorticityField {
    ScalarField2D r;      ///< -du_theta/dz
    ScalarField2D theta;  ///< du_r/dz - du_z/dr
    ScalarField2D z;      ///< du_theta/dr + u_theta/r
};

VorticityField curl_cyl(const ScalarField2D& u_r, const ScalarField2D& u_theta,
                        const ScalarField2D& u_z, StencilSpec spec = {});

/// (1/r) d/dr(r df/dr) + d2f/dz2 - f/r^2 for an odd field vanishing on the axis.
ScalarField2D swirl_laplacian(const ScalarField2D& f, StencilSpec spec = {});

/// (1/r) d/dr(r df/dr) + d2f/dz2 for an even field.
ScalarField2D axial_laplacian(const ScalarField2D& f, StencilSpec spec = {});

struct GradientField {
    ScalarField2D df_dr;
    ScalarField2D df_dz;
};

GradientField gradient_cyl(const ScalarField2D& f, StencilSpec spec = {});

/// Recomputes omega_r, omega_theta, omega_z from the velocity.
void refresh_vorticity(AxisymState& state, StencilSpec spec = {});

}  // namespace axireg
