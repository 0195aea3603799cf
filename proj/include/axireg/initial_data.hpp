#pragma once

/// @file initial_data.hpp
/// @brief Smooth, decaying, axisymmetric initial velocity recipes.

#include <map>
#include <string>

#include "axireg/grid.hpp"

namespace axireg {

/// Recipes (parameters in brackets, defaults in parentheses):
///   rest                         u = 0
///   pure_swirl  [swirl=1, width=1]
///       u_theta = swirl r exp(-(r^2 + z^2)/width^2), u_r = u_z = 0
///   swirl_ring  [swirl=1, width=1, meridional=0.5, z0=0]
///       pure swirl plus the meridional flow of the streamfunction
///       psi = meridional r^2 exp(-(r^2 + (z - z0)^2)/width^2),
///       u_r = -(1/r) dpsi/dz, u_z = (1/r) dpsi/dr
///   checkpoint  (path)           fields read from a checkpoint file
struct InitialData {
    std::string recipe = "pure_swirl";
    std::map<std::string, double> params;
    std::string checkpoint_path;

    double param(const std::string& key, double fallback) const;
};

/// Samples the recipe on the grid. The result is divergence-free in the
/// continuum only; run it through AxiSolver::prepare before stepping.
AxisymState make_initial_state(const InitialData& data, const GridPtr& grid);

}  // namespace axireg
