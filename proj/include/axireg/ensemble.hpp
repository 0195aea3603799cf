#pragma once

/// @file ensemble.hpp
/// @brief Seeded random smooth decaying axisymmetric states used to exercise the
/// functionals and inequality chains.
///
/// A member is a sum of Gaussian modes. Meridional modes enter through the
/// Stokes streamfunction psi = A r^2 exp(-(r^2 + (z-c)^2)/w^2), with
/// u_r = -(1/r) dpsi/dz and u_z = (1/r) dpsi/dr, so (u_r, u_z) is exactly
/// divergence free. Swirl modes are u_theta = B r (1 + k z) exp(-(r^2 + (z-c)^2)/w^2).
/// Velocity and vorticity are sampled from closed forms.

#include <cstdint>
#include <random>
#include <vector>

#include "axireg/grid.hpp"

namespace axireg {

struct GaussianMode {
    double amp = 0.0;
    double center = 0.0;  ///< z offset
    double width = 1.0;
    double tilt = 0.0;    ///< swirl modes only: linear z factor (1 + tilt z)
};

struct EnsembleMember {
    std::vector<GaussianMode> stream;
    std::vector<GaussianMode> swirl;
};

struct EnsembleRanges {
    int stream_modes = 2;
    int swirl_modes = 2;
    double amp_max = 1.0;
    double center_max = 0.75;
    double width_min = 0.4;
    double width_max = 0.9;
    double tilt_max = 0.5;
};

/// Point values of the closed-form fields.
struct PointFields {
    double u_r = 0.0, u_theta = 0.0, u_z = 0.0;
    double omega_r = 0.0, omega_theta = 0.0, omega_z = 0.0;
};

PointFields evaluate_member(const EnsembleMember& m, double r, double z);

EnsembleMember random_member(std::mt19937_64& rng, const EnsembleRanges& ranges = {});

/// `count` members drawn from one stream seeded with `seed`.
std::vector<EnsembleMember> make_ensemble(std::uint64_t seed, std::size_t count,
                                          const EnsembleRanges& ranges = {});

/// Samples velocity and vorticity; pressure is zero.
AxisymState sample_member(const EnsembleMember& m, const GridPtr& grid, double t = 0.0);

}  // namespace axireg
