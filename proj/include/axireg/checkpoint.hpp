#pragma once

/// @file checkpoint.hpp
/// @brief Binary snapshot of an AxisymState.
///
/// Layout (all little-endian):
///   "AXRG"                        4 bytes
///   format version                u32
///   n_r, n_z                      u32, u32
///   r_max, z_half, t              f64 x 3
///   u_r, u_theta, u_z, pressure   f64[n_r * n_z] each, row-major [i_r][i_z]
/// Vorticity is derived and not stored.

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "axireg/grid.hpp"

namespace axireg {

inline constexpr std::uint32_t kCheckpointVersion = 1;

void write_checkpoint(std::ostream& out, const AxisymState& state);
void write_checkpoint(const std::filesystem::path& path, const AxisymState& state);

/// Returns the stored fields; vorticity components are left at zero, call
/// refresh_vorticity() to rebuild them.
AxisymState read_checkpoint(std::istream& in);
AxisymState read_checkpoint(const std::filesystem::path& path);

}  // namespace axireg
