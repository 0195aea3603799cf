#pragma once

/// @file config.hpp
/// @brief INI-style run configuration.
///
/// Sections and keys (units in brackets):
///   [solver]    nu [length^2/time], dt [time], t_end [time], cfl_safety,
///               projection_tol [1/time], r_max, z_half [length],
///               n_r, n_z [nodes], stencil_order (2 or 4)
///   [criterion] eps, delta0
///   [serrin]    s, w, d, delta1 [length]
///   [monitor]   name, out_dir, cadence [steps], checkpoint_every [records],
///               chain_eps, safety, aq_ensemble [members], seed
///   [initial]   recipe, checkpoint, and any numeric recipe parameter
/// Unknown sections or keys are rejected.

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "axireg/monitor.hpp"

namespace axireg {

RunConfig parse_run_config(std::istream& in);
RunConfig load_run_config(const std::filesystem::path& path);

/// Applies one "section.key=value" override.
void apply_override(RunConfig& cfg, const std::string& assignment);

nlohmann::json to_json(const RunConfig& cfg);

}  // namespace axireg
