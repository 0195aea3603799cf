#pragma once

/// @file monitor.hpp
/// @brief Simulation driver that records the weighted functionals, checks the
/// combined differential inequality and tracks Gronwall-type bounds.
///
/// Combined inequality tracked per row:
///   dPhi/dt + dOmega/dt + 4(p-1)nu/p int|grad|v|^{p/2}|^2 + 4nu(q-1)/q int|grad|w|^{q/2}|^2
///     + nu(1-mu^2) int|v|^p/r^2 + nu(1-alpha^2) int|w|^q/r^2   <=   C (1 + f + g) Omega
/// with C composed from the constants of the three estimate chains.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "axireg/exponents.hpp"
#include "axireg/functionals.hpp"
#include "axireg/inequalities.hpp"
#include "axireg/initial_data.hpp"
#include "axireg/solver.hpp"

namespace axireg {

struct GridSettings {
    double r_max = 4.0;
    double z_half = 4.0;
    std::size_t n_r = 64;
    std::size_t n_z = 64;
    int stencil_order = 2;
};

struct MonitorSettings {
    std::string name = "run";
    std::filesystem::path out_dir = "runs";
    int cadence = 10;           ///< solver steps between records
    int checkpoint_every = 0;   ///< records between checkpoints; 0 writes only the final one
    double chain_eps = 0.1;     ///< eps used in every absorbed term of the chains
    double safety = 2.0;        ///< factor on empirical and literature constants
    std::size_t aq_ensemble = 100;
    std::uint64_t seed = 1;
    bool write_files = true;
};

struct RunConfig {
    SolverConfig solver;
    GridSettings grid;
    double eps = 0.05;
    double delta0 = 0.2;
    SerrinCondition serrin;
    InitialData initial;
    MonitorSettings monitor;

    /// Throws Error naming the first invalid setting.
    void validate() const;
    CriterionParams params() const;
};

struct MonitorRecord {
    double t = 0.0;
    FunctionalSet f;
    double identity_d_residual = 0.0;
    double identity_i_residual = 0.0;
    double bf_lhs = 0.0;
    double bf_rhs = 0.0;
    double gronwall_bound = 0.0;
    double loglog_bound = 0.0;
    double al_ratio = 0.0;  ///< int|u_r/r^{1+alpha}|^q / int|w|^q, 0 when both vanish
};

/// Column names in CSV order.
const std::vector<std::string>& record_columns();
std::vector<double> record_values(const MonitorRecord& r);
MonitorRecord record_from_values(const std::vector<double>& v);

struct Trajectory {
    std::vector<MonitorRecord> records;
    bool complete = false;
    std::string status;  ///< "completed" or "failed: <reason>"
};

void write_series(std::ostream& out, const Trajectory& traj);
void write_series(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_series(std::istream& in);
Trajectory read_series(const std::filesystem::path& path);

/// Constants of the combined inequality and their provenance.
struct ComposedConstant {
    double C = 0.0;
    double C_I1 = 0.0;
    double C_I2 = 0.0;
    double C_I3 = 0.0;
    std::vector<LabeledConstant> parts;
};

/// max(p,q) * max((1+mu) C_I1 + 2 C_I3, (1-alpha) C_I2).
double compose_constant(const CriterionParams& c, double C_I1, double C_I2, double C_I3);

struct RunResult {
    Trajectory trajectory;
    double composed_C = 0.0;  ///< largest composed constant over the run
    AqEstimate aq_weighted;   ///< calibration used by the I1 chain
    AqEstimate aq_unweighted; ///< calibration of the ratio in al_ratio
    int chain_failures = 0;   ///< chain reports that failed on the run's own fields
    std::filesystem::path dir;
};

/// Runs the simulation and writes series.csv, meta.json and checkpoints
/// under out_dir/name. A solver failure keeps the rows written so far and
/// appends a failed status row.
RunResult run(const RunConfig& cfg);

/// y0 exp(C int_0^t a), trapezoid in time. t and a have equal length.
std::vector<double> gronwall_bound(const std::vector<double>& t, const std::vector<double>& a,
                                   double y0, double C);
/// Same with a running constant C[k] applied to the whole integral up to t[k].
std::vector<double> gronwall_bound(const std::vector<double>& t, const std::vector<double>& a,
                                   double y0, const std::vector<double>& C);

/// Bound from d/dt ln(1 + ln+ y) <= C a(t): plain Gronwall while the bound
/// stays <= 1, double-log growth afterwards. a is typically 1 + f~.
std::vector<double> loglog_gronwall(const std::vector<double>& t, const std::vector<double>& a,
                                    double y0, double C);

double ln_plus(double x);

struct VerdictCheck {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct Verdict {
    enum class Status { Consistent, Violated, Inconclusive };
    Status status = Status::Inconclusive;
    std::string summary;
    std::vector<VerdictCheck> checks;
};

/// Checks: Omega_q below the Gronwall bound on every row; al_ratio finite and
/// within al_constant; every exponent window; the scaling gap. The final
/// regularity step relies on an external theorem and is not verified here.
Verdict verdict(const Trajectory& traj, const CriterionParams& params,
                const SerrinCondition& cond, double al_constant);

nlohmann::json to_json(const Verdict& v);
std::string to_string(Verdict::Status s);

}  // namespace axireg
