#pragma once

/// @file exponents.hpp
/// @brief Exponent bookkeeping for the weighted regularity criterion: the
/// one-parameter family used for the final estimate, the general exponent
/// relations, and validators for every admissibility window.
///
/// All windows are open intervals. Exact algebraic identities are checked
/// to kIdentityTol absolute.

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace axireg {

inline constexpr double kIdentityTol = 1e-12;

/// Exponents of the weighted functionals
///   Phi = || u_theta / r^mu ||_p^p,   Omega = || omega_theta / r^alpha ||_q^q
/// and the auxiliary parameters that appear in the estimates.
struct CriterionParams {
    double eps = 0.0;     ///< family parameter, (0, 1/14)
    double delta0 = 0.0;  ///< swirl decay exponent in ||r^{1-delta0} u_theta||_inf
    double gamma = 0.0;
    double q = 0.0;
    double p = 0.0;       ///< (4 - gamma) q / 2
    double mu = 0.0;
    double a = 0.0;
    double alpha = 0.0;   ///< 2 mu - (gamma/2)(1 + mu) - (2(q-1)/q)(1 - a)
    double kappa = 0.0;   ///< -(2(q-1)/q)(1 - a)
    double eps0 = 0.0;    ///< kappa + delta0 p / q
    double b = 0.0;       ///< 1 - q eps0 / 2
};

/// Weighted Serrin-type hypothesis on the positive part of u_r near the axis:
/// r^d u_r^+ in L^w_t L^s_x on {r < delta1}, with 2/w + 3/s + d = 1.
struct SerrinCondition {
    double s = 6.0;
    double w = 4.0;
    double d = 0.0;
    double delta1 = 0.5;
};

struct WindowCheck {
    std::string name;
    bool pass = false;
    double value = 0.0;
    double lower = 0.0;  ///< for identities: the target value
    double upper = 0.0;
    double margin = 0.0;  ///< distance to the nearest violated/active bound (negative on failure)
};

struct ValidationReport {
    std::string name;
    std::vector<WindowCheck> checks;

    bool pass() const;
    std::vector<std::string> violations() const;
    void add_open(const std::string& name, double value, double lower, double upper);
    void add_identity(const std::string& name, double value, double target,
                      double tol = kIdentityTol);
    void add_condition(const std::string& name, bool ok, double value = 0.0);
};

/// alpha from the general relation with gamma, mu, a, q.
double alpha_relation(double gamma, double mu, double a, double q);

/// Smallest delta0 allowed by ((1 - 2 eps)/(1 - eps)) eps <= delta0.
double minimal_delta0(double eps);

/// The family p = 2(1-eps^2), q = 2(1-eps), mu = (1-eps)/(1+eps),
/// gamma = 2(1-eps), a = 1 - 2(1-eps^2) eps. Throws Error when eps is outside
/// (0, 1/14), delta0 outside (0, 1/3), or delta0 does not strictly exceed
/// minimal_delta0(eps).
CriterionParams params_from_epsilon(double eps, double delta0);

/// General tuple from (gamma, q, mu, a, delta0); derived fields filled in.
CriterionParams params_from_exponents(double gamma, double q, double mu, double a, double delta0);

ValidationReport validate_prop_I3(const CriterionParams& params);
ValidationReport validate_aq_window(double q, double alpha, double eps0);
ValidationReport validate_prop_I1(const CriterionParams& params, double delta0);
/// 0 < eps0 < 2/q, i.e. b in (0, 1); needed by the interpolation step of the I1 chain.
ValidationReport validate_b_window(const CriterionParams& params);
ValidationReport validate_serrin(const SerrinCondition& cond);

struct SerrinDerived {
    double a = 0.0;  ///< 2 / (2 - (2/w + 3/s))
    double b = 0.0;  ///< 2 s / w + 3
};
SerrinDerived derived_ab(const SerrinCondition& cond);

struct ScalingGap {
    double value = 0.0;  ///< 3/q - 1 - alpha
    double bound = 0.0;  ///< 1/2 + 7 eps
    bool pass = false;   ///< value <= bound and bound < 1
};
ScalingGap check_serrin_scaling_gap(const CriterionParams& params);

/// Every window relevant to the family tuple (and the Serrin condition if given).
std::vector<ValidationReport> validate_all(const CriterionParams& params,
                                           const std::optional<SerrinCondition>& cond = {});

nlohmann::json to_json(const CriterionParams& params);
nlohmann::json to_json(const SerrinCondition& cond);
nlohmann::json to_json(const ValidationReport& report);

}  // namespace axireg
