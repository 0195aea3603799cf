#pragma once

/// @file inequalities.hpp
/// @brief The estimate chains for the three coupling integrals, replayed with
/// computable constants and checked as numerical inequalities.
///
/// All integrals inside a chain use the plain trapezoid rule. Its weights are
/// positive, so every pointwise Young step and every discrete Hoelder step
/// holds exactly for the weighted sums.
///
/// Constants carry a provenance tag:
///   "explicit"   closed form from Young/Hoelder exponents
///   "empirical"  sup-ratio calibrated on an ensemble, times a safety factor
///   "literature" sharp Sobolev constant in R^3

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "axireg/ensemble.hpp"
#include "axireg/exponents.hpp"
#include "axireg/grid.hpp"
#include "axireg/operators.hpp"

namespace axireg {

inline constexpr double kReportRelTol = 1e-10;

/// Sharp constant S in ||G||_{L^6(R^3)}^2 <= S ||grad G||_{L^2(R^3)}^2:
/// S = (1/3) (2/pi)^{4/3}.
double sobolev_constant_sq();

struct LabeledConstant {
    std::string label;
    double value = 0.0;
    std::string provenance;
};

struct RhsTerm {
    std::string label;
    double coefficient = 0.0;
    double integral = 0.0;
};

struct InequalityReport {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  ///< rhs - lhs
    std::vector<LabeledConstant> constants_used;
    std::vector<RhsTerm> terms;
    std::vector<WindowCheck> bookkeeping;
    bool pass = false;
    bool inconclusive = false;
    std::string note;

    /// Sets margin and pass from lhs, rhs and bookkeeping.
    void finalize();
    /// Coefficient of the term with this label, or 0.
    double coefficient(const std::string& label) const;
};

/// C(eps) = (1/q')(eps p')^{-q'/p'}, so that A B <= eps A^{p'} + C(eps) B^{q'}.
double young_constant(double eps, double p_exp, double q_exp);

struct YoungBound {
    double first = 0.0;     ///< eps A^{p'}
    double second = 0.0;    ///< C(eps) B^{q'}
    double constant = 0.0;  ///< C(eps)
    double bound() const { return first + second; }
};

/// Throws Error unless p', q' > 1 are conjugate to 1e-12 and eps > 0, A, B >= 0.
YoungBound young(double A, double B, double p_exp, double q_exp, double eps);

/// Multi-factor form prod x_k <= sum x_k^{P_k} / P_k for exponents with
/// sum 1/P_k = 1. Throws Error otherwise.
double young_multi(const std::vector<double>& x, const std::vector<double>& exps);

/// Discrete Hoelder: int |f g| <= (int |f|^p)^{1/p} (int |g|^q)^{1/q}, trapezoid rule.
InequalityReport verify_holder_step(const ScalarField2D& f, const ScalarField2D& g, double p,
                                    double q);

struct ChainOptions {
    StencilSpec stencil{2};
    double safety = 2.0;
};

/// |I3| <= eps1 int|v|^{p-2}|u_theta,z / r^mu|^2 + eps2 int|v|^p/r^2
///         + eps3 int|w|^q/r^2 + C int|w|^q.
InequalityReport verify_I3_chain(const AxisymState& s, const CriterionParams& c, double eps1,
                                 double eps2, double eps3, const ChainOptions& opt = {});

struct AqIntegrals {
    double lhs = 0.0;  ///< int |u_r / r^{1+alpha}|^q r^{-(2 - eps0 q)}
    double rhs = 0.0;  ///< int |omega_theta / r^alpha|^q r^{-(2 - eps0 q)}
};
AqIntegrals aq_integrals(const AxisymState& s, double q, double alpha, double eps0,
                         Quadrature rule = Quadrature::Trapezoid);

struct AqEstimate {
    double sup_ratio = 0.0;
    std::vector<double> ratios;  ///< one per usable member, in ensemble order
    std::size_t skipped = 0;     ///< members with both sides zero
    /// sup over all members divided by sup over the first half, minus 1.
    double growth = 0.0;
};

/// Sup of lhs/rhs over the states. Throws Error on rhs = 0 < lhs, or when the
/// window check for (q, alpha, eps0) fails.
AqEstimate estimate_aq_constant(double q, double alpha, double eps0,
                                const std::vector<AxisymState>& states);
/// Same over `ensemble_size` fresh members sampled on `grid`.
AqEstimate estimate_aq_constant(double q, double alpha, double eps0, std::size_t ensemble_size,
                                const GridPtr& grid, std::uint64_t seed,
                                const EnsembleRanges& ranges = {});

/// |I1| <= eps4 int|v|^p/r^2 + eps5 int|w|^q/r^2 + C int|w|^q, routed through
/// the weighted estimate with constant aq_constant * safety. Without a finite
/// aq_constant the report is inconclusive.
InequalityReport verify_I1_chain(const AxisymState& s, const CriterionParams& c, double delta0,
                                 double eps4, double eps5, std::optional<double> aq_constant,
                                 const ChainOptions& opt = {});

/// |I2| <= eps1 int|w|^q/r^2 + eps2 int|grad|w|^{q/2}|^2 + (C0 f + C1 g) int|w|^q.
InequalityReport verify_I2_chain(const AxisymState& s, const SerrinCondition& cond, double q,
                                 double alpha, double eps1, double eps2,
                                 const ChainOptions& opt = {});

/// [int G^6]^{1/3} <= S int |grad G|^2 for G >= 0.
InequalityReport verify_sobolev_step(const ScalarField2D& G, const StencilSpec& stencil = {},
                                     Quadrature rule = Quadrature::AxisCorrected);

nlohmann::json to_json(const InequalityReport& r);

}  // namespace axireg
