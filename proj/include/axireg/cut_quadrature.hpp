#pragma once

/// @file cut_quadrature.hpp
/// @brief Corrections of the nodal sum for integrands that are smooth except
/// at the zeros of a smooth "switch" field or at a sharp cut.
///
/// Along a uniform line with spacing h, let the integrand behave near an
/// isolated point x0 = x_k + theta h like c_R (x - x0)^lambda to the right and
/// c_L (x0 - x)^lambda to the left. Then
///   h sum f(x_j) - int f = h^{1+lambda} [c_R zeta(-lambda, 1-theta) + c_L zeta(-lambda, theta)]
/// to leading order, with zeta the Hurwitz zeta function. One-sided kinks
/// (lambda = 1) also carry the next two terms of the expansion.

#include <span>
#include <vector>

#include "axireg/grid.hpp"

namespace axireg {

/// Hurwitz zeta for s != 1 and a > 0, extended continuously to a = 0 when s <= 0.
double hurwitz_zeta(double s, double a);

enum class CutKind {
    Even,      ///< |s|^lambda H
    Odd,       ///< sign(s) |s|^lambda H
    Positive,  ///< (s^+)^lambda H
    Negative,  ///< (s^-)^lambda H
};

/// Sum over the sign changes of s of the leading error terms of the plain
/// nodal sum h sum_j f_j along one line. Cells within two nodes of either end
/// are skipped.
double cut_correction_1d(std::span<const double> s, std::span<const double> H, double h,
                         CutKind kind, double lambda);

/// Per radial column i, the correction of the z sum, for f = kind(s)^lambda H.
std::vector<double> column_cut_corrections(const ScalarField2D& s, const ScalarField2D& H,
                                           CutKind kind, double lambda);

/// Error of h sum_{x_j <= x0} S(x_j) against int_{-inf}^{x0} S for smooth S,
/// where x0 lies theta h to the right of the last included node.
double left_cut_error(double S0, double S1, double S2, double S3, double h, double theta);

/// Point of the zero set of s where it runs parallel to z (s = s_z = 0).
struct TurningPoint {
    double r, z;
    double s_r, s_zz;
};

/// Turning points between radial columns whose crossing counts differ.
std::vector<TurningPoint> turning_points(const ScalarField2D& s);

/// Leading error of the radial sum of column integrals caused by turning
/// points, where the column integral has a |r - r*|^{lambda + 1/2} term.
/// Includes the 2 pi r measure.
double turning_point_correction(const ScalarField2D& s, const ScalarField2D& H, CutKind kind,
                                double lambda);

/// integrate_cyl with per-column corrections subtracted before the axis
/// correction is applied. corr has one entry per radial index.
double integrate_cyl_corrected(const ScalarField2D& f, Quadrature rule, double axis_power,
                               const std::vector<double>& corr);

}  // namespace axireg
