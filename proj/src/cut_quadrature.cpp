#include "axireg/cut_quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace axireg {

namespace {

// Cubic through (t, y) = (-1, y0), (0, y1), (1, y2), (2, y3).
struct Cubic {
    double a0, a1, a2, a3;

    Cubic(double ym, double y0, double y1, double y2) {
        a0 = y0;
        a2 = 0.5 * (y1 + ym) - y0;
        const double m = 0.5 * (y1 - ym);
        a3 = (y2 - y0 - 4.0 * a2 - 2.0 * m) / 6.0;
        a1 = m - a3;
    }
    double operator()(double t) const { return a0 + t * (a1 + t * (a2 + t * a3)); }
    double d1(double t) const { return a1 + t * (2.0 * a2 + 3.0 * t * a3); }
    double d2(double t) const { return 2.0 * a2 + 6.0 * t * a3; }
    double d3() const { return 6.0 * a3; }
};

// Root of c in [0, 1] given opposite (or zero) signs at the ends.
double root_in_cell(const Cubic& c) {
    double lo = 0.0, hi = 1.0;
    double flo = c(lo);
    if (flo == 0.0) return 0.0;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double fm = c(mid);
        if ((fm < 0.0) == (flo < 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double sgn(double x) { return x > 0.0 ? 1.0 : (x < 0.0 ? -1.0 : 0.0); }

// Cells [j, j+1] holding a sign change of s, away from the line ends.
std::vector<std::size_t> crossing_cells(std::span<const double> s) {
    std::vector<std::size_t> out;
    for (std::size_t j = 2; j + 3 < s.size(); ++j) {
        if ((s[j] < 0.0 && s[j + 1] > 0.0) || (s[j] > 0.0 && s[j + 1] < 0.0) ||
            (s[j] == 0.0 && s[j - 1] * s[j + 1] < 0.0)) {
            out.push_back(j);
        }
    }
    return out;
}

// Cubic Lagrange weights and their first two derivatives on nodes -1, 0, 1, 2.
struct Lagrange4 {
    std::array<double, 4> w, d1, d2;

    explicit Lagrange4(double t) {
        const std::array<double, 4> x = {-1.0, 0.0, 1.0, 2.0};
        for (int a = 0; a < 4; ++a) {
            double den = 1.0;
            for (int b = 0; b < 4; ++b)
                if (b != a) den *= x[a] - x[b];
            // product of (t - x_b) over b != a, expanded through second derivatives
            double p = 1.0, p1 = 0.0, p2 = 0.0;
            for (int b = 0; b < 4; ++b) {
                if (b == a) continue;
                const double f = t - x[b];
                p2 = p2 * f + 2.0 * p1;
                p1 = p1 * f + p;
                p *= f;
            }
            w[a] = p / den;
            d1[a] = p1 / den;
            d2[a] = p2 / den;
        }
    }
};

// Bicubic interpolant of a grid field near (r, z) with the derivatives the
// turning-point model needs.
struct Local {
    double v = 0.0, vr = 0.0, vz = 0.0, vrz = 0.0, vzz = 0.0;
};

Local bicubic(const ScalarField2D& f, double r, double z) {
    const CylGrid& g = f.grid();
    const double h = g.dr(), k = g.dz();
    const double xr = r / h, xz = (z - g.z(0)) / k;
    const auto base = [](double x, std::size_t n) {
        const double b = std::floor(x) - 1.0;
        return static_cast<std::size_t>(std::clamp(b, 1.0, static_cast<double>(n) - 4.0));
    };
    const std::size_t i0 = base(xr, g.n_r()), j0 = base(xz, g.n_z());
    const Lagrange4 lr(xr - static_cast<double>(i0) - 1.0);
    const Lagrange4 lz(xz - static_cast<double>(j0) - 1.0);
    Local out;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            const double y = f(i0 + a, j0 + b);
            out.v += lr.w[a] * lz.w[b] * y;
            out.vr += lr.d1[a] * lz.w[b] * y / h;
            out.vz += lr.w[a] * lz.d1[b] * y / k;
            out.vrz += lr.d1[a] * lz.d1[b] * y / (h * k);
            out.vzz += lr.w[a] * lz.d2[b] * y / (k * k);
        }
    }
    return out;
}

// Finite part of int kind(sigma + beta u^2)^lambda du over the real line.
double turning_integral(CutKind kind, double lambda, double sigma, double beta) {
    const double g = std::tgamma(-lambda - 0.5);
    const double whole = std::abs(lambda - std::round(lambda)) < 1e-14 && lambda >= 0.0
                             ? 0.0
                             : std::sqrt(std::numbers::pi) * g / std::tgamma(-lambda);
    const double inner = std::sqrt(std::numbers::pi) * std::tgamma(lambda + 1.0) /
                         std::tgamma(lambda + 1.5);
    const double outer = g * std::tgamma(lambda + 1.0) / std::sqrt(std::numbers::pi);
    if (sigma == beta) {
        // sigma (1 + u^2)
        switch (kind) {
            case CutKind::Even: return whole;
            case CutKind::Odd: return sigma * whole;
            case CutKind::Positive: return sigma > 0.0 ? whole : 0.0;
            case CutKind::Negative: return sigma < 0.0 ? whole : 0.0;
        }
    }
    // sigma (1 - u^2): sign sigma inside |u| < 1, -sigma outside
    switch (kind) {
        case CutKind::Even: return inner + outer;
        case CutKind::Odd: return sigma * (inner - outer);
        case CutKind::Positive: return sigma > 0.0 ? inner : outer;
        case CutKind::Negative: return sigma < 0.0 ? inner : outer;
    }
    return 0.0;
}

}  // namespace

double hurwitz_zeta(double s, double a) {
    if (s == 1.0) throw Error("hurwitz_zeta: pole at s = 1");
    if (a < 0.0) throw Error("hurwitz_zeta: need a >= 0");
    if (a == 0.0 && s > 0.0) throw Error("hurwitz_zeta: pole at a = 0");
    // Euler-Maclaurin with N explicit terms; exact for non-positive integer s.
    constexpr int N = 12;
    constexpr std::array<double, 6> B2k = {1.0 / 6.0,  -1.0 / 30.0, 1.0 / 42.0,
                                           -1.0 / 30.0, 5.0 / 66.0,  -691.0 / 2730.0};
    double sum = 0.0;
    for (int n = 0; n < N; ++n) sum += std::pow(n + a, -s);
    const double x = N + a;
    sum += std::pow(x, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(x, -s);
    double poch = s;  // s (s+1) ... (s+2k-2)
    double fact = 2.0;  // (2k)!
    for (int k = 1; k <= static_cast<int>(B2k.size()); ++k) {
        sum += B2k[k - 1] / fact * poch * std::pow(x, -s - 2.0 * k + 1.0);
        poch *= (s + 2.0 * k - 1.0) * (s + 2.0 * k);
        fact *= (2.0 * k + 1.0) * (2.0 * k + 2.0);
    }
    return sum;
}

double left_cut_error(double S0, double S1, double S2, double S3, double h, double theta) {
    // sum_m (-1)^m S^(m)(x0)/m! h^{m+1} zeta(-m, theta)
    const std::array<double, 4> d = {S0, -S1, 0.5 * S2, -S3 / 6.0};
    double e = 0.0, hp = h;
    for (int m = 0; m < 4; ++m) {
        e += d[m] * hp * hurwitz_zeta(-m, theta);
        hp *= h;
    }
    return e;
}

double cut_correction_1d(std::span<const double> s, std::span<const double> H, double h,
                         CutKind kind, double lambda) {
    if (s.size() != H.size()) throw Error("cut_correction_1d: size mismatch");
    if (!(lambda > -1.0)) throw Error("cut_correction_1d: need lambda > -1");
    const std::size_t n = s.size();
    if (n < 6) return 0.0;
    const bool one_sided = kind == CutKind::Positive || kind == CutKind::Negative;
    const double side = kind == CutKind::Negative ? -1.0 : 1.0;
    double total = 0.0;
    for (const std::size_t j : crossing_cells(s)) {
        const Cubic cs(s[j - 1], s[j], s[j + 1], s[j + 2]);
        const double theta = root_in_cell(cs);
        const double ds = cs.d1(theta) / h;
        if (ds == 0.0) continue;

        if (one_sided && lambda == 1.0) {
            // f = S 1_{side}, S = side * s * H smooth through the root.
            const Cubic cS(side * s[j - 1] * H[j - 1], side * s[j] * H[j],
                           side * s[j + 1] * H[j + 1], side * s[j + 2] * H[j + 2]);
            const double S0 = cS(theta), S1 = cS.d1(theta) / h, S2 = cS.d2(theta) / (h * h),
                         S3 = cS.d3() / (h * h * h);
            if (side * ds > 0.0) {
                // Support to the right: mirror of the left formula with theta -> 1 - theta.
                total += left_cut_error(S0, -S1, S2, -S3, h, 1.0 - theta);
            } else {
                total += left_cut_error(S0, S1, S2, S3, h, theta);
            }
            continue;
        }

        // f(x0 + y) = a(y) |y|^lambda (c + e y) + O(|y|^{lambda + 2}), a = aR or aL by side.
        const Cubic cH(H[j - 1], H[j], H[j + 1], H[j + 2]);
        const double s1 = ds, s2 = cs.d2(theta) / (h * h);
        const double H0 = cH(theta), H1 = cH.d1(theta) / h;
        const double scale = std::pow(std::abs(s1), lambda);
        const double c = H0 * scale;
        const double e = (H1 + H0 * lambda * s2 / (2.0 * s1)) * scale;
        double aR = 0.0, aL = 0.0;
        switch (kind) {
            case CutKind::Even: aR = aL = 1.0; break;
            case CutKind::Odd:
                aR = sgn(s1);
                aL = -aR;
                break;
            case CutKind::Positive: (s1 > 0.0 ? aR : aL) = 1.0; break;
            case CutKind::Negative: (s1 < 0.0 ? aR : aL) = 1.0; break;
        }
        const double hp = std::pow(h, 1.0 + lambda);
        // A root exactly on a node with lambda < 0: that node holds zero, so
        // the sum on that side starts one node out.
        const double left = (theta == 0.0 && lambda < 0.0) ? 1.0 : theta;
        const double right = (theta == 1.0 && lambda < 0.0) ? 1.0 : 1.0 - theta;
        total += hp * c * (aR * hurwitz_zeta(-lambda, right) + aL * hurwitz_zeta(-lambda, left));
        total += hp * h * e *
                 (aR * hurwitz_zeta(-lambda - 1.0, 1.0 - theta) - aL * hurwitz_zeta(-lambda - 1.0, theta));
    }
    return total;
}

std::vector<double> column_cut_corrections(const ScalarField2D& s, const ScalarField2D& H,
                                           CutKind kind, double lambda) {
    s.require_same_grid(H);
    const CylGrid& g = s.grid();
    std::vector<double> corr(g.n_r(), 0.0);
    const auto sv = s.values();
    const auto hv = H.values();
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const std::size_t off = g.index(i, 0);
        corr[i] = cut_correction_1d(sv.subspan(off, g.n_z()), hv.subspan(off, g.n_z()), g.dz(),
                                    kind, lambda);
    }
    return corr;
}

double integrate_cyl_corrected(const ScalarField2D& f, Quadrature rule, double axis_power,
                               const std::vector<double>& corr) {
    const CylGrid& g = f.grid();
    if (corr.size() != g.n_r()) throw Error("integrate_cyl_corrected: one entry per column needed");
    const double two_pi = 2.0 * std::numbers::pi;
    double total = integrate_cyl(f, rule, axis_power);
    for (std::size_t i = 1; i < g.n_r(); ++i) {
        const double wr = (i + 1 == g.n_r()) ? 0.5 * g.dr() : g.dr();
        total -= two_pi * g.r(i) * wr * corr[i];
    }
    if (rule == Quadrature::AxisCorrected) {
        // The axis term of integrate_cyl used the uncorrected first column.
        const double s = axis_power + 1.0;
        const double zeta = std::riemann_zeta(-s);
        total += two_pi * zeta * g.dr() * g.r(1) * corr[1];
    }
    return total;
}

std::vector<TurningPoint> turning_points(const ScalarField2D& s) {
    const CylGrid& g = s.grid();
    const auto sv = s.values();
    const auto column = [&](std::size_t i) { return sv.subspan(g.index(i, 0), g.n_z()); };
    std::vector<TurningPoint> out;
    if (g.n_r() < 6 || g.n_z() < 6) return out;
    for (std::size_t i = 1; i + 3 < g.n_r(); ++i) {
        const auto a = crossing_cells(column(i));
        const auto b = crossing_cells(column(i + 1));
        if (a.size() == b.size()) continue;
        const auto& more = a.size() > b.size() ? a : b;
        const std::size_t im = a.size() > b.size() ? i : i + 1;
        // Roots that vanish pair up; try the closest neighbouring pairs first.
        std::vector<std::pair<std::size_t, std::size_t>> pairs;
        for (std::size_t m = 0; m + 1 < more.size(); ++m) pairs.emplace_back(more[m], more[m + 1]);
        std::sort(pairs.begin(), pairs.end(),
                  [](auto x, auto y) { return x.second - x.first < y.second - y.first; });
        std::size_t wanted = (more.size() - std::min(a.size(), b.size())) / 2;
        for (const auto& [j1, j2] : pairs) {
            if (wanted == 0) break;
            double r = g.r(im), z = 0.5 * (g.z(j1) + g.z(j2 + 1));
            bool ok = false;
            for (int it = 0; it < 40; ++it) {
                const Local l = bicubic(s, r, z);
                // Newton on (s, s_z) = 0 with the z-curvature from the interpolant.
                const double det = l.vr * l.vzz - l.vz * l.vrz;
                if (det == 0.0) break;
                const double dr = (l.v * l.vzz - l.vz * l.vz) / det;
                const double dz = (l.vr * l.vz - l.vrz * l.v) / det;
                r -= dr;
                z -= dz;
                if (std::abs(dr) < 1e-10 * g.dr() && std::abs(dz) < 1e-10 * g.dz()) {
                    ok = true;
                    break;
                }
            }
            if (!ok || r < g.r(i) - g.dr() || r > g.r(i + 1) + g.dr()) continue;
            const Local l = bicubic(s, r, z);
            if (l.vr == 0.0 || l.vzz == 0.0) continue;
            const bool dup = std::any_of(out.begin(), out.end(), [&](const TurningPoint& p) {
                return std::abs(p.r - r) < 1e-6 * g.dr() && std::abs(p.z - z) < 1e-6 * g.dz();
            });
            if (dup) continue;
            out.push_back({r, z, l.vr, l.vzz});
            --wanted;
        }
    }
    return out;
}

double turning_point_correction(const ScalarField2D& s, const ScalarField2D& H, CutKind kind,
                                double lambda) {
    s.require_same_grid(H);
    const CylGrid& g = s.grid();
    const double h = g.dr();
    const double nu = lambda + 0.5;
    double total = 0.0;
    for (const TurningPoint& p : turning_points(s)) {
        // Column integral near r*: c_sign |r - r*|^nu, c from the local model
        // s = A (r - r*) + B (z - z*)^2 / 2.
        const double H0 = bicubic(H, p.r, p.z).v;
        const double scale = 2.0 * std::numbers::pi * p.r * H0 * std::pow(std::abs(p.s_r), lambda) *
                             std::sqrt(2.0 * std::abs(p.s_r) / std::abs(p.s_zz));
        const double beta = sgn(p.s_zz);
        const double cR = scale * turning_integral(kind, lambda, sgn(p.s_r), beta);
        const double cL = scale * turning_integral(kind, lambda, -sgn(p.s_r), beta);
        const double x = p.r / h;
        const double theta = x - std::floor(x);
        total += std::pow(h, 1.0 + nu) *
                 (cR * hurwitz_zeta(-nu, 1.0 - theta) + cL * hurwitz_zeta(-nu, theta));
    }
    return total;
}

}  // namespace axireg
