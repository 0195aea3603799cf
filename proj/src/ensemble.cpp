#include "axireg/ensemble.hpp"

#include <cmath>

namespace axireg {

PointFields evaluate_member(const EnsembleMember& m, double r, double z) {
    PointFields out;
    for (const auto& s : m.stream) {
        const double w2 = s.width * s.width;
        const double zc = z - s.center;
        const double e = s.amp * std::exp(-(r * r + zc * zc) / w2);
        out.u_r += 2.0 * r * zc / w2 * e;
        out.u_z += (2.0 - 2.0 * r * r / w2) * e;
        out.omega_theta += r * (10.0 / w2 - 4.0 * (r * r + zc * zc) / (w2 * w2)) * e;
    }
    for (const auto& s : m.swirl) {
        const double w2 = s.width * s.width;
        const double zc = z - s.center;
        const double e = s.amp * std::exp(-(r * r + zc * zc) / w2);
        const double lin = 1.0 + s.tilt * z;
        out.u_theta += r * lin * e;
        // omega_r = -d(u_theta)/dz
        out.omega_r -= r * (s.tilt - 2.0 * zc / w2 * lin) * e;
        // omega_z = (1/r) d(r u_theta)/dr = (2 - 2 r^2 / w^2) lin e
        out.omega_z += (2.0 - 2.0 * r * r / w2) * lin * e;
    }
    return out;
}

EnsembleMember random_member(std::mt19937_64& rng, const EnsembleRanges& ranges) {
    if (ranges.width_min <= 0.0 || ranges.width_max < ranges.width_min) {
        throw Error("random_member: invalid width range");
    }
    std::uniform_real_distribution<double> amp(-ranges.amp_max, ranges.amp_max);
    std::uniform_real_distribution<double> center(-ranges.center_max, ranges.center_max);
    std::uniform_real_distribution<double> width(ranges.width_min, ranges.width_max);
    std::uniform_real_distribution<double> tilt(-ranges.tilt_max, ranges.tilt_max);
    EnsembleMember m;
    for (int k = 0; k < ranges.stream_modes; ++k) {
        GaussianMode g;
        g.amp = amp(rng);
        g.center = center(rng);
        g.width = width(rng);
        m.stream.push_back(g);
    }
    for (int k = 0; k < ranges.swirl_modes; ++k) {
        GaussianMode g;
        g.amp = amp(rng);
        g.center = center(rng);
        g.width = width(rng);
        g.tilt = tilt(rng);
        m.swirl.push_back(g);
    }
    return m;
}

std::vector<EnsembleMember> make_ensemble(std::uint64_t seed, std::size_t count,
                                          const EnsembleRanges& ranges) {
    std::mt19937_64 rng(seed);
    std::vector<EnsembleMember> out;
    out.reserve(count);
    for (std::size_t k = 0; k < count; ++k) out.push_back(random_member(rng, ranges));
    return out;
}

AxisymState sample_member(const EnsembleMember& m, const GridPtr& grid, double t) {
    AxisymState s = AxisymState::zeros(grid, t);
    const CylGrid& g = *grid;
    for (std::size_t i = 0; i < g.n_r(); ++i) {
        for (std::size_t j = 0; j < g.n_z(); ++j) {
            const PointFields p = evaluate_member(m, g.r(i), g.z(j));
            s.u_r(i, j) = p.u_r;
            s.u_theta(i, j) = p.u_theta;
            s.u_z(i, j) = p.u_z;
            s.omega_r(i, j) = p.omega_r;
            s.omega_theta(i, j) = p.omega_theta;
            s.omega_z(i, j) = p.omega_z;
        }
    }
    return s;
}

}  // namespace axireg
