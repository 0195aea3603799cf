#include "axireg/initial_data.hpp"

#include <cmath>

#include "axireg/checkpoint.hpp"

namespace axireg {

double InitialData::param(const std::string& key, double fallback) const {
    auto it = params.find(key);
    return it == params.end() ? fallback : it->second;
}

AxisymState make_initial_state(const InitialData& data, const GridPtr& grid) {
    if (data.recipe == "checkpoint") {
        AxisymState s = read_checkpoint(data.checkpoint_path);
        if (!(s.grid() == *grid)) throw Error("initial data: checkpoint grid does not match");
        return s;
    }

    AxisymState s = AxisymState::zeros(grid);
    if (data.recipe == "rest") return s;

    const double swirl = data.param("swirl", 1.0);
    const double width = data.param("width", 1.0);
    const double w2 = width * width;
    s.u_theta = ScalarField2D::sample(grid, Parity::Odd, [&](double r, double z) {
        return swirl * r * std::exp(-(r * r + z * z) / w2);
    });
    if (data.recipe == "pure_swirl") return s;

    if (data.recipe == "swirl_ring") {
        const double a = data.param("meridional", 0.5);
        const double z0 = data.param("z0", 0.0);
        s.u_r = ScalarField2D::sample(grid, Parity::Odd, [&](double r, double z) {
            const double e = std::exp(-(r * r + (z - z0) * (z - z0)) / w2);
            return a * r * 2.0 * (z - z0) / w2 * e;
        });
        s.u_z = ScalarField2D::sample(grid, Parity::Even, [&](double r, double z) {
            const double e = std::exp(-(r * r + (z - z0) * (z - z0)) / w2);
            return a * (2.0 - 2.0 * r * r / w2) * e;
        });
        return s;
    }
    throw Error("initial data: unknown recipe '" + data.recipe + "'");
}

}  // namespace axireg
