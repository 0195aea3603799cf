#include <gtest/gtest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "axireg/checkpoint.hpp"
#include "axireg/grid.hpp"

using namespace axireg;

namespace {

constexpr double kPi = std::numbers::pi;

ScalarField2D random_field(const GridPtr& g, std::mt19937_64& rng, Parity parity = Parity::Even) {
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    ScalarField2D f(g, parity);
    for (double& v : f.values()) v = u(rng);
    return f;
}

// 2 pi int_0^R int_{-Z}^{Z} r F(r, z) dz dr by nested adaptive Gauss-Kronrod.
template <class F>
double dense_cyl(F fn, double R, double Z) {
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const auto inner = [&](double r) {
        return GK::integrate([&](double z) { return fn(r, z); }, -Z, Z, 10, 1e-13);
    };
    return 2.0 * kPi * GK::integrate([&](double r) { return r * inner(r); }, 0.0, R, 10, 1e-13);
}

}  // namespace

TEST(IntegrateCyl, ZeroFieldGivesZero) {
    const GridPtr g = make_grid(2.0, 2.0, 17, 17);
    EXPECT_EQ(integrate_cyl(ScalarField2D(g)), 0.0);
}

TEST(IntegrateCyl, UnitFieldGivesCylinderVolume) {
    const GridPtr g = make_grid(1.0, 1.0, 21, 21);
    const ScalarField2D one = ScalarField2D::sample(g, Parity::Even, [](double, double) { return 1.0; });
    EXPECT_NEAR(integrate_cyl(one), 2.0 * kPi, 1e-12);
}

TEST(IntegrateCyl, GaussianMatchesClosedFormAndDenseOracle) {
    const double exact = 2.0 * kPi * 0.25 * std::sqrt(kPi / 2.0);
    const auto fn = [](double r, double z) { return std::exp(-2.0 * r * r - 2.0 * z * z); };
    EXPECT_NEAR(dense_cyl(fn, 4.0, 4.0), exact, 1e-12);
    EXPECT_NEAR(exact, 1.9687, 1e-4);
    const GridPtr g = make_grid(4.0, 4.0, 129, 129);
    const ScalarField2D f = ScalarField2D::sample(g, Parity::Even, fn);
    EXPECT_NEAR(integrate_cyl(f), exact, 1e-3 * exact);
    EXPECT_NEAR(integrate_cyl(f, Quadrature::AxisCorrected, 0.0), exact, 2e-6 * exact);
}

TEST(IntegrateCyl, ConvergesAtNominalOrder) {
    const double exact = 2.0 * kPi * 0.25 * std::sqrt(kPi / 2.0);
    const auto fn = [](double r, double z) { return std::exp(-2.0 * r * r - 2.0 * z * z); };
    std::vector<double> trap, corr, h;
    for (std::size_t n : {33, 65, 129}) {
        const GridPtr g = make_grid(4.0, 4.0, n, n);
        const ScalarField2D f = ScalarField2D::sample(g, Parity::Even, fn);
        trap.push_back(std::abs(integrate_cyl(f) - exact));
        corr.push_back(std::abs(integrate_cyl(f, Quadrature::AxisCorrected, 0.0) - exact));
        h.push_back(g->dr());
    }
    for (std::size_t k = 0; k + 1 < h.size(); ++k) {
        const double order = std::log(trap[k] / trap[k + 1]) / std::log(h[k] / h[k + 1]);
        EXPECT_NEAR(order, 2.0, 0.4);
        const double order_c = std::log(corr[k] / corr[k + 1]) / std::log(h[k] / h[k + 1]);
        EXPECT_GT(order_c, 3.2);
    }
}

TEST(IntegrateCyl, AxisCorrectionHandlesFractionalPowers) {
    // int 2 pi r * r^lambda exp(-r^2 - z^2) = pi^{3/2} Gamma(1 + lambda/2)
    for (double lambda : {-0.5, 0.19, 1.9}) {
        const double exact = std::pow(kPi, 1.5) * std::tgamma(1.0 + lambda / 2.0);
        const GridPtr g = make_grid(6.0, 6.0, 193, 193);
        const ScalarField2D f = ScalarField2D::sample(g, Parity::Even, [&](double r, double z) {
            return r == 0.0 ? 0.0 : std::pow(r, lambda) * std::exp(-r * r - z * z);
        });
        EXPECT_NEAR(integrate_cyl(f, Quadrature::AxisCorrected, lambda), exact, 1e-5 * exact)
            << "lambda=" << lambda;
    }
}

TEST(IntegrateCyl, IsLinear) {
    std::mt19937_64 rng(11);
    const GridPtr g = make_grid(3.0, 2.0, 31, 41);
    for (int k = 0; k < 20; ++k) {
        const ScalarField2D f = random_field(g, rng), h = random_field(g, rng);
        const double a = 1.7, b = -0.3;
        const double lhs = integrate_cyl(a * f + b * h);
        const double rhs = a * integrate_cyl(f) + b * integrate_cyl(h);
        const double scale = std::abs(a) * integrate_cyl(ScalarField2D::sample(
                                 g, Parity::Even, [](double, double) { return 1.0; }));
        EXPECT_LE(std::abs(lhs - rhs), 1e-12 * scale);
    }
}

TEST(IntegrateCyl, RejectsNonFiniteAndNamesNode) {
    const GridPtr g = make_grid(1.0, 1.0, 9, 9);
    ScalarField2D f(g);
    f(4, 3) = std::nan("");
    try {
        integrate_cyl(f);
        FAIL() << "expected rejection";
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("r=0.5"), std::string::npos) << e.what();
    }
}

TEST(WeightedLp, ZeroFieldGivesZero) {
    const GridPtr g = make_grid(2.0, 2.0, 17, 17);
    EXPECT_EQ(weighted_lp(ScalarField2D(g, Parity::Odd), 0.7, 1.9), 0.0);
}

TEST(WeightedLp, WeightCancelsMatchingRadialFactor) {
    const GridPtr g = make_grid(4.0, 3.0, 65, 49);
    const auto gauss = [](double r, double z) { return std::exp(-r * r - z * z); };
    const ScalarField2D f =
        ScalarField2D::sample(g, Parity::Odd, [&](double r, double z) { return r * gauss(r, z); });
    const ScalarField2D sq =
        ScalarField2D::sample(g, Parity::Even, [&](double r, double z) { return gauss(r, z) * gauss(r, z); });
    for (Quadrature rule : {Quadrature::Trapezoid, Quadrature::AxisCorrected}) {
        const double direct = integrate_cyl(sq, rule, 0.0);
        EXPECT_NEAR(weighted_lp(f, 1.0, 2.0, rule), direct, 1e-12 * direct);
    }
}

TEST(WeightedLp, GaussianSwirlProfile) {
    const double exact = 2.0 * kPi * 0.125 * std::sqrt(kPi / 2.0);
    EXPECT_NEAR(exact, 0.9844, 1e-4);
    const auto fn = [](double r, double z) { return r * std::exp(-r * r - z * z); };
    EXPECT_NEAR(dense_cyl([&](double r, double z) { return fn(r, z) * fn(r, z); }, 5.0, 5.0), exact,
                1e-12);
    const GridPtr g = make_grid(5.0, 5.0, 161, 161);
    const ScalarField2D f = ScalarField2D::sample(g, Parity::Odd, fn);
    EXPECT_NEAR(weighted_lp(f, 0.0, 2.0, Quadrature::AxisCorrected), exact, 1e-6 * exact);
}

TEST(WeightedLp, MinkowskiOnRandomPairs) {
    std::mt19937_64 rng(5);
    const GridPtr g = make_grid(2.0, 2.0, 25, 25);
    for (double p : {1.0, 1.5, 2.0, 3.7}) {
        for (int k = 0; k < 10; ++k) {
            const ScalarField2D f = random_field(g, rng, Parity::Odd);
            const ScalarField2D h = random_field(g, rng, Parity::Odd);
            const double lhs = std::pow(weighted_lp(f + h, 0.4, p), 1.0 / p);
            const double rhs =
                std::pow(weighted_lp(f, 0.4, p), 1.0 / p) + std::pow(weighted_lp(h, 0.4, p), 1.0 / p);
            EXPECT_LE(lhs, rhs * (1.0 + 1e-10));
        }
    }
}

TEST(WeightedLp, MonotoneInModulus) {
    std::mt19937_64 rng(9);
    const GridPtr g = make_grid(2.0, 2.0, 25, 25);
    ScalarField2D f = random_field(g, rng, Parity::Odd);
    const double before = weighted_lp(f, -0.2, 1.9);
    f *= 1.01;
    EXPECT_GT(weighted_lp(f, -0.2, 1.9), before);
}

TEST(WeightedLp, RejectsExponentBelowOne) {
    const GridPtr g = make_grid(1.0, 1.0, 9, 9);
    EXPECT_THROW(weighted_lp(ScalarField2D(g), 0.0, 0.5), Error);
}

TEST(PositiveNegativeParts, ConstantNegative) {
    const GridPtr g = make_grid(1.0, 1.0, 9, 9);
    const ScalarField2D f = ScalarField2D::sample(g, Parity::Even, [](double, double) { return -3.0; });
    const ScalarField2D fp = positive_part(f), fm = negative_part(f);
    for (double v : fp.values()) EXPECT_EQ(v, 0.0);
    for (double v : fm.values()) EXPECT_EQ(v, 3.0);
}

TEST(PositiveNegativeParts, ZeroField) {
    const GridPtr g = make_grid(1.0, 1.0, 9, 9);
    const ScalarField2D f(g);
    EXPECT_EQ(positive_part(f).max_abs(), 0.0);
    EXPECT_EQ(negative_part(f).max_abs(), 0.0);
}

TEST(PositiveNegativeParts, DecompositionHoldsPointwise) {
    std::mt19937_64 rng(3);
    const GridPtr g = make_grid(1.0, 1.0, 17, 17);
    const ScalarField2D lin = ScalarField2D::sample(g, Parity::Even, [](double, double z) { return z; });
    for (const ScalarField2D& f : {lin, random_field(g, rng)}) {
        const ScalarField2D fp = positive_part(f), fm = negative_part(f);
        for (std::size_t k = 0; k < g->size(); ++k) {
            EXPECT_GE(fp.values()[k], 0.0);
            EXPECT_GE(fm.values()[k], 0.0);
            EXPECT_EQ(fp.values()[k] - fm.values()[k], f.values()[k]);
            EXPECT_EQ(fp.values()[k] * fm.values()[k], 0.0);
        }
    }
    for (std::size_t j = 0; j < g->n_z(); ++j) {
        EXPECT_EQ(positive_part(lin)(3, j), g->z(j) > 0.0 ? g->z(j) : 0.0);
    }
}

TEST(SignedPow, ContinuousThroughZero) {
    EXPECT_EQ(signed_pow(0.0, 0.9), 0.0);
    EXPECT_DOUBLE_EQ(signed_pow(-8.0, 1.0 / 3.0), -2.0);
    EXPECT_DOUBLE_EQ(signed_pow(4.0, 0.5), 2.0);
}

TEST(Fields, MismatchedGridsRejected) {
    const ScalarField2D a(make_grid(1.0, 1.0, 9, 9)), b(make_grid(1.0, 1.0, 11, 9));
    EXPECT_THROW(a + b, Error);
}

TEST(Fields, ZeroStateIsAxisRegular) {
    const AxisymState s = AxisymState::zeros(make_grid(1.0, 1.0, 9, 9), 0.25);
    EXPECT_EQ(s.t, 0.25);
    EXPECT_EQ(s.u_r.parity(), Parity::Odd);
    EXPECT_EQ(s.u_z.parity(), Parity::Even);
    for (std::size_t j = 0; j < 9; ++j) {
        EXPECT_EQ(s.u_r(0, j), 0.0);
        EXPECT_EQ(s.u_theta(0, j), 0.0);
    }
}

TEST(Checkpoint, RoundTripIsBitExact) {
    std::mt19937_64 rng(21);
    const GridPtr g = make_grid(2.5, 1.5, 13, 17);
    AxisymState s = AxisymState::zeros(g, 0.375);
    s.u_r = random_field(g, rng, Parity::Odd);
    s.u_theta = random_field(g, rng, Parity::Odd);
    s.u_z = random_field(g, rng);
    s.pressure = random_field(g, rng);
    std::stringstream buf;
    write_checkpoint(buf, s);
    const std::string bytes = buf.str();
    EXPECT_EQ(bytes.substr(0, 4), "AXRG");
    EXPECT_EQ(bytes.size(), 4u + 4u + 8u + 24u + 4u * 8u * g->size());
    const AxisymState back = read_checkpoint(buf);
    EXPECT_EQ(back.t, s.t);
    EXPECT_TRUE(back.grid() == s.grid());
    for (std::size_t k = 0; k < g->size(); ++k) {
        EXPECT_EQ(back.u_r.values()[k], s.u_r.values()[k]);
        EXPECT_EQ(back.u_theta.values()[k], s.u_theta.values()[k]);
        EXPECT_EQ(back.u_z.values()[k], s.u_z.values()[k]);
        EXPECT_EQ(back.pressure.values()[k], s.pressure.values()[k]);
    }
}

TEST(Checkpoint, RejectsBadMagicAndTruncation) {
    std::stringstream bad("XXXX0000");
    EXPECT_THROW(read_checkpoint(bad), Error);
    const AxisymState s = AxisymState::zeros(make_grid(1.0, 1.0, 9, 9));
    std::stringstream buf;
    write_checkpoint(buf, s);
    std::stringstream cut(buf.str().substr(0, buf.str().size() - 8));
    EXPECT_THROW(read_checkpoint(cut), Error);
}
