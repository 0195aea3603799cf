#include <gtest/gtest.h>

#include <sstream>

#include "axireg/config.hpp"

using namespace axireg;

namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_run_config(in);
}

}  // namespace

TEST(Config, EmptyInputGivesDefaults) {
    const RunConfig cfg = parse("");
    const RunConfig def;
    EXPECT_EQ(cfg.solver.nu, def.solver.nu);
    EXPECT_EQ(cfg.grid.n_r, def.grid.n_r);
    EXPECT_EQ(cfg.initial.recipe, def.initial.recipe);
}

TEST(Config, ParsesEverySection) {
    const RunConfig cfg = parse(
        "[solver]\nnu = 0.2\ndt = 1e-4\nt_end = 0.5\nn_r = 40\nn_z = 80\nstencil_order = 4\n"
        "r_max = 3\nz_half = 6\n"
        "[criterion]\neps = 0.03\ndelta0 = 0.25\n"
        "[serrin]\ns = 8\nw = 3\nd = 0\ndelta1 = 0.4\n"
        "[monitor]\nname = abc\nout_dir = /tmp/x\ncadence = 5\nseed = 9\naq_ensemble = 7\n"
        "[initial]\nrecipe = swirl_ring\nwidth = 0.7\n");
    EXPECT_EQ(cfg.solver.nu, 0.2);
    EXPECT_EQ(cfg.solver.dt, 1e-4);
    EXPECT_EQ(cfg.grid.n_r, 40u);
    EXPECT_EQ(cfg.grid.stencil_order, 4);
    EXPECT_EQ(cfg.grid.z_half, 6.0);
    EXPECT_EQ(cfg.eps, 0.03);
    EXPECT_EQ(cfg.delta0, 0.25);
    EXPECT_EQ(cfg.serrin.s, 8.0);
    EXPECT_EQ(cfg.monitor.name, "abc");
    EXPECT_EQ(cfg.monitor.out_dir, "/tmp/x");
    EXPECT_EQ(cfg.monitor.seed, 9u);
    EXPECT_EQ(cfg.initial.recipe, "swirl_ring");
    EXPECT_EQ(cfg.initial.param("width", 1.0), 0.7);
    EXPECT_EQ(cfg.initial.param("swirl", 1.0), 1.0);
}

TEST(Config, RejectsUnknownAndMalformed) {
    EXPECT_THROW(parse("[solver]\nviscosity = 1\n"), Error);
    EXPECT_THROW(parse("[extra]\nx = 1\n"), Error);
    EXPECT_THROW(parse("[solver]\nnu = fast\n"), Error);
    EXPECT_THROW(parse("[solver]\nn_r = 3.5\n"), Error);
    EXPECT_THROW(parse("[monitor]\naq_ensemble = -2\n"), Error);
    EXPECT_THROW(parse("[initial]\nwidth = wide\n"), Error);
    EXPECT_THROW(parse("nu = 1\n"), Error);
}

TEST(Config, OverridesApplyAfterFile) {
    RunConfig cfg = parse("[solver]\ndt = 1e-3\n");
    apply_override(cfg, "solver.dt=5e-4");
    apply_override(cfg, "monitor.name=other");
    apply_override(cfg, "initial.swirl=2.5");
    EXPECT_EQ(cfg.solver.dt, 5e-4);
    EXPECT_EQ(cfg.monitor.name, "other");
    EXPECT_EQ(cfg.initial.param("swirl", 0.0), 2.5);
    EXPECT_THROW(apply_override(cfg, "solver.dt"), Error);
    EXPECT_THROW(apply_override(cfg, "solver.bogus=1"), Error);
}

TEST(Config, JsonEchoRoundTripsThroughOverrides) {
    RunConfig cfg = parse("[criterion]\neps = 0.04\n[initial]\nrecipe = pure_swirl\nswirl = 3\n");
    const nlohmann::json j = to_json(cfg);
    EXPECT_EQ(j["criterion"]["eps"], 0.04);
    EXPECT_EQ(j["initial"]["recipe"], "pure_swirl");
    EXPECT_EQ(j["initial"]["swirl"], 3.0);
    RunConfig back;
    for (const auto& [section, body] : j.items()) {
        for (const auto& [key, value] : body.items()) {
            if (section == "initial" && key == "checkpoint") continue;
            const std::string text = value.is_string() ? value.get<std::string>() : value.dump();
            apply_override(back, section + "." + key + "=" + text);
        }
    }
    EXPECT_EQ(to_json(back), j);
}

TEST(Config, ShippedExampleIsValid) {
    const RunConfig cfg = load_run_config(AXIREG_SOURCE_DIR "/configs/decaying_swirl.ini");
    EXPECT_NO_THROW(cfg.validate());
    EXPECT_EQ(cfg.initial.recipe, "swirl_ring");
    EXPECT_THROW(load_run_config("/nonexistent/run.ini"), Error);
}

TEST(Config, ValidationNamesTheBadSetting) {
    RunConfig cfg;
    cfg.grid.n_r = 4;
    try {
        cfg.validate();
        FAIL();
    } catch (const Error& e) {
        EXPECT_NE(std::string(e.what()).find("n_r"), std::string::npos);
    }
    cfg = RunConfig{};
    cfg.monitor.safety = 0.5;
    EXPECT_THROW(cfg.validate(), Error);
}
