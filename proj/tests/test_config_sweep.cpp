#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "d2dcell/config_io.hpp"
#include "d2dcell/sweep.hpp"

using namespace d2dcell;

TEST(Config, TableDefaults) {
    RunConfig rc;
    rc.materialize_xi();
    EXPECT_DOUBLE_EQ(rc.net.geom.cell_radius, 500.0);
    EXPECT_DOUBLE_EQ(rc.net.geom.d2d_range, 35.0);
    EXPECT_DOUBLE_EQ(rc.net.density, 5e-5);
    EXPECT_NEAR(rc.net.rho_bs, 1e-11, 1e-26);  // -80 dBm
    EXPECT_NEAR(rc.net.rho_d, 1e-10, 1e-25);   // -70 dBm
    EXPECT_DOUBLE_EQ(rc.net.gamma, 1.0);       // 0 dB
    EXPECT_DOUBLE_EQ(rc.net.alpha_c, 4.0);
    EXPECT_DOUBLE_EQ(rc.net.alpha_d, 4.0);
    EXPECT_NEAR(rc.net.xi, rc.net.rho_d, 1e-25);
    EXPECT_EQ(rc.net.gamma_approx_n, 6);
    EXPECT_EQ(rc.net.fading.m_cellular, 1);
    EXPECT_EQ(rc.net.fading.m_d2d, 1);
    rc.net.validate();
}

TEST(Config, ParseOverrideAndUnknownKey) {
    std::istringstream in(
        "# scenario\n"
        "radio.rho_d_dbm = -90\n"
        "mode.xi_rel_db = 3\n"
        "sweep.parameter = lambda\n"
        "sweep.grid = logspace(-5, -4, 3)\n"
        "sweep.quantities = m_bar, tau\n"
        "mc.runs = 1000\n"
        "mc.seed = 99\n");
    RunConfig rc = parse_config_text(in);
    EXPECT_NEAR(rc.net.rho_d, 1e-12, 1e-27);
    EXPECT_NEAR(rc.net.xi, 1e-12 * std::pow(10.0, 0.3), 1e-24);
    ASSERT_EQ(rc.sweep.grid.size(), 3u);
    EXPECT_NEAR(rc.sweep.grid[1], std::pow(10.0, -4.5), 1e-18);
    ASSERT_EQ(rc.sweep.quantities.size(), 2u);
    EXPECT_EQ(rc.sweep.quantities[1], Quantity::tau);
    EXPECT_EQ(rc.mc.runs, 1000u);

    // xi stays relative: overriding rho_d re-materializes it
    apply_override(rc, "radio.rho_d_dbm=-70");
    EXPECT_NEAR(rc.net.xi, 1e-10 * std::pow(10.0, 0.3), 1e-22);

    std::istringstream bad("radio.rho_dd_dbm = -70\n");
    EXPECT_THROW(parse_config_text(bad), config_error);
    std::istringstream bad2("net.density = fast\n");
    EXPECT_THROW(parse_config_text(bad2), config_error);
}

TEST(Config, EffectiveLinkDistanceCap) {
    NetworkConfig cfg;
    cfg.xi = 0.3 * cfg.rho_d;
    cfg.alpha_c = 3.5;
    cfg.alpha_d = 4.0;
    const double expect = std::min(
        cfg.geom.d2d_range, std::pow(cfg.geom.cell_radius, cfg.alpha_c / cfg.alpha_d) *
                                std::pow(cfg.xi / cfg.rho_d, 1.0 / cfg.alpha_d));
    EXPECT_DOUBLE_EQ(cfg.tilde_r_d(), expect);
    cfg.xi = 1e-6 * cfg.rho_d;  // tight threshold caps the admissible link length
    EXPECT_LT(cfg.tilde_r_d(), cfg.geom.d2d_range);
}

TEST(Config, XiLinearDisablesRelative) {
    std::istringstream in("mode.xi_linear = 2.5e-10\nradio.rho_d_dbm = -60\n");
    RunConfig rc = parse_config_text(in);
    EXPECT_DOUBLE_EQ(rc.net.xi, 2.5e-10);
}

TEST(Sweep, RowCountAndMonotoneGrid) {
    RunConfig rc;
    rc.materialize_xi();
    rc.sweep.parameter = SweepParameter::xi_db;
    rc.sweep.grid = {-10.0, 0.0, 10.0};
    rc.sweep.quantities = {Quantity::outage_bs, Quantity::m_bar_d2d};
    auto records = run_sweep(rc);
    ASSERT_EQ(records.size(), 6u);
    // outage_bs rows must be non-decreasing in xi
    double prev = -1;
    for (const auto& r : records)
        if (r.quantity == "outage_bs") {
            EXPECT_GE(r.analytic, prev);
            prev = r.analytic;
        }

    rc.sweep.grid = {1.0, 1.0};
    EXPECT_THROW(run_sweep(rc), config_error);
    rc.sweep.grid = {};
    EXPECT_THROW(run_sweep(rc), config_error);
    rc.sweep.grid = {1.0};
    rc.sweep.quantities = {};
    EXPECT_THROW(run_sweep(rc), config_error);
}

TEST(Sweep, EmitCsvShapeAndNineDigits) {
    RunConfig rc;
    rc.materialize_xi();
    rc.quantities = {Quantity::m_bar_d2d};
    auto records = evaluate_point(rc);
    ASSERT_EQ(records.size(), 1u);
    std::ostringstream os;
    emit_csv(records, os);
    std::istringstream is(os.str());
    std::string header, row;
    std::getline(is, header);
    std::getline(is, row);
    EXPECT_EQ(header, "parameter,quantity,analytic,mc_mean,mc_ci,seed");
    EXPECT_NE(row.find("m_bar_d2d,39.1736969"), std::string::npos) << row;
}

TEST(Sweep, EmitRoundTripIsByteStable) {
    RunConfig rc;
    rc.materialize_xi();
    rc.sweep.parameter = SweepParameter::d;
    rc.sweep.grid = {50.0, 250.0, 450.0};
    rc.sweep.quantities = {Quantity::p_d2d, Quantity::outage_drx_at_d};
    rc.mc.runs = 500;
    rc.mc.seed = 7;
    auto r1 = run_sweep(rc);
    auto r2 = run_sweep(rc);
    std::ostringstream a, b, j1, j2;
    emit_csv(r1, a);
    emit_csv(r2, b);
    EXPECT_EQ(a.str(), b.str());
    emit_json(r1, j1);
    emit_json(r2, j2);
    EXPECT_EQ(j1.str(), j2.str());
    EXPECT_EQ(r1.size(), 6u);
}

TEST(Sweep, QosConstraintSolvesPerPoint) {
    RunConfig rc;
    rc.materialize_xi();
    rc.sweep.parameter = SweepParameter::lambda;
    rc.sweep.grid = {2e-5, 5e-5};
    rc.sweep.quantities = {Quantity::m_bar_d2d};
    rc.sweep.qos_target_outage_bs = 1e-2;
    auto records = run_sweep(rc);
    ASSERT_EQ(records.size(), 2u);
    for (const auto& r : records) {
        EXPECT_TRUE(r.note.empty()) << r.note;
        EXPECT_GT(r.analytic, 0.0);
    }
}

TEST(Sweep, SaturatedQosPointsAreMarked) {
    RunConfig rc;
    rc.materialize_xi();
    rc.net.rho_bs = dbm_to_watts(-60.0);
    rc.net.rho_d = dbm_to_watts(-110.0);
    rc.materialize_xi();
    rc.sweep.parameter = SweepParameter::lambda;
    rc.sweep.grid = {5e-5};
    rc.sweep.quantities = {Quantity::m_bar};
    rc.sweep.qos_target_outage_bs = 1e-2;
    auto records = run_sweep(rc);
    ASSERT_EQ(records.size(), 1u);
    EXPECT_EQ(records[0].note, "saturated");
    EXPECT_TRUE(std::isnan(records[0].analytic));
}

TEST(Dump, RealizationSchemaAndDeterminism) {
    NetworkConfig cfg;
    std::ostringstream a, b;
    dump_realizations(a, cfg, 3, 42);
    dump_realizations(b, cfg, 3, 42);
    EXPECT_EQ(a.str(), b.str());
    // one JSON object per line with the documented fields
    std::istringstream is(a.str());
    std::string line;
    int lines = 0;
    while (std::getline(is, line)) {
        ++lines;
        EXPECT_EQ(line.front(), '{');
        EXPECT_NE(line.find("\"seed\":"), std::string::npos);
        EXPECT_NE(line.find("\"cue\":["), std::string::npos);
        EXPECT_NE(line.find("\"pdues\":["), std::string::npos);
        EXPECT_NE(line.find("\"underlay\":"), std::string::npos);
    }
    EXPECT_EQ(lines, 3);
}
