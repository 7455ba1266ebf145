#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>

#include "doctest.h"
#include "spdc/config.hpp"
#include "spdc/csv.hpp"
#include "spdc/errors.hpp"

using namespace spdc;

TEST_CASE("builtin reference scenario") {
    const RunConfig cfg = default_reference_config();
    CHECK_NOTHROW(cfg.validate());
    CHECK(cfg.crystal.length_mm == 2.0);
    CHECK(cfg.crystal.group_index_signal == 1.85141);
    CHECK(cfg.pump.gain == 1.407);
    CHECK(cfg.pump.peak_power_w == 1.6e6);
    CHECK(cfg.solver.n_freq == 401);
    CHECK(cfg.solver.n_zsteps == 200);
    CHECK(cfg.solver.calibration == GainCalibration::matched_photon_number);
    CHECK(cfg.detection.chain.delay_offset_ps == 0.833);
    CHECK(cfg.detection.chain.fiber_gdd_ns_per_nm == 1.033);
    CHECK(cfg.detection.chain.efficiency_signal == 0.07);
    CHECK(cfg.detection.shots == 1000000);
    CHECK(cfg.detection.split_arms);
    CHECK(cfg.interferogram.kind == InterferogramKind::model_attenuated);
    CHECK(cfg.interferogram.visibility == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(cfg.sweep.gains.size() == 5);
    CHECK(cfg.seed == 20260814);
}

TEST_CASE("strict parsing rejects unknown keys by full path") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"crystal": {"lenght_mm": 2.0}})", "t"),
                         doctest::Contains("crystal.lenght_mm"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"cristal": {}})", "t"),
                         doctest::Contains("cristal"), config_error);
}

TEST_CASE("type and enum errors name the key") {
    CHECK_THROWS_WITH_AS(parse_config(R"({"crystal": {"length_mm": "two"}})", "t"),
                         doctest::Contains("crystal.length_mm"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"solver": {"integrator": "leapfrog"}})", "t"),
                         doctest::Contains("integrator"), config_error);
    CHECK_THROWS_WITH_AS(parse_config(R"({"interferogram": {"kind": "synthetic"}})", "t"),
                         doctest::Contains("kind"), config_error);
    CHECK_THROWS_WITH_AS(parse_config("{ not json", "broken.json"),
                         doctest::Contains("broken.json"), config_error);
}

TEST_CASE("enum string round trips") {
    CHECK(integrator_from_string(to_string(Integrator::expm_taylor)) == Integrator::expm_taylor);
    CHECK(integrator_from_string(to_string(Integrator::rk4)) == Integrator::rk4);
    CHECK(calibration_from_string(to_string(GainCalibration::matched_photon_number)) ==
          GainCalibration::matched_photon_number);
    CHECK(calibration_from_string(to_string(GainCalibration::linear_lowgain)) ==
          GainCalibration::linear_lowgain);
    CHECK(interferogram_kind_from_string(to_string(InterferogramKind::model_pure)) ==
          InterferogramKind::model_pure);
    CHECK(interferogram_kind_from_string(to_string(InterferogramKind::model_attenuated)) ==
          InterferogramKind::model_attenuated);
    CHECK(to_string(InterferogramKind::synthetic) == "synthetic");
    CHECK_THROWS_AS(interferogram_kind_from_string("synthetic"), config_error);
}

TEST_CASE("dump and parse reach a fixed point") {
    const RunConfig cfg = default_reference_config();
    const std::string once = dump_config(cfg);
    const RunConfig back = parse_config(once, "dump");
    CHECK(dump_config(back) == once);

    const RunConfig builtin = parse_config(kReferenceScenarioJson, "<builtin>");
    CHECK(dump_config(builtin) == once);
}

TEST_CASE("partial configs override the referenced fields only") {
    const RunConfig cfg = parse_config(
        R"({"grid": {"n_freq": 101}, "pump": {"gain": 0.3}, "seed": 99})", "t");
    CHECK(cfg.solver.n_freq == 101);
    CHECK(cfg.pump.gain == 0.3);
    CHECK(cfg.seed == 99);
    CHECK(cfg.crystal.length_mm == 2.0);  // untouched defaults survive
    CHECK(cfg.detection.chain.delay_offset_ps == 0.833);
}

TEST_CASE("config validation names the offending field") {
    RunConfig cfg = default_reference_config();
    cfg.crystal.length_mm = -1.0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("crystal.length_mm"), config_error);

    cfg = default_reference_config();
    cfg.pump.gain = -0.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("pump.gain"), config_error);

    cfg = default_reference_config();
    cfg.detection.shots = 0;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("detection.shots"), config_error);

    cfg = default_reference_config();
    cfg.interferogram.visibility = 1.5;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("interferogram.visibility"),
                         config_error);

    cfg = default_reference_config();
    cfg.sweep.gains.clear();
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("sweep.gains"), config_error);
}

TEST_CASE("load_config missing file") {
    CHECK_THROWS_WITH_AS(load_config("no_such_config.json"),
                         doctest::Contains("no_such_config.json"), config_error);
}

TEST_CASE("csv round trip preserves doubles bit for bit") {
    const std::string path = "io_scratch_roundtrip.csv";
    const std::vector<std::string> cols = {"a", "b", "c"};
    const std::vector<std::vector<double>> rows = {
        {1e-300, -0.0, 3.141592653589793},
        {1.0 / 3.0, 6.02214076e23, -1.7976931348623157e308},
        {42.0, 5e-324, 0.1},
    };
    write_csv(path, {{"tool", "spdc"}, {"note", "scratch"}}, cols, rows);

    const CsvTable t = read_csv(path);
    CHECK(t.columns == cols);
    CHECK(t.meta.at("tool") == "spdc");
    CHECK(t.meta.at("note") == "scratch");
    REQUIRE(t.rows.size() == rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            CHECK(t.rows[r][c] == rows[r][c]);
    CHECK(std::signbit(t.rows[0][1]));

    CHECK(t.column_index("b") == 1);
    CHECK_THROWS_AS(t.column_index("z"), data_error);
    std::remove(path.c_str());
}

TEST_CASE("csv parse errors carry file, line and column") {
    const std::string path = "io_scratch_broken.csv";
    {
        std::ofstream os(path, std::ios::binary);
        os << "# columns: a,b\n1,2\n3,oops\n";
    }
    CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains(":3:2:"), data_error);
    {
        std::ofstream os(path, std::ios::binary);
        os << "# columns: a,b\n1,2,3\n";
    }
    CHECK_THROWS_WITH_AS(read_csv(path), doctest::Contains(":2:"), data_error);
    CHECK_THROWS_AS(read_csv("io_scratch_missing.csv"), data_error);
    std::remove(path.c_str());
}

TEST_CASE("row width must match the declared columns") {
    CHECK_THROWS_AS(write_csv("io_scratch_width.csv", {}, {"a", "b"}, {{1.0}}), data_error);
    std::remove("io_scratch_width.csv.tmp");
}
