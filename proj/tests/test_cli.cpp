#define DOCTEST_CONFIG_IMPLEMENT
#include <sys/wait.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "spdc/config.hpp"
#include "spdc/csv.hpp"
#include "spdc/magnus.hpp"

namespace {

std::string g_bin;
std::string g_srcdir;

int run_cli(const std::string& args, bool quiet = false) {
    std::string cmd = "\"" + g_bin + "\" " + args;
    cmd += quiet ? " >/dev/null 2>&1" : " >/dev/null";
    const int rc = std::system(cmd.c_str());
    if (rc == -1) return -1;
    return WEXITSTATUS(rc);
}

std::string slurp(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    REQUIRE_MESSAGE(is.good(), "missing file ", path);
    std::ostringstream os;
    os << is.rdbuf();
    return os.str();
}

nlohmann::json jload(const std::string& path) { return nlohmann::json::parse(slurp(path)); }

void write_text(const std::string& path, const std::string& text) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    os << text;
    REQUIRE(os.good());
}

void reset_dir(const std::string& dir) { std::filesystem::remove_all(dir); }

// n_freq 101 and a low gain keep the propagator runs to a few seconds.
const char* kSmallSolverConfig = R"({
  "grid": {"n_freq": 101},
  "solver": {"n_zsteps": 64, "gain_calibration": "linear_lowgain"}
})";

// 601 points over +-1500 GHz gives exact 5 GHz cells, six per 30 GHz bin.
const char* kFringeConfig = R"({
  "grid": {"n_freq": 601, "window_halfwidth_rad_per_ps": 9.42477796076938},
  "pump": {"gain": 0.3},
  "interferogram": {"kind": "model_attenuated", "total_counts": 300000.0,
                    "visibility": 0.3333333333333333}
})";

}  // namespace

TEST_CASE("spmfit reproduces the configured Kerr coefficient") {
    reset_dir("cli_spm");
    REQUIRE(run_cli("spmfit --out cli_spm") == 0);

    const nlohmann::json j = jload("cli_spm/gamma_fit.json");
    CHECK(j.at("b_integral").get<double>() == doctest::Approx(1.6).epsilon(1e-9));
    CHECK(j.at("gamma_relative_error").get<double>() < 0.05);
    CHECK(j.at("critical_power_w").get<double>() ==
          doctest::Approx(16538.312302054492).epsilon(1e-6));
    CHECK(j.at("above_threshold").get<bool>());
    CHECK(j.at("focusing_distance_mm").get<double>() ==
          doctest::Approx(7.4153537126646816).epsilon(1e-6));
    CHECK(j.at("rms_width_ghz").get<double>() ==
          doctest::Approx(1039.0699684798767).epsilon(5e-3));

    const spdc::CsvTable spec = spdc::read_csv("cli_spm/spectrum.csv");
    CHECK(spec.column_index("nu_ghz") == 0);
    CHECK(spec.rows.size() >= 64);
    CHECK(std::filesystem::exists("cli_spm/manifest.json"));
}

TEST_CASE("gain subcommand recovers the configured gain from sampled clicks") {
    reset_dir("cli_gain");
    REQUIRE(run_cli("gain --out cli_gain --seed 20260814") == 0);

    const nlohmann::json j = jload("cli_gain/gain_estimate.json");
    const double g = j.at("estimated_gain").get<double>();
    CHECK(std::abs(g - 1.407) / 1.407 < 0.05);
    CHECK(j.at("shots").get<long long>() == 1000000);
    CHECK(j.at("klyshko").at("high_gain_bias").get<bool>());
    CHECK(j.at("thermal").at("in_domain").get<bool>());

    const spdc::CsvTable pat = spdc::read_csv("cli_gain/patterns.csv");
    CHECK(pat.rows.size() == 16);  // four detectors in the split layout
    double total = 0.0;
    const int cc = pat.column_index("count");
    for (const auto& r : pat.rows) total += r[static_cast<std::size_t>(cc)];
    CHECK(total == doctest::Approx(1e6).epsilon(1e-12));
}

TEST_CASE("jsa subcommand matches the analytic delay at moderate gain") {
    reset_dir("cli_jsa");
    write_text("cli_jsa_config.json", kSmallSolverConfig);
    REQUIRE(run_cli("jsa --config cli_jsa_config.json --gain 0.3 --out cli_jsa") == 0);

    const nlohmann::json j = jload("cli_jsa/jsa_summary.json");
    CHECK(j.at("gain").get<double>() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(j.at("residual_unitarity").get<double>() < 1e-8);
    CHECK(j.at("residual_symmetry").get<double>() < 1e-8);

    const spdc::RunConfig ref = spdc::default_reference_config();
    const spdc::AnalyticDelayResult ad =
        spdc::delay_analytic(ref.crystal, ref.pump.pulse_duration_ps, 0.3);
    const double dn = j.at("delay_numeric_ps").get<double>();
    CHECK(j.at("delay_analytic").at("delay_ps").get<double>() ==
          doctest::Approx(ad.delay_ps).epsilon(1e-12));
    CHECK(std::abs(dn - ad.delay_ps) <= 0.10 * ad.delay_ps);
    CHECK(j.at("schmidt_number").get<double>() >= 1.0);

    const spdc::CsvTable jsa = spdc::read_csv("cli_jsa/jsa.csv");
    CHECK(jsa.rows.size() == 101u * 101u);
    CHECK(jsa.meta.at("command") == "jsa");
}

TEST_CASE("dynamics subcommand writes flux maps and a positive exit-time gap") {
    reset_dir("cli_dyn");
    write_text("cli_dyn_config.json", kSmallSolverConfig);
    REQUIRE(run_cli("dynamics --config cli_dyn_config.json --gain 0.3 --out cli_dyn") == 0);

    const nlohmann::json j = jload("cli_dyn/dynamics_summary.json");
    CHECK(j.at("beta0_ps").get<double>() ==
          doctest::Approx(0.32555855691339614).epsilon(1e-9));
    CHECK(j.at("exit_time_difference_ps").get<double>() > 0.0);
    CHECK(j.at("n_z_samples").get<int>() >= 8);

    const spdc::CsvTable dyn = spdc::read_csv("cli_dyn/dynamics.csv");
    CHECK(dyn.columns.size() == 4);
    CHECK(std::filesystem::exists("cli_dyn/centroids.csv"));
    CHECK(std::filesystem::exists("cli_dyn/pump_profile.csv"));
}

TEST_CASE("interferogram plus extract round-trips the fringe delay") {
    reset_dir("cli_ifg");
    reset_dir("cli_ext");
    write_text("cli_ifg_config.json", kFringeConfig);
    REQUIRE(run_cli("interferogram --config cli_ifg_config.json --seed 123 --out cli_ifg") == 0);

    const spdc::RunConfig ref = spdc::default_reference_config();
    const spdc::AnalyticDelayResult ad =
        spdc::delay_analytic(ref.crystal, ref.pump.pulse_duration_ps, 0.3);

    const nlohmann::json ifg = jload("cli_ifg/interferogram.json");
    CHECK(ifg.at("model_fringe_delay_ps").get<double>() ==
          doctest::Approx(ad.delay_ps).epsilon(1e-12));
    CHECK(ifg.at("histogram_fringe_delay_ps").get<double>() ==
          doctest::Approx(ad.delay_ps + 0.833).epsilon(1e-12));
    CHECK(std::abs(ifg.at("fringe_contrast").get<double>() - 1.0 / 3.0) < 0.01);
    CHECK(ifg.at("seed").get<std::uint64_t>() == 123);

    REQUIRE(run_cli("extract --config cli_ifg_config.json --histogram cli_ifg/histogram.csv"
                    " --out cli_ext") == 0);
    const nlohmann::json est = jload("cli_ext/delay_estimate.json");
    const double delay = est.at("delay_ps").get<double>();
    const double unc = est.at("uncertainty_ps").get<double>();
    CHECK(std::abs(delay - ad.delay_ps) <= unc);
    CHECK(est.at("peak_to_median").get<double>() >= 6.0);
    CHECK(std::abs(est.at("visibility").get<double>() - 1.0 / 3.0) < 0.05);
}

TEST_CASE("equal seeds give byte-identical artifacts, new seeds fresh noise") {
    reset_dir("cli_det_a");
    reset_dir("cli_det_b");
    reset_dir("cli_det_c");
    write_text("cli_ifg_config.json", kFringeConfig);
    REQUIRE(run_cli("interferogram --config cli_ifg_config.json --seed 7 --out cli_det_a") == 0);
    REQUIRE(run_cli("interferogram --config cli_ifg_config.json --seed 7 --out cli_det_b") == 0);
    REQUIRE(run_cli("interferogram --config cli_ifg_config.json --seed 8 --out cli_det_c") == 0);

    CHECK(slurp("cli_det_a/histogram.csv") == slurp("cli_det_b/histogram.csv"));
    CHECK(slurp("cli_det_a/model.csv") == slurp("cli_det_b/model.csv"));
    CHECK(slurp("cli_det_a/interferogram.json") == slurp("cli_det_b/interferogram.json"));
    CHECK(slurp("cli_det_a/histogram.csv") != slurp("cli_det_c/histogram.csv"));
}

TEST_CASE("failures map to distinct exit codes") {
    write_text("cli_bad_key.json", R"({"crystal": {"lenght_mm": 2.0}})");
    CHECK(run_cli("jsa --config cli_bad_key.json --out cli_err", true) == 2);

    write_text("cli_bad_value.json", R"({"detection": {"shots": 0}})");
    CHECK(run_cli("jsa --config cli_bad_value.json --out cli_err", true) == 2);

    write_text("cli_broken_hist.csv", "# columns: nu1_ghz,nu2_ghz,counts\n0,0,oops\n");
    CHECK(run_cli("extract --histogram cli_broken_hist.csv --out cli_err", true) == 3);

    write_text("cli_sparse_hist.csv",
               "# columns: nu1_ghz,nu2_ghz,counts\n0,0,1\n30,30,2\n");
    CHECK(run_cli("extract --histogram cli_sparse_hist.csv --out cli_err", true) == 3);

    CHECK(run_cli("extract --histogram cli_no_such_file.csv --out cli_err", true) == 2);
    CHECK(run_cli("frobnicate", true) == 2);
    CHECK(run_cli("", true) == 2);
}

TEST_CASE("shipped reference scenario equals the built-in defaults") {
    if (g_srcdir.empty()) return;
    const spdc::RunConfig shipped =
        spdc::load_config(g_srcdir + "/data/reference_scenario.json");
    CHECK(spdc::dump_config(shipped) == spdc::dump_config(spdc::default_reference_config()));
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <spdc-binary> [source-dir]\n");
        return 64;
    }
    g_bin = argv[1];
    if (argc > 2) g_srcdir = argv[2];

    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
