#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <limits>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/nlfit.hpp"

using namespace spdc;

namespace {

PumpParams reference_pump() {
    PumpParams p;
    p.center_wavelength_nm = 779.2;
    p.pulse_duration_ps = 0.132;
    p.peak_power_w = 1.6e6;
    p.waist_um = 125.0;
    return p;
}

CrystalParams reference_crystal() {
    CrystalParams c;
    c.length_mm = 2.0;
    c.group_index_pump = 1.80921;
    c.group_index_signal = 1.85141;
    c.group_index_idler = 1.75381;
    c.gamma_pump_per_w_m = 5.0e-4;
    return c;
}

}  // namespace

TEST_CASE("transform-limited spectrum has the analytic width") {
    // Closed form: sigma^2 = (1/tau^2)(1/4 + B^2/(3 sqrt 3)); B = 0 here.
    const SpmSpectrum s = spm_spectrum(reference_pump(), 0.0, 2.0);
    CHECK(s.b_integral == 0.0);
    CHECK(s.rms_width_ghz == doctest::Approx(602.85963292384588).epsilon(1e-3));

    const double dnu = s.nu_ghz[1] - s.nu_ghz[0];
    double mass = 0.0, centroid = 0.0;
    for (std::size_t k = 0; k < s.density.size(); ++k) {
        mass += s.density[k] * dnu;
        centroid += s.density[k] * s.nu_ghz[k] * dnu;
    }
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(centroid) < 1e-6 * s.rms_width_ghz);
}

TEST_CASE("spm broadening follows the phase budget") {
    const SpmSpectrum s = spm_spectrum(reference_pump(), 5.0e-4, 2.0);
    CHECK(s.b_integral == doctest::Approx(1.6).epsilon(1e-12));
    CHECK(s.rms_width_ghz == doctest::Approx(1039.0699684798767).epsilon(3e-3));

    // Monotone in the nonlinear coefficient.
    const double w1 = spm_spectrum(reference_pump(), 2.5e-4, 2.0).rms_width_ghz;
    CHECK(w1 > 602.0);
    CHECK(w1 < s.rms_width_ghz);
}

TEST_CASE("gamma fit inverts the forward model") {
    const SpmSpectrum s = spm_spectrum(reference_pump(), 5.0e-4, 2.0);
    const GammaFit fit = fit_gamma_p(s.rms_width_ghz, reference_pump(), 2.0);
    CHECK(fit.gamma_p_per_w_m == doctest::Approx(5.0e-4).epsilon(1e-3));
    CHECK(fit.width_residual_ghz < 1e-3 * s.rms_width_ghz);
}

TEST_CASE("gamma fit guards") {
    CHECK_THROWS_AS(fit_gamma_p(0.0, reference_pump(), 2.0), data_error);
    CHECK_THROWS_AS(fit_gamma_p(500.0, reference_pump(), 2.0, 0.0), config_error);
    // A width no gamma in the bracket can reach.
    CHECK_THROWS_AS(fit_gamma_p(3.0e4, reference_pump(), 2.0), numeric_error);
}

TEST_CASE("spm spectrum input guards") {
    PumpParams p = reference_pump();
    CHECK_THROWS_AS(spm_spectrum(p, -1.0e-4, 2.0), config_error);
    CHECK_THROWS_AS(spm_spectrum(p, 5.0e-4, 0.0), config_error);
    CHECK_THROWS_AS(spm_spectrum(p, 5.0e-4, 2.0, 16), config_error);
    p.peak_power_w = 0.0;
    CHECK_THROWS_AS(spm_spectrum(p, 5.0e-4, 2.0), config_error);
}

TEST_CASE("rms width of a hand-built density") {
    const double w = spectral_rms_width_ghz({-1.0, 0.0, 1.0}, {0.25, 0.5, 0.25});
    CHECK(w == doctest::Approx(std::sqrt(0.5)).epsilon(1e-13));
    CHECK_THROWS_AS(spectral_rms_width_ghz({0.0, 1.0}, {1.0, 1.0}), data_error);
    CHECK_THROWS_AS(spectral_rms_width_ghz({-1.0, 0.0, 1.0}, {0.5, -0.1, 0.5}), data_error);
    CHECK_THROWS_AS(spectral_rms_width_ghz({-1.0, 0.0, 1.0}, {0.0, 0.0, 0.0}), data_error);
}

TEST_CASE("self-focusing budget from the reference inputs") {
    const SelfFocusingParams f = self_focusing(reference_pump(), reference_crystal());
    CHECK(f.n2_m2_per_w == doctest::Approx(3.0437499999999997e-18).epsilon(1e-12));
    CHECK(f.critical_power_w == doctest::Approx(16538.312302054492).epsilon(1e-9));
    CHECK(f.above_threshold);
    CHECK(f.focusing_distance_mm == doctest::Approx(7.4153537126646816).epsilon(1e-9));
}

TEST_CASE("self-focusing below threshold") {
    PumpParams weak = reference_pump();
    weak.peak_power_w = 1.0e4;
    const SelfFocusingParams f = self_focusing(weak, reference_crystal());
    CHECK_FALSE(f.above_threshold);
    CHECK(std::isinf(f.focusing_distance_mm));
    CHECK(f.critical_power_w == doctest::Approx(16538.312302054492).epsilon(1e-9));

    PumpParams no_waist = reference_pump();
    no_waist.waist_um = 0.0;
    CHECK_THROWS_AS(self_focusing(no_waist, reference_crystal()), config_error);
    CrystalParams no_gamma = reference_crystal();
    no_gamma.gamma_pump_per_w_m = 0.0;
    CHECK_THROWS_AS(self_focusing(reference_pump(), no_gamma), config_error);
}
