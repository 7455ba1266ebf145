#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <string>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/model.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

CrystalParams reference_crystal() {
    CrystalParams c;
    c.length_mm = 2.0;
    c.group_index_pump = 1.80921;
    c.group_index_signal = 1.85141;
    c.group_index_idler = 1.75381;
    return c;
}

// Indices placed exactly at the symmetric group-velocity-matched point for
// tau = 0.132 ps and gamma = 0.193, where eta_signal = -eta_idler = tau.
CrystalParams ideal_crystal() {
    CrystalParams c;
    c.length_mm = 2.0;
    c.group_index_pump = 1.8092;
    c.group_index_signal = 1.8992774285078433;
    c.group_index_idler = 1.7191225714921565;
    return c;
}

template <class E, class F>
std::string thrown_message(F&& f) {
    try {
        f();
    } catch (const E& e) {
        return e.what();
    }
    return {};
}

}  // namespace

TEST_CASE("walk-off delay accumulates half the crystal group delay difference") {
    CHECK(walkoff_beta0(reference_crystal()) ==
          doctest::Approx(0.32555855691339614).epsilon(1e-13));
    CHECK(walkoff_beta0(ideal_crystal()) ==
          doctest::Approx(0.60093191875990082).epsilon(1e-13));
}

TEST_CASE("ideal crystal sits on the symmetric matched point") {
    const GvmParams g = gvm_params(ideal_crystal(), 0.132);
    CHECK(g.eta_signal == doctest::Approx(0.132).epsilon(1e-12));
    CHECK(g.eta_idler == doctest::Approx(-0.132).epsilon(1e-12));
    CHECK(g.residual_separability < 1e-12);
    CHECK(g.residual_symmetry < 1e-12);
}

TEST_CASE("reference crystal carries a finite matching residual") {
    const GvmParams g = gvm_params(reference_crystal(), 0.132);
    CHECK(g.residual_symmetry > 1e-3);
    CHECK(g.eta_signal > 0.0);
    CHECK(g.eta_idler < 0.0);
}

TEST_CASE("group velocity and phase mismatch are plain kinematics") {
    CHECK(group_velocity(1.5) == doctest::Approx(0.299792458 / 1.5).epsilon(1e-15));
    const CrystalParams c = reference_crystal();
    const double as = (c.group_index_signal - c.group_index_pump) / units::c_mm_per_ps;
    const double ai = (c.group_index_idler - c.group_index_pump) / units::c_mm_per_ps;
    CHECK(phase_mismatch(c, 2.0, -3.0) ==
          doctest::Approx(as * 2.0 + ai * (-3.0)).epsilon(1e-14));
    CHECK(phase_mismatch(c, 0.0, 0.0) == 0.0);
}

TEST_CASE("phase matching amplitudes") {
    CHECK(pmf_value(PmfKind::gaussian, 0.193, 0.0) == 1.0);
    CHECK(pmf_value(PmfKind::gaussian, 0.193, 2.0) ==
          doctest::Approx(std::exp(-0.193 * 4.0)).epsilon(1e-15));
    CHECK(pmf_value(PmfKind::gaussian, 0.193, -2.0) ==
          pmf_value(PmfKind::gaussian, 0.193, 2.0));
    CHECK(pmf_value(PmfKind::sinc, 0.193, 0.0) == 1.0);
    CHECK(std::abs(pmf_value(PmfKind::sinc, 0.193, 3.141592653589793)) < 1e-12);
    CHECK(pmf_value(PmfKind::sinc, 0.193, 1.0) ==
          doctest::Approx(std::sin(1.0)).epsilon(1e-15));
}

TEST_CASE("crystal validation names the offending field") {
    CrystalParams c = reference_crystal();
    c.length_mm = -1.0;
    CHECK(thrown_message<config_error>([&] { c.validate(); }).find("crystal.length_mm") !=
          std::string::npos);
    c = reference_crystal();
    c.group_index_idler = 0.5;
    CHECK(thrown_message<config_error>([&] { c.validate(); })
              .find("crystal.group_index_idler") != std::string::npos);
    c = reference_crystal();
    c.poling_period_um = -3.0;
    CHECK(thrown_message<config_error>([&] { c.validate(); })
              .find("crystal.poling_period_um") != std::string::npos);
    CHECK_NOTHROW(reference_crystal().validate());
}

TEST_CASE("pump validation and carrier frequency") {
    PumpParams p;
    p.pulse_duration_ps = 0.0;
    CHECK(thrown_message<config_error>([&] { p.validate(); }).find("pump.pulse_duration_ps") !=
          std::string::npos);
    p = PumpParams{};
    p.gain = -0.1;
    CHECK(thrown_message<config_error>([&] { p.validate(); }).find("pump.gain") !=
          std::string::npos);
    p = PumpParams{};
    CHECK_NOTHROW(p.validate());
    CHECK(p.carrier_omega() ==
          doctest::Approx(2.0 * 3.141592653589793 * 299792.458 / 779.2).epsilon(1e-14));
}

TEST_CASE("pmf kind strings round-trip and reject strangers") {
    CHECK(pmf_kind_from_string(to_string(PmfKind::sinc)) == PmfKind::sinc);
    CHECK(pmf_kind_from_string(to_string(PmfKind::gaussian)) == PmfKind::gaussian);
    CHECK_THROWS_AS(pmf_kind_from_string("boxcar"), config_error);
}

TEST_CASE("unit conversions") {
    CHECK(units::ghz_to_rad_per_ps(1000.0) ==
          doctest::Approx(2.0 * 3.141592653589793).epsilon(1e-15));
    CHECK(units::rad_per_ps_to_ghz(units::ghz_to_rad_per_ps(123.4)) ==
          doctest::Approx(123.4).epsilon(1e-15));
    CHECK(units::bandwidth_nm_to_rad_per_ps(2.9, 779.2) ==
          doctest::Approx(2.0 * 3.141592653589793 * 299792.458 * 2.9 / (779.2 * 779.2))
              .epsilon(1e-14));
    CHECK_THROWS_AS(units::omega_from_wavelength_nm(-1.0), config_error);
}
