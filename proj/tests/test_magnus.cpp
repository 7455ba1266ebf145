#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "oracles.hpp"
#include "spdc/grid.hpp"
#include "spdc/magnus.hpp"

using namespace spdc;

namespace {

constexpr double kTau = 0.132;

FrequencyGrid wide_grid() { return FrequencyGrid::symmetric(257, 8.0 / kTau); }

CrystalParams reference_crystal() {
    CrystalParams c;
    c.length_mm = 2.0;
    c.group_index_pump = 1.80921;
    c.group_index_signal = 1.85141;
    c.group_index_idler = 1.75381;
    return c;
}

}  // namespace

TEST_CASE("temporal mode pair is orthonormal under quadrature") {
    const double w = 8.0 / kTau;
    const double n00 = oracle::integrate(
        [](double x) { const double v = mode_f0(x, kTau); return v * v; }, -w, w, 1e-13);
    const double n11 = oracle::integrate(
        [](double x) { const double v = mode_f1(x, kTau); return v * v; }, -w, w, 1e-13);
    const double n01 = oracle::integrate(
        [](double x) { return mode_f0(x, kTau) * mode_f1(x, kTau); }, -w, w, 1e-13);
    CHECK(n00 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(n11 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(std::abs(n01) < 1e-10);
}

TEST_CASE("fundamental mode peak") {
    CHECK(mode_f0(0.0, 1.0) == doctest::Approx(1.062251932027197).epsilon(1e-12));
    CHECK(mode_f1(0.0, 1.0) == 0.0);  // odd partner
    CHECK(mode_f1(-0.7, 0.3) == doctest::Approx(-mode_f1(0.7, 0.3)).epsilon(1e-13));
}

TEST_CASE("first-order amplitude is the separable mode product") {
    const FrequencyGrid g = wide_grid();
    const JsaGrid j1 = jsa_order1(g, kTau);
    const int c = g.size() / 2;
    CHECK(std::abs(j1.amp(c, c)) ==
          doctest::Approx(2.0 * kTau / std::sqrt(3.141592653589793)).epsilon(1e-12));
    for (int is : {10, 60, 128, 200}) {
        for (int ii : {5, 90, 128, 250}) {
            CHECK(j1.amp(is, ii).real() ==
                  doctest::Approx(mode_f0(g[is], kTau) * mode_f0(g[ii], kTau)).epsilon(1e-12));
            CHECK(j1.amp(is, ii).imag() == 0.0);
        }
    }
    CHECK(norm(j1) == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("third-order amplitude is unit norm and overlaps order one by sqrt(2)/4") {
    const FrequencyGrid g = wide_grid();
    const JsaGrid j1 = jsa_order1(g, kTau);
    const JsaGrid j3 = jsa_order3(g, kTau);
    CHECK(norm(j3) == doctest::Approx(1.0).epsilon(1e-8));
    const std::complex<double> ov = inner(j1, j3);
    CHECK(ov.real() == doctest::Approx(0.35355339059327379).epsilon(1e-8));
    CHECK(std::abs(ov.imag()) < 1e-12);
}

TEST_CASE("total amplitude norm follows the order-by-order expansion") {
    // ||eps J1 + eps^3 (J3/sqrt(18))||^2 = eps^2 + eps^4/6 + eps^6/18, using
    // only mode orthonormality and the sqrt(2)/4 overlap above.
    const FrequencyGrid g = wide_grid();
    for (double eps : {0.2, 0.8, 1.407}) {
        const double expected = eps * eps + std::pow(eps, 4) / 6.0 + std::pow(eps, 6) / 18.0;
        const double n2 = std::pow(norm(jsa_total(g, kTau, eps)), 2);
        CHECK(n2 == doctest::Approx(expected).epsilon(1e-8));
    }
}

TEST_CASE("joint phase is odd and slopes to beta at the origin") {
    for (double eps : {0.3, 1.0, 1.407}) {
        CHECK(joint_phase(0.0, kTau, eps) == 0.0);
        CHECK(joint_phase(-0.5, kTau, eps) ==
              doctest::Approx(-joint_phase(0.5, kTau, eps)).epsilon(1e-13));
        const double h = 1e-4;
        const double slope =
            (joint_phase(h, kTau, eps) - joint_phase(-h, kTau, eps)) / (2.0 * h);
        CHECK(slope == doctest::Approx(beta_of_gain(eps, kTau)).epsilon(1e-6));
    }
}

TEST_CASE("gain advance frozen values and saturation") {
    CHECK(beta_of_gain(1.0, 0.132) == doctest::Approx(0.079379115779920531).epsilon(1e-13));
    CHECK(beta_of_gain(1.407, 0.132) == doctest::Approx(0.1461307242599475).epsilon(1e-13));
    CHECK(beta_of_gain(0.0, 0.132) == 0.0);
    double prev = 0.0;
    const double cap = 24.0 * 0.132 / std::sqrt(3.0 * 3.141592653589793);
    for (double eps = 0.1; eps <= 3.01; eps += 0.1) {
        const double b = beta_of_gain(eps, 0.132);
        CHECK(b > prev);
        CHECK(b < cap);
        prev = b;
    }
}

TEST_CASE("analytic delay combines walk-off and gain advance") {
    const CrystalParams c = reference_crystal();
    const AnalyticDelayResult r = delay_analytic(c, kTau, 1.407);
    CHECK(r.delay_ps == doctest::Approx(0.17942783265344864).epsilon(1e-12));
    CHECK(r.beta0_ps == doctest::Approx(0.32555855691339614).epsilon(1e-13));
    CHECK(r.beta_ps == doctest::Approx(0.1461307242599475).epsilon(1e-13));
    CHECK_FALSE(r.within_validated_gain);
    CHECK(delay_analytic(c, kTau, 1.0).within_validated_gain);
    CHECK(delay_analytic(c, kTau, 0.0).delay_ps ==
          doctest::Approx(r.beta0_ps).epsilon(1e-13));
}

TEST_CASE("mean pair number") {
    CHECK(mean_pairs(1.0) == doctest::Approx(1.3810978455418155).epsilon(1e-13));
    CHECK(mean_pairs(3.0) == doctest::Approx(100.35781806122796).epsilon(1e-13));
    CHECK(mean_pairs(0.0) == 0.0);
}
