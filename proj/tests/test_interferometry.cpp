#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <complex>

#include "doctest.h"
#include "spdc/errors.hpp"
#include "spdc/interferometry.hpp"
#include "spdc/units.hpp"

using namespace spdc;

namespace {

constexpr double kTau = 0.132;
constexpr double kPi = 3.141592653589793;

DetectionChain reference_chain() {
    DetectionChain c;
    c.fiber_gdd_ns_per_nm = 1.033;
    c.timing_jitter_ns = 0.1;
    c.bin_width_ghz = 30.0;
    return c;
}

JsaGrid delayed_separable(const FrequencyGrid& g, double delay_ps) {
    JsaGrid j;
    j.grid_signal = g;
    j.grid_idler = g;
    const int n = g.size();
    j.amp.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            j.amp(a, b) = mode_f0(g[a], kTau) * mode_f0(g[b], kTau) *
                          std::exp(std::complex<double>(0.0, -0.5 * delay_ps * (g[a] - g[b])));
    return j;
}

}  // namespace

TEST_CASE("thermal attenuation parameters at the reference point") {
    const ThermalAttenuationParams p = thermal_attenuation_params(1.407, 0.07);
    CHECK(p.lambda == doctest::Approx(0.20501664580645759).epsilon(1e-13));
    CHECK(p.eps_prime == doctest::Approx(0.20218602610069927).epsilon(1e-13));
    CHECK(p.n_bar == doctest::Approx(0.19988271511657296).epsilon(1e-13));
    CHECK(p.in_domain);

    // The squeezed-thermal standard form must reproduce the moments it came
    // from: n = eta sinh^2(eps), m = eta sinh(eps) cosh(eps).
    const double n = 0.07 * std::pow(std::sinh(1.407), 2);
    const double m = 0.07 * std::sinh(1.407) * std::cosh(1.407);
    const double n_rec = p.n_bar * std::cosh(2.0 * p.eps_prime) + std::pow(std::sinh(p.eps_prime), 2);
    const double m_rec = (p.n_bar + 0.5) * std::sinh(2.0 * p.eps_prime);
    CHECK(n_rec == doctest::Approx(n).epsilon(1e-12));
    CHECK(m_rec == doctest::Approx(m).epsilon(1e-12));
    CHECK(p.lambda == doctest::Approx(n / (1.0 + n)).epsilon(1e-13));
}

TEST_CASE("thermal attenuation limits") {
    const ThermalAttenuationParams v = thermal_attenuation_params(0.0, 0.5);
    CHECK(v.lambda == 0.0);
    CHECK(v.eps_prime == 0.0);
    CHECK(v.n_bar == 0.0);

    const double eta = 1e-9;
    const ThermalAttenuationParams w = thermal_attenuation_params(1.0, eta);
    CHECK(w.eps_prime < 1e-6);
    CHECK(w.n_bar / (eta * std::pow(std::sinh(1.0), 2)) == doctest::Approx(1.0).epsilon(1e-6));

    CHECK_THROWS_AS(thermal_attenuation_params(1.0, 0.0), config_error);
    CHECK_THROWS_AS(thermal_attenuation_params(1.0, 1.2), config_error);
    CHECK_THROWS_AS(thermal_attenuation_params(-0.1, 0.5), config_error);
}

TEST_CASE("pure coincidence density vanishes for exchange-symmetric amplitudes") {
    const FrequencyGrid g = FrequencyGrid::symmetric(65, 8.0 / kTau);
    const Interferogram z = coincidence_density_pure(jsa_order1(g, kTau));
    CHECK(z.density.maxCoeff() == 0.0);
    CHECK(z.density.minCoeff() == 0.0);
    CHECK(z.kind == InterferogramKind::model_pure);
    CHECK(z.axis1_ghz[0] == doctest::Approx(units::rad_per_ps_to_ghz(g[0])).epsilon(1e-13));

    const Interferogram d = coincidence_density_pure(jsa_total(g, kTau, 1.0));
    for (int a = 0; a < g.size(); ++a) CHECK(d.density(a, a) == 0.0);
}

TEST_CASE("pure coincidence density fringes at the pair delay") {
    const FrequencyGrid g = FrequencyGrid::symmetric(33, 20.0);
    const double delay = 0.5;
    const Interferogram d = coincidence_density_pure(delayed_separable(g, delay));
    for (int a = 0; a < g.size(); ++a)
        for (int b = 0; b < g.size(); ++b) {
            const double env = mode_f0(g[a], kTau) * mode_f0(g[b], kTau);
            const double th = 0.5 * delay * (g[a] - g[b]);
            const double expected = env * env * std::pow(std::sin(th), 2);
            CHECK(d.density(a, b) == doctest::Approx(expected).epsilon(1e-12));
            const double half = 0.5 * env * env * (1.0 - std::cos(delay * (g[a] - g[b])));
            CHECK(d.density(a, b) == doctest::Approx(half).epsilon(1e-12));
        }

    JsaGrid bad = delayed_separable(g, delay);
    bad.grid_idler = FrequencyGrid::symmetric(33, 21.0);
    CHECK_THROWS_AS(coincidence_density_pure(bad), data_error);
}

TEST_CASE("attenuated density is normalized and carries an exact fringe") {
    // Commensurate grid: (T/2) spacing = pi/8, so the sampled fringe reaches
    // both +1 and -1 exactly.
    const double delay = 0.5;
    const FrequencyGrid g = FrequencyGrid::symmetric(65, 16.0 * kPi);
    const std::vector<double> marg = gaussian_marginal(g, kTau);
    const Interferogram d =
        coincidence_density_attenuated(g, marg, delay, kIdealAttenuatedVisibility);

    const double cell = units::rad_per_ps_to_ghz(g.spacing());
    CHECK(d.density.sum() * cell * cell == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(d.fringe_delay_ps == delay);
    CHECK(d.visibility == kIdealAttenuatedVisibility);

    CHECK(fringe_contrast(d) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

    // Eight grid steps along one axis advance the fringe phase by pi.
    const int c = g.size() / 2;
    const double env_hi = marg[static_cast<size_t>(c + 8)] * marg[static_cast<size_t>(c)];
    const double env_lo = marg[static_cast<size_t>(c)] * marg[static_cast<size_t>(c)];
    const double expected_ratio = (env_hi * env_hi / (env_lo * env_lo)) *
                                  (1.0 + kIdealAttenuatedVisibility) /
                                  (1.0 - kIdealAttenuatedVisibility);
    CHECK(d.density(c + 8, c) / d.density(c, c) == doctest::Approx(expected_ratio).epsilon(1e-12));
}

TEST_CASE("attenuated density degenerate fringes") {
    const FrequencyGrid g = FrequencyGrid::symmetric(65, 16.0 * kPi);
    const std::vector<double> marg = gaussian_marginal(g, kTau);

    const Interferogram flat = coincidence_density_attenuated(g, marg, 0.5, 0.0);
    CHECK(fringe_contrast(flat) < 1e-14);

    const Interferogram zero_t = coincidence_density_attenuated(g, marg, 0.0, 0.3);
    CHECK(fringe_contrast(zero_t) < 1e-14);

    CHECK_THROWS_AS(coincidence_density_attenuated(g, marg, 0.5, 1.5), config_error);
    CHECK_THROWS_AS(coincidence_density_attenuated(g, marg, 0.5, -0.1), config_error);
    std::vector<double> short_marg(10, 1.0);
    CHECK_THROWS_AS(coincidence_density_attenuated(g, short_marg, 0.5, 0.3), data_error);
}

TEST_CASE("gaussian marginal samples the fundamental mode") {
    const FrequencyGrid g = FrequencyGrid::symmetric(33, 30.0);
    const std::vector<double> m = gaussian_marginal(g, kTau);
    for (int i = 0; i < g.size(); ++i)
        CHECK(m[static_cast<size_t>(i)] == mode_f0(g[i], kTau));
}

TEST_CASE("jitter-equivalent frequency width") {
    DetectionChain c = reference_chain();
    CHECK(jitter_sigma_ghz(c) == doctest::Approx(11.949851334076328).epsilon(1e-13));
    c.timing_jitter_ns = 0.0;
    CHECK(jitter_sigma_ghz(c) == 0.0);

    DetectionChain bad;
    bad.timing_jitter_ns = 0.1;  // jitter without a fiber constant
    CHECK_THROWS_WITH_AS(bad.validate(), doctest::Contains("fiber_gdd_ns_per_nm"), config_error);
}

TEST_CASE("synthetic histogram is deterministic in the seed") {
    const FrequencyGrid g = FrequencyGrid::symmetric(601, 3.0 * kPi);  // 5 GHz cells
    const Interferogram model = coincidence_density_attenuated(
        g, gaussian_marginal(g, kTau), 0.5, kIdealAttenuatedVisibility);
    DetectionChain chain = reference_chain();
    chain.delay_offset_ps = 0.833;
    const double counts = 2e5;

    const Interferogram h1 = synthesize_histogram(model, chain, counts, 7);
    const Interferogram h2 = synthesize_histogram(model, chain, counts, 7);
    const Interferogram h3 = synthesize_histogram(model, chain, counts, 8);
    CHECK((h1.density - h2.density).cwiseAbs().maxCoeff() == 0.0);
    CHECK((h1.density - h3.density).cwiseAbs().maxCoeff() > 0.0);

    CHECK(h1.kind == InterferogramKind::synthetic);
    CHECK(h1.fringe_delay_ps == doctest::Approx(0.5 + 0.833).epsilon(1e-13));
    CHECK(h1.visibility == kIdealAttenuatedVisibility);
    CHECK(h1.sigma_jitter_ghz == doctest::Approx(11.949851334076328).epsilon(1e-13));
    CHECK(h1.seed == 7);
    CHECK(h1.axis1_ghz.size() % 2 == 1);
    CHECK(h1.axis1_ghz[1] - h1.axis1_ghz[0] == doctest::Approx(30.0).epsilon(1e-13));
    CHECK(h1.axis1_ghz.front() == doctest::Approx(-h1.axis1_ghz.back()).epsilon(1e-13));

    double total = 0.0;
    bool integral = true, nonneg = true;
    for (int a = 0; a < h1.density.rows(); ++a)
        for (int b = 0; b < h1.density.cols(); ++b) {
            const double v = h1.density(a, b);
            total += v;
            if (v < 0.0) nonneg = false;
            if (std::floor(v) != v) integral = false;
        }
    CHECK(nonneg);
    CHECK(integral);
    CHECK(std::abs(total - counts) <= 5.0 * std::sqrt(counts));
}

TEST_CASE("histogram synthesis error taxonomy") {
    const FrequencyGrid g = FrequencyGrid::symmetric(65, 3.0 * kPi);
    const Interferogram model = coincidence_density_attenuated(
        g, gaussian_marginal(g, kTau), 0.5, kIdealAttenuatedVisibility);
    DetectionChain chain = reference_chain();

    const Interferogram h = synthesize_histogram(model, chain, 1e4, 1);
    CHECK_THROWS_AS(synthesize_histogram(h, chain, 1e4, 1), data_error);
    CHECK_THROWS_AS(fringe_contrast(h), data_error);

    CHECK_THROWS_AS(synthesize_histogram(model, chain, 0.0, 1), config_error);

    DetectionChain coarse = chain;
    coarse.bin_width_ghz = 5000.0;
    CHECK_THROWS_WITH_AS(synthesize_histogram(model, coarse, 1e4, 1),
                         doctest::Contains("bin_width_ghz"), config_error);

    DetectionChain offset = chain;
    offset.delay_offset_ps = 0.833;
    const Interferogram pure = coincidence_density_pure(delayed_separable(g, 0.5));
    CHECK_THROWS_AS(synthesize_histogram(pure, offset, 1e4, 1), data_error);
    CHECK_THROWS_AS(fringe_contrast(pure), data_error);
}
