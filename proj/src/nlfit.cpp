#include "spdc/nlfit.hpp"

#include <cmath>
#include <complex>
#include <limits>
#include <numbers>

#include "spdc/errors.hpp"
#include "spdc/fft.hpp"
#include "spdc/units.hpp"

namespace spdc {

SpmSpectrum spm_spectrum(const PumpParams& pump, double gamma_p_per_w_m, double length_mm,
                         int n_time) {
    pump.validate();
    if (gamma_p_per_w_m < 0.0) throw config_error("gamma_p must be non-negative");
    if (length_mm <= 0.0) throw config_error("propagation length must be positive");
    if (n_time < 64) throw config_error("spm spectrum needs at least 64 time samples");
    if (pump.peak_power_w <= 0.0) throw config_error("pump.peak_power_w must be positive");

    const double tau = pump.pulse_duration_ps;
    const double gamma_mm = units::per_w_m_to_per_w_mm(gamma_p_per_w_m);
    const double b = gamma_mm * pump.peak_power_w * length_mm;

    // +-16 tau covers the envelope to ~1e-28 while keeping the frequency step
    // fine against the broadened width.
    const double t_half = 16.0 * tau;
    const double dt = 2.0 * t_half / n_time;
    Fft1D fft(n_time);
    for (int k = 0; k < n_time; ++k) {
        const double t = -t_half + k * dt;
        const double p = std::exp(-t * t / (2.0 * tau * tau));  // P(t)/P0
        const double phase = b * p;
        fft.buf()[k] = std::sqrt(p) * std::exp(std::complex<double>(0.0, phase));
    }
    fft.forward();

    SpmSpectrum out;
    out.b_integral = b;
    out.nu_ghz.resize(static_cast<std::size_t>(n_time));
    out.density.resize(static_cast<std::size_t>(n_time));
    const double dw = 2.0 * std::numbers::pi / (n_time * dt);  // rad/ps
    double mass = 0.0;
    for (int k = 0; k < n_time; ++k) {
        const int kk = (k < n_time / 2) ? k + n_time / 2 : k - n_time / 2;  // center DC
        const double w = (k < n_time / 2 ? k : k - n_time) * dw;
        out.nu_ghz[static_cast<std::size_t>(kk)] = units::rad_per_ps_to_ghz(w);
        out.density[static_cast<std::size_t>(kk)] = std::norm(fft.buf()[k]);
        mass += out.density[static_cast<std::size_t>(kk)];
    }
    const double dnu = units::rad_per_ps_to_ghz(dw);
    if (mass <= 0.0) throw numeric_error("spm spectrum has zero mass");
    for (double& d : out.density) d /= mass * dnu;
    out.rms_width_ghz = spectral_rms_width_ghz(out.nu_ghz, out.density);
    return out;
}

double spectral_rms_width_ghz(const std::vector<double>& nu_ghz,
                              const std::vector<double>& density) {
    if (nu_ghz.size() != density.size() || nu_ghz.size() < 3)
        throw data_error("spectrum axis and density must match and hold >= 3 samples");
    double m0 = 0.0, m1 = 0.0, m2 = 0.0;
    for (std::size_t k = 0; k < nu_ghz.size(); ++k) {
        if (density[k] < 0.0) throw data_error("spectral density has a negative entry");
        m0 += density[k];
        m1 += density[k] * nu_ghz[k];
        m2 += density[k] * nu_ghz[k] * nu_ghz[k];
    }
    if (m0 <= 0.0) throw data_error("spectral density is empty");
    const double mean = m1 / m0;
    const double var = m2 / m0 - mean * mean;
    return std::sqrt(std::max(var, 0.0));
}

GammaFit fit_gamma_p(double observed_rms_width_ghz, const PumpParams& pump, double length_mm,
                     double gamma_hi_per_w_m) {
    if (observed_rms_width_ghz <= 0.0)
        throw data_error("observed spectral width must be positive");
    if (gamma_hi_per_w_m <= 0.0) throw config_error("gamma search bound must be positive");

    auto misfit = [&](double gamma) {
        const double w = spm_spectrum(pump, gamma, length_mm).rms_width_ghz;
        const double r = w - observed_rms_width_ghz;
        return r * r;
    };

    double lo = 0.0, hi = gamma_hi_per_w_m;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = misfit(a), fb = misfit(b);
    for (int it = 0; it < 60; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = misfit(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = misfit(b);
        }
    }

    GammaFit fit;
    fit.gamma_p_per_w_m = 0.5 * (lo + hi);
    if (fit.gamma_p_per_w_m > gamma_hi_per_w_m * (1.0 - 1e-6))
        throw numeric_error("gamma fit ran into the top of the search bracket");
    fit.width_residual_ghz = std::sqrt(misfit(fit.gamma_p_per_w_m));
    return fit;
}

SelfFocusingParams self_focusing(const PumpParams& pump, const CrystalParams& crystal) {
    pump.validate();
    if (pump.waist_um <= 0.0) throw config_error("pump.waist_um must be positive");
    if (crystal.gamma_pump_per_w_m <= 0.0)
        throw config_error("crystal.gamma_pump_per_w_m must be positive");
    if (crystal.group_index_pump <= 0.0)
        throw config_error("crystal.group_index_pump must be positive");

    const double lambda_m = pump.center_wavelength_nm * 1e-9;
    const double w0_m = pump.waist_um * 1e-6;
    const double n_index = crystal.group_index_pump;

    SelfFocusingParams out;
    // gamma = 2 pi n2 / (lambda A_eff) with A_eff = pi w0^2.
    out.n2_m2_per_w = 0.5 * crystal.gamma_pump_per_w_m * lambda_m * w0_m * w0_m;
    out.critical_power_w = 1.2 * lambda_m * lambda_m / (8.0 * n_index * out.n2_m2_per_w);
    const double ratio = pump.peak_power_w / out.critical_power_w;
    out.above_threshold = ratio > 1.0;
    if (out.above_threshold) {
        const double rayleigh_like_m = 2.0 * n_index * w0_m * w0_m / lambda_m;
        out.focusing_distance_mm = 1e3 * rayleigh_like_m / std::sqrt(ratio - 1.0);
    } else {
        out.focusing_distance_mm = std::numeric_limits<double>::infinity();
    }
    return out;
}

}  // namespace spdc
