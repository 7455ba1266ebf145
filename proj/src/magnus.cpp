#include "spdc/magnus.hpp"

#include <cmath>
#include <functional>
#include <numbers>

#include "spdc/errors.hpp"
#include "spdc/special.hpp"

namespace spdc {

namespace {

constexpr double pi = std::numbers::pi;

double f1_over_f0(double detuning, double tau) {
    return std::sqrt(3.0) * erfi(std::sqrt(4.0 / 3.0) * tau * detuning);
}

void check_tau(double tau) {
    if (!(tau > 0.0)) throw config_error("pulse duration must be positive");
}

JsaGrid sample_pair(const FrequencyGrid& g, const std::function<std::complex<double>(double, double)>& f) {
    JsaGrid j;
    j.grid_signal = g;
    j.grid_idler = g;
    const int n = g.size();
    j.amp.resize(n, n);
    for (int is = 0; is < n; ++is)
        for (int ii = 0; ii < n; ++ii) j.amp(is, ii) = f(g[is], g[ii]);
    return j;
}

}  // namespace

double mode_f0(double detuning, double tau) {
    return std::pow(1.0 / pi, 0.25) * std::sqrt(2.0 * tau) * std::exp(-2.0 * tau * tau * detuning * detuning);
}

double mode_f1(double detuning, double tau) {
    // sqrt(3) f0 erfi(sqrt(4/3) tau dw), fused so the Gaussian tames erfi's
    // growth: the combined exponent is -(2/3) tau^2 dw^2.
    const double u = std::sqrt(4.0 / 3.0) * tau * detuning;
    const double pref = std::sqrt(3.0) * std::pow(1.0 / pi, 0.25) * std::sqrt(2.0 * tau);
    const double gauss = std::exp(-(2.0 / 3.0) * tau * tau * detuning * detuning);
    return pref * gauss * (2.0 / std::sqrt(pi)) * dawson(u);
}

JsaGrid jsa_order1(const FrequencyGrid& g, double tau) {
    check_tau(tau);
    return sample_pair(g, [tau](double ws, double wi) -> std::complex<double> {
        return mode_f0(ws, tau) * mode_f0(wi, tau);
    });
}

JsaGrid jsa_order3(const FrequencyGrid& g, double tau) {
    check_tau(tau);
    const double s18 = std::sqrt(18.0);
    return sample_pair(g, [tau, s18](double ws, double wi) -> std::complex<double> {
        const double f0s = mode_f0(ws, tau), f0i = mode_f0(wi, tau);
        const double f1s = mode_f1(ws, tau), f1i = mode_f1(wi, tau);
        const double l3 = (f0s * f0i - f1s * f1i) / 12.0;
        const double k3 = (f0s * f1i - f1s * f0i) / (4.0 * std::sqrt(3.0));
        return s18 * std::complex<double>(l3, -k3);
    });
}

JsaGrid jsa_total(const FrequencyGrid& g, double tau, double gain) {
    check_tau(tau);
    if (!(gain >= 0.0)) throw config_error("gain must be non-negative");
    JsaGrid j1 = jsa_order1(g, tau);
    JsaGrid j3 = jsa_order3(g, tau);
    JsaGrid out = std::move(j1);
    const double e3 = gain * gain * gain;
    out.amp = gain * out.amp + (e3 / std::sqrt(18.0)) * j3.amp;
    out.norm = NormConvention::gain_weighted;
    return out;
}

std::complex<double> inner(const JsaGrid& a, const JsaGrid& b) {
    if (!(a.grid_signal == b.grid_signal) || !(a.grid_idler == b.grid_idler))
        throw data_error("inner product needs matching frequency grids");
    const double meas = a.grid_signal.spacing() * a.grid_idler.spacing();
    return (a.amp.conjugate().cwiseProduct(b.amp)).sum() * meas;
}

double norm(const JsaGrid& a) { return std::sqrt(std::abs(inner(a, a))); }

double joint_phase(double detuning, double tau, double gain) {
    const double e2 = gain * gain;
    const double r = f1_over_f0(detuning, tau) / std::sqrt(3.0);  // erfi(u)
    const double num = e2 * r;
    const double den = 2.0 + (e2 / 6.0) * (1.0 + 3.0 * r * r);
    return std::atan2(num, den);
}

double beta_of_gain(double gain, double tau) {
    check_tau(tau);
    const double e2 = gain * gain;
    return 24.0 * tau * e2 / (std::sqrt(3.0 * pi) * (12.0 + e2));
}

AnalyticDelayResult delay_analytic(const CrystalParams& c, double tau, double gain) {
    AnalyticDelayResult r;
    r.beta0_ps = walkoff_beta0(c);
    r.beta_ps = beta_of_gain(gain, tau);
    r.delay_ps = r.beta0_ps - r.beta_ps;
    r.within_validated_gain = gain <= 1.0;
    return r;
}

double mean_pairs(double gain) {
    const double s = std::sinh(gain);
    return s * s;
}

}  // namespace spdc
