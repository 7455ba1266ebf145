#include "spdc/interferometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "spdc/errors.hpp"
#include "spdc/rng.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

std::vector<double> ghz_axis(const FrequencyGrid& g) {
    std::vector<double> a(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) a[static_cast<size_t>(i)] = units::rad_per_ps_to_ghz(g[i]);
    return a;
}

// Separable Gaussian blur, direct convolution with a +/-5 sigma kernel.
void blur_axes(Eigen::MatrixXd& d, double sigma_bins) {
    if (sigma_bins <= 0.0) return;
    const int r = std::max(1, static_cast<int>(std::ceil(5.0 * sigma_bins)));
    std::vector<double> k(static_cast<size_t>(2 * r + 1));
    double sum = 0.0;
    for (int i = -r; i <= r; ++i) {
        k[static_cast<size_t>(i + r)] = std::exp(-0.5 * (i / sigma_bins) * (i / sigma_bins));
        sum += k[static_cast<size_t>(i + r)];
    }
    for (auto& v : k) v /= sum;

    const auto rows = static_cast<int>(d.rows()), cols = static_cast<int>(d.cols());
    Eigen::MatrixXd tmp(rows, cols);
    tmp.setZero();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double v = d(i, j);
            if (v == 0.0) continue;
            for (int o = -r; o <= r; ++o) {
                const int ii = i + o;
                if (ii >= 0 && ii < rows) tmp(ii, j) += v * k[static_cast<size_t>(o + r)];
            }
        }
    d.setZero();
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) {
            const double v = tmp(i, j);
            if (v == 0.0) continue;
            for (int o = -r; o <= r; ++o) {
                const int jj = j + o;
                if (jj >= 0 && jj < cols) d(i, jj) += v * k[static_cast<size_t>(o + r)];
            }
        }
}

}  // namespace

void DetectionChain::validate() const {
    if (!(efficiency_signal > 0.0) || efficiency_signal > 1.0)
        throw config_error("detection.efficiency_signal must be in (0, 1]");
    if (!(efficiency_idler > 0.0) || efficiency_idler > 1.0)
        throw config_error("detection.efficiency_idler must be in (0, 1]");
    if (fiber_gdd_ns_per_nm < 0.0) throw config_error("detection.fiber_gdd_ns_per_nm must be >= 0");
    if (timing_jitter_ns < 0.0) throw config_error("detection.timing_jitter_ns must be >= 0");
    if (timing_jitter_ns > 0.0 && fiber_gdd_ns_per_nm <= 0.0)
        throw config_error("detection.fiber_gdd_ns_per_nm is required when timing_jitter_ns is set");
    if (!(bin_width_ghz > 0.0)) throw config_error("detection.bin_width_ghz must be positive");
    if (!(center_wavelength_nm > 0.0)) throw config_error("detection.center_wavelength_nm must be positive");
    if (rep_rate_khz < 0.0) throw config_error("detection.rep_rate_khz must be >= 0");
    if (integration_time_s < 0.0) throw config_error("detection.integration_time_s must be >= 0");
}

double jitter_sigma_ghz(const DetectionChain& chain) {
    if (chain.timing_jitter_ns <= 0.0) return 0.0;
    const double dlambda_nm = chain.timing_jitter_ns / chain.fiber_gdd_ns_per_nm;
    const double thz = units::c_nm_per_ps * dlambda_nm / (chain.center_wavelength_nm * chain.center_wavelength_nm);
    return thz * 1e3;
}

Interferogram coincidence_density_pure(const JsaGrid& j) {
    if (!(j.grid_signal == j.grid_idler))
        throw data_error("pure coincidence density needs a common signal/idler grid");
    const int n = j.grid_signal.size();
    Interferogram out;
    out.kind = InterferogramKind::model_pure;
    out.axis1_ghz = ghz_axis(j.grid_signal);
    out.axis2_ghz = out.axis1_ghz;
    out.density.resize(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) out.density(a, b) = 0.25 * std::norm(j.amp(a, b) - j.amp(b, a));
    return out;
}

Interferogram coincidence_density_attenuated(const FrequencyGrid& g, const std::vector<double>& marginal_amp,
                                             double fringe_delay_ps, double visibility) {
    const int n = g.size();
    if (static_cast<int>(marginal_amp.size()) != n)
        throw data_error("marginal amplitude length does not match the grid");
    if (visibility < 0.0 || visibility > 1.0) throw config_error("fringe visibility must be in [0, 1]");

    Interferogram out;
    out.kind = InterferogramKind::model_attenuated;
    out.axis1_ghz = ghz_axis(g);
    out.axis2_ghz = out.axis1_ghz;
    out.fringe_delay_ps = fringe_delay_ps;
    out.visibility = visibility;
    out.marginal = marginal_amp;
    out.density.resize(n, n);
    double mass = 0.0;
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            const double env = marginal_amp[static_cast<size_t>(a)] * marginal_amp[static_cast<size_t>(b)];
            const double fr = 1.0 - visibility * std::cos(0.5 * fringe_delay_ps * (g[a] - g[b]));
            out.density(a, b) = env * env * fr;
            mass += out.density(a, b);
        }
    const double cell = units::rad_per_ps_to_ghz(g.spacing());
    if (!(mass > 0.0)) throw numeric_error("attenuated density has zero mass");
    out.density /= mass * cell * cell;  // unit total probability, GHz^-2 density
    return out;
}

std::vector<double> gaussian_marginal(const FrequencyGrid& g, double pulse_duration_ps) {
    std::vector<double> m(static_cast<size_t>(g.size()));
    for (int i = 0; i < g.size(); ++i) m[static_cast<size_t>(i)] = mode_f0(g[i], pulse_duration_ps);
    return m;
}

double fringe_contrast(const Interferogram& model) {
    if (model.kind != InterferogramKind::model_attenuated || model.marginal.empty())
        throw data_error("fringe contrast needs an attenuated model density with its marginal");
    const auto n = static_cast<int>(model.axis1_ghz.size());
    if (static_cast<int>(model.marginal.size()) != n || model.density.rows() != n ||
        model.density.cols() != n)
        throw data_error("attenuated model marginal does not match its grid");

    // Dividing out the separable envelope leaves 1 - V cos[(T/2) dw] up to a
    // constant, so the sampled extrema return V exactly once the fringe
    // reaches both signs on the grid. Density marginals would not do here:
    // they carry an O(exp(-T^2 sigma^2/8)) fringe bleed of their own.
    double peak = 0.0;
    for (double v : model.marginal) peak = std::max(peak, std::abs(v));
    const double floor = 1e-6 * peak;
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (int a = 0; a < n; ++a) {
        const double ma = model.marginal[static_cast<size_t>(a)];
        if (std::abs(ma) < floor) continue;
        for (int b = 0; b < n; ++b) {
            const double mb = model.marginal[static_cast<size_t>(b)];
            if (std::abs(mb) < floor) continue;
            const double env = ma * mb;
            const double ratio = model.density(a, b) / (env * env);
            lo = std::min(lo, ratio);
            hi = std::max(hi, ratio);
        }
    }
    if (!(hi > 0.0) || !std::isfinite(lo)) throw numeric_error("fringe contrast undefined on empty density");
    return (hi - lo) / (hi + lo);
}

Interferogram synthesize_histogram(const Interferogram& model, const DetectionChain& chain, double total_counts,
                                   uint64_t seed) {
    chain.validate();
    if (!(total_counts > 0.0)) throw config_error("total_counts must be positive");
    if (model.kind == InterferogramKind::synthetic) throw data_error("cannot re-synthesize a synthetic histogram");
    const auto n = static_cast<int>(model.axis1_ghz.size());
    if (n < 3 || model.axis2_ghz != model.axis1_ghz)
        throw data_error("histogram synthesis expects a square symmetric model grid");

    Eigen::MatrixXd work;
    double fringe_total = model.fringe_delay_ps;
    if (chain.delay_offset_ps != 0.0) {
        if (model.kind != InterferogramKind::model_attenuated || model.marginal.empty())
            throw data_error(
                "cannot apply a delay offset without the attenuated-model metadata; "
                "bake the delay into the amplitude for the pure route");
        fringe_total += chain.delay_offset_ps;
        work.resize(n, n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                const double env = model.marginal[static_cast<size_t>(a)] * model.marginal[static_cast<size_t>(b)];
                const double dw =
                    units::ghz_to_rad_per_ps(model.axis1_ghz[static_cast<size_t>(a)] -
                                             model.axis1_ghz[static_cast<size_t>(b)]);
                work(a, b) = env * env * (1.0 - model.visibility * std::cos(0.5 * fringe_total * dw));
            }
    } else {
        work = model.density;
    }

    const double fine_step = model.axis1_ghz[1] - model.axis1_ghz[0];
    blur_axes(work, jitter_sigma_ghz(chain) / fine_step);

    // Rebin to the chain width; fine cells land in the nearest bin center.
    const double binw = chain.bin_width_ghz;
    const int kmax = static_cast<int>(std::floor(model.axis1_ghz.back() / binw));
    if (kmax < 2) throw config_error("detection.bin_width_ghz too coarse for the model grid");
    const int nb = 2 * kmax + 1;
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(nb, nb);
    for (int a = 0; a < n; ++a) {
        const auto ka = static_cast<int>(std::lround(model.axis1_ghz[static_cast<size_t>(a)] / binw));
        if (std::abs(ka) > kmax) continue;
        for (int b = 0; b < n; ++b) {
            const auto kb = static_cast<int>(std::lround(model.axis1_ghz[static_cast<size_t>(b)] / binw));
            if (std::abs(kb) > kmax) continue;
            mass(ka + kmax, kb + kmax) += work(a, b);
        }
    }
    const double total_mass = mass.sum();
    if (!(total_mass > 0.0)) throw numeric_error("histogram synthesis produced zero mass");

    Interferogram out;
    out.kind = InterferogramKind::synthetic;
    out.axis1_ghz.resize(static_cast<size_t>(nb));
    for (int k = 0; k < nb; ++k) out.axis1_ghz[static_cast<size_t>(k)] = (k - kmax) * binw;
    out.axis2_ghz = out.axis1_ghz;
    out.fringe_delay_ps = fringe_total;
    out.visibility = model.visibility;
    out.sigma_jitter_ghz = jitter_sigma_ghz(chain);
    out.seed = seed;
    out.total_counts = total_counts;

    CounterRng rng(seed, /*stream=*/1);
    out.density.resize(nb, nb);
    for (int a = 0; a < nb; ++a)
        for (int b = 0; b < nb; ++b) {
            const double mean = total_counts * mass(a, b) / total_mass;
            out.density(a, b) =
                static_cast<double>(rng.poisson(mean, static_cast<uint64_t>(a) * static_cast<uint64_t>(nb) + b));
        }
    return out;
}

ThermalAttenuationParams thermal_attenuation_params(double gain, double eta) {
    if (!(gain >= 0.0)) throw config_error("gain must be non-negative");
    if (!(eta > 0.0) || eta > 1.0) throw config_error("transmission eta must be in (0, 1]");
    const double s = std::sinh(gain), c = std::cosh(gain);
    const double nbar_arm = eta * s * s;
    const double m = eta * s * c;

    ThermalAttenuationParams p;
    p.lambda = nbar_arm / (1.0 + nbar_arm);
    const double x = 2.0 * m / (1.0 + 2.0 * nbar_arm);
    p.in_domain = x < 1.0;
    if (p.in_domain) {
        p.eps_prime = 0.5 * std::atanh(x);
        p.n_bar = 0.5 * ((1.0 + 2.0 * nbar_arm) / std::cosh(2.0 * p.eps_prime) - 1.0);
        if (p.n_bar < 0.0 && p.n_bar > -1e-12) p.n_bar = 0.0;
        if (p.n_bar < 0.0) p.in_domain = false;
    }
    return p;
}

}  // namespace spdc
