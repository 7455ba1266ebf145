#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "spdc/magnus.hpp"

namespace spdc {

// Frequency-resolved coincidence interferometry. Histograms and model
// densities live on symmetric bin-center axes in GHz offset from the
// degenerate carrier; model amplitudes arrive on rad/ps grids and are
// converted at this boundary.

struct DetectionChain {
    double efficiency_signal = 1.0;
    double efficiency_idler = 1.0;
    double fiber_gdd_ns_per_nm = 0.0;   // dispersive-fiber spectrometer constant
    double timing_jitter_ns = 0.0;      // detector jitter, rms
    double bin_width_ghz = 30.0;
    double delay_offset_ps = 0.0;       // fixed birefringent delay added before detection
    double center_wavelength_nm = 1558.4;
    double rep_rate_khz = 0.0;
    double integration_time_s = 0.0;

    void validate() const;
};

// Frequency smearing equivalent of the timing jitter through the fiber
// spectrometer: sigma_nu = c (jitter / GDD) / lambda^2.
double jitter_sigma_ghz(const DetectionChain& chain);

enum class InterferogramKind { model_pure, model_attenuated, synthetic };

struct Interferogram {
    std::vector<double> axis1_ghz;  // bin centers, detuning of detector-1 frequency
    std::vector<double> axis2_ghz;
    Eigen::MatrixXd density;        // probability density (models) or counts (synthetic)
    InterferogramKind kind = InterferogramKind::model_pure;

    double fringe_delay_ps = 0.0;    // T of the modulation term, when known
    double visibility = 0.0;         // V of the modulation term, when known
    std::vector<double> marginal;    // j(w) amplitude on axis1, attenuated model only
    double sigma_jitter_ghz = 0.0;   // applied smearing (synthetic)
    uint64_t seed = 0;
    double total_counts = 0.0;
};

// Two-photon interference of the pure joint amplitude:
// p = 1/4 |J(w1,w2) - J(w2,w1)|^2. A pair delay T in the amplitude phase
// (T/2)(w1 - w2) modulates this at cos(T (w1 - w2)); not normalized, the
// integrated rate carries the interference dip.
Interferogram coincidence_density_pure(const JsaGrid& j);

// Thermalized-source fringe law: p ~ [j(w1) j(w2)]^2 (1 - V cos[(T/2)(w1-w2)]),
// normalized to unit total mass. The ideal visibility of the attenuated
// source is exactly 1/3.
inline constexpr double kIdealAttenuatedVisibility = 1.0 / 3.0;
Interferogram coincidence_density_attenuated(const FrequencyGrid& g, const std::vector<double>& marginal_amp,
                                             double fringe_delay_ps, double visibility);

// Marginal amplitude of the ideal source (the Gaussian temporal mode).
std::vector<double> gaussian_marginal(const FrequencyGrid& g, double pulse_duration_ps);

// Envelope-normalized fringe contrast (max-min)/(max+min) of an attenuated
// model density. Divides out the stored marginal, so it recovers V exactly
// when the sampled fringe reaches both extremes.
double fringe_contrast(const Interferogram& model);

// Detector-pixel counts: re-applies the chain's fixed delay to the fringe
// (attenuated models only), smears by the jitter-equivalent frequency width,
// rebins to the chain bin width, and Poisson-samples with expected total
// `total_counts`. Deterministic in (seed, bin index).
Interferogram synthesize_histogram(const Interferogram& model, const DetectionChain& chain, double total_counts,
                                   uint64_t seed);

// Effective thermal description of a pair source attenuated to transmission
// eta per arm: marginal thermal parameter lambda, and the squeezed-thermal
// (eps', n_bar) standard form. `in_domain` records whether the printed
// formulas were evaluated inside their validity region.
struct ThermalAttenuationParams {
    double lambda = 0.0;
    double eps_prime = 0.0;
    double n_bar = 0.0;
    bool in_domain = true;
};
ThermalAttenuationParams thermal_attenuation_params(double gain, double eta);

}  // namespace spdc
