#pragma once

#include <vector>

#include "spdc/model.hpp"

namespace spdc {

// Pump self-action diagnostics: the SPM-broadened spectrum fixes the Kerr
// coefficient, which in turn fixes the self-focusing budget of the source.

struct SpmSpectrum {
    std::vector<double> nu_ghz;   // detuning from the carrier
    std::vector<double> density;  // unit-integral spectral density, 1/GHz
    double rms_width_ghz = 0.0;
    double b_integral = 0.0;  // peak nonlinear phase gamma_p P0 L
};

// Spectrum of sqrt(P(t)) exp(i gamma_p P(t) L) with P(t) = P0 exp(-t^2/2tau^2);
// dispersion over a few mm is negligible at this pulse length and is omitted.
SpmSpectrum spm_spectrum(const PumpParams& pump, double gamma_p_per_w_m, double length_mm,
                         int n_time = 4096);

// RMS width about the centroid of a sampled density; axis in GHz.
double spectral_rms_width_ghz(const std::vector<double>& nu_ghz,
                              const std::vector<double>& density);

struct GammaFit {
    double gamma_p_per_w_m = 0.0;
    double width_residual_ghz = 0.0;
};
// Inverts the measured RMS width for gamma_p. The width grows monotonically
// with the phase budget, so the squared misfit is unimodal on the bracket.
GammaFit fit_gamma_p(double observed_rms_width_ghz, const PumpParams& pump, double length_mm,
                     double gamma_hi_per_w_m = 1e-2);

struct SelfFocusingParams {
    double n2_m2_per_w = 0.0;         // Kerr index from gamma_p and the mode area
    double critical_power_w = 0.0;    // 1.2 lambda^2 / (8 n n2)
    double focusing_distance_mm = 0.0;  // collapse distance; inf below threshold
    bool above_threshold = false;
};
// Uses the group index as the only index the model carries; at these
// dispersions it differs from the phase index well inside the quoted margin.
SelfFocusingParams self_focusing(const PumpParams& pump, const CrystalParams& crystal);

}  // namespace spdc
