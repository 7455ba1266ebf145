#pragma once

#include <vector>

#include "spdc/interferometry.hpp"
#include "spdc/magnus.hpp"

namespace spdc {

// Estimators that recover the pair delay and fringe parameters from
// histograms or joint amplitudes.

struct DelayEstimate {
    double delay_ps = 0.0;           // sideband separation minus the chain delay offset
    double uncertainty_ps = 0.0;     // half of the unpadded conjugate-axis bin
    double raw_separation_ps = 0.0;  // |t1 - t2| at the sideband peak
    double sideband_t1_ps = 0.0;
    double sideband_t2_ps = 0.0;
    double antidiag_offset_ps = 0.0;  // |t1 + t2|, should be ~0 for a real fringe
    double peak_to_median = 0.0;      // detection significance
};

// 2-D FFT of the mean-subtracted histogram; the fringe cos[(T/2)(w1 - w2)]
// shows up as a sideband at (T/2, -T/2) on the conjugate anti-diagonal.
// Sideband search along the anti-diagonal conjugate axis, zero-padded 4x,
// parabolically refined, DC-excluded. Throws data_error when no significant
// sideband exists.
DelayEstimate extract_delay_fft(const Interferogram& histogram, double delay_offset_ps);

struct PhaseSlopeEstimate {
    double delay_ps = 0.0;  // -slope; positive when the slow beam exits later
    double slope = 0.0;     // d(arg J)/dx, x = (w_s - w_i)/2
    int n_pairs = 0;
    double weight_fraction = 0.0;  // share of |J| mass that passed the threshold
};

// Weighted phase gradient along the anti-diagonal of an input-face-referenced
// joint amplitude. Neighbor differences keep every step inside (-pi, pi], so
// no unwrapping is needed.
PhaseSlopeEstimate extract_delay_phase(const JsaGrid& lab_jsa, double amp_threshold_frac = 1e-3);

struct VisibilityFit {
    double visibility = 0.0;
    double amplitude = 0.0;     // overall scale of the envelope model
    double rms_residual = 0.0;  // weighted, in counts
    double fringe_delay_ps = 0.0;
};

// Linear least squares for N ~ A E(w1,w2) [1 - V cos((T/2)(w1-w2))]. The
// separable envelope E starts from the histogram marginals and is iteratively
// stripped of the fringe copy the raw marginals carry, so V is unbiased on
// model-form data.
VisibilityFit fit_visibility(const Interferogram& histogram, double fringe_delay_ps);

struct SchmidtDiagnostics {
    std::vector<double> weights;  // descending, unit sum
    double schmidt_number = 0.0;
};
SchmidtDiagnostics schmidt_diagnostics(const JsaGrid& j);

}  // namespace spdc
