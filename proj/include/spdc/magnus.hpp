#pragma once

#include <Eigen/Dense>
#include <complex>

#include "spdc/grid.hpp"
#include "spdc/model.hpp"

namespace spdc {

// Closed-form joint spectral amplitudes for the symmetric group-velocity
// matched source, third order in the gain, interaction picture (no walk-off
// phase; see lab_frame_phase in the propagator for the lab-frame version).

enum class NormConvention { mode_normalized, gain_weighted };

struct JsaGrid {
    FrequencyGrid grid_signal;
    FrequencyGrid grid_idler;
    Eigen::MatrixXcd amp;  // amp(i_signal, i_idler)
    NormConvention norm = NormConvention::mode_normalized;
};

// Orthonormal temporal-mode pair underlying the expansion:
// f0 a unit-norm Gaussian of the pump duration, f1 its erfi-weighted partner.
double mode_f0(double detuning, double pulse_duration_ps);
double mode_f1(double detuning, double pulse_duration_ps);

JsaGrid jsa_order1(const FrequencyGrid& g, double pulse_duration_ps);
JsaGrid jsa_order3(const FrequencyGrid& g, double pulse_duration_ps);
JsaGrid jsa_total(const FrequencyGrid& g, double pulse_duration_ps, double gain);

// Discrete L2 inner product including the grid measure.
std::complex<double> inner(const JsaGrid& a, const JsaGrid& b);
double norm(const JsaGrid& a);

// Joint phase along the anti-diagonal detuning = (dw_s - dw_i)/2 of the
// third-order amplitude. Slope at zero equals beta_of_gain exactly.
double joint_phase(double detuning, double pulse_duration_ps, double gain);

// Gain-induced group advance beta = 24 tau eps^2 / (sqrt(3 pi) (12 + eps^2)), ps.
double beta_of_gain(double gain, double pulse_duration_ps);

struct AnalyticDelayResult {
    double delay_ps = 0.0;   // walk-off minus gain advance
    double beta0_ps = 0.0;
    double beta_ps = 0.0;
    bool within_validated_gain = true;  // closed form derived for eps <= 1
};
AnalyticDelayResult delay_analytic(const CrystalParams& c, double pulse_duration_ps, double gain);

// Mean photon pairs per pulse at gain eps (sinh^2 eps).
double mean_pairs(double gain);

}  // namespace spdc
