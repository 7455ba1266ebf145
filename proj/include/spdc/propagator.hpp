#pragma once

#include <Eigen/Dense>
#include <vector>

#include "spdc/grid.hpp"
#include "spdc/magnus.hpp"
#include "spdc/model.hpp"

namespace spdc {

// Heisenberg-picture two-beam propagation in the pump co-moving frame.
// The free group-velocity mismatch is absorbed into z-dependent phases on
// the coupling kernels (interaction picture), so each z slice exponentiates
// an exact Bogoliubov generator and the symplectic invariants survive to
// round-off. Kernel phases are referenced to the exit face: a pair born at
// zeta is tagged exp(-i dk (L - zeta)), the walk-off phase it accumulates
// before leaving the crystal, so emitted-pair phases read in detector time.

enum class Integrator { expm_taylor, rk4 };

// How the pair-coupling strength is tied to the requested gain eps:
//  - matched_photon_number: secant-search the coupling until the total mean
//    photon number equals sinh^2(eps) (the operational definition used when
//    fitting squeezer statistics). Default.
//  - linear_lowgain: first-order joint amplitude has norm exactly eps.
enum class GainCalibration { matched_photon_number, linear_lowgain };

struct SolverSettings {
    int n_freq = 401;
    int n_zsteps = 200;
    double window_halfwidth = 0.0;  // rad/ps; 0 -> 8 / pulse_duration
    Integrator integrator = Integrator::expm_taylor;
    GainCalibration calibration = GainCalibration::matched_photon_number;
    bool chi3 = false;
    double invariant_tolerance = 1e-6;

    void validate() const;
};

struct TransferMatrices {
    FrequencyGrid grid;
    // a_s,out = U_ss a_s,in + V_si b_i,in^dag ; b_i,out = U_ii b_i,in + V_is a_s,in^dag
    Eigen::MatrixXcd U_ss, V_si, V_is, U_ii;
    double gain = 0.0;
    double coupling_scale = 1.0;      // matched-calibration multiplier on the low-gain coupling
    double residual_unitarity = 0.0;  // max-abs of U U^dag - V V^dag - I, both beams
    double residual_symmetry = 0.0;   // max-abs of U_ss V_is^T - V_si U_ii^T
};

TransferMatrices propagate(const CrystalParams& crystal, const PumpParams& pump, const SolverSettings& settings);

struct JsaDecomposition {
    JsaGrid jsa;                    // gain-weighted joint amplitude F asinh(S) H^T
    std::vector<double> schmidt_r;  // squeezing parameters r_k, descending
    double total_pairs = 0.0;       // sum sinh^2 r_k
    double schmidt_number = 0.0;    // (sum r^2)^2 / sum r^4
};
JsaDecomposition jsa_from_transfer(const TransferMatrices& t);

// Pair amplitude of the emitted state: solves U_ss^dag J = V_is^T, which is
// F_s tanh(R) F_i^T in the output Schmidt bases. The gain-weighted kernel
// above shares its magnitudes, but its SVD input basis silently absorbs any
// intra-crystal frequency conversion; here that rotation cancels, so the
// phase tilt of this object is the physical signal-idler arrival delay.
JsaGrid state_jsa(const TransferMatrices& t);

// Interaction-picture amplitude -> input-face (lab) referencing: multiplies
// exp(-i (dk_s + dk_i) L/2). For a symmetric-GVM crystal this is the familiar
// exp(-i (beta0/2)(dw_s - dw_i)) walk-off phase.
void lab_frame_phase(JsaGrid& j, const CrystalParams& crystal);

struct DynamicsMap {
    std::vector<double> z_mm;  // distance from the input face
    std::vector<double> t_ps;  // co-moving time
    Eigen::MatrixXd n_signal;  // photons / ps, rows follow z_mm
    Eigen::MatrixXd n_idler;
    std::vector<double> pump_power_w;        // envelope on t_ps
    std::vector<double> centroid_signal_ps;  // per z sample
    std::vector<double> centroid_idler_ps;
    double exit_time_difference_ps = 0.0;    // centroid lag, signal minus idler, at the exit face
};

// Spectrally resolved photon flux along the crystal. Runs its own
// propagation at the given settings and samples ~32 z positions.
DynamicsMap pulse_dynamics(const CrystalParams& crystal, const PumpParams& pump, const SolverSettings& settings);

}  // namespace spdc
