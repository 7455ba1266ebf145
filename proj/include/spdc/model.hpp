#pragma once

#include <optional>
#include <string>

namespace spdc {

enum class PmfKind { sinc, gaussian };

// Dispersion is carried entirely by the three group indices; higher orders
// are outside the model. Nonlinear coefficients stay in W^-1 m^-1 (the usual
// quoted unit) and are converted at point of use.
struct CrystalParams {
    double length_mm = 2.0;
    double group_index_pump = 0.0;
    double group_index_signal = 0.0;
    double group_index_idler = 0.0;
    PmfKind pmf_kind = PmfKind::gaussian;
    double gaussian_gamma = 0.193;  // exp(-gamma (dk L/2)^2) matched to the sinc main lobe
    double gamma_pump_per_w_m = 0.0;
    double gamma_signal_per_w_m = 0.0;
    double gamma_idler_per_w_m = 0.0;
    std::optional<double> poling_period_um;

    void validate() const;  // throws config_error naming the offending field
};

struct PumpParams {
    double center_wavelength_nm = 779.2;
    double pulse_duration_ps = 0.132;  // Gaussian sigma of the pulse intensity P(t)
    double gain = 0.0;                 // dimensionless eps
    double peak_power_w = 0.0;
    double waist_um = 0.0;
    double rep_rate_khz = 0.0;

    void validate() const;
    double carrier_omega() const;  // rad/ps
};

// mm/ps from a group index.
double group_velocity(double group_index);

// Signal-idler group-delay walk-off accumulated over half the crystal:
// beta0 = (L/2)(n_s - n_i)/c, in ps. Positive when the signal is the slow beam.
double walkoff_beta0(const CrystalParams& c);

// Pump-frame walk-off parameters eta_mu = sqrt(gamma) (L/2)(n_mu - n_p)/c (ps)
// plus the residuals that measure how far the crystal is from the symmetric
// group-velocity-matched point the closed-form gain-delay theory assumes.
struct GvmParams {
    double eta_signal = 0.0;
    double eta_idler = 0.0;
    double residual_separability = 0.0;  // |tau^2 + eta_s eta_i|
    double residual_symmetry = 0.0;      // |eta_s + eta_i|
};
GvmParams gvm_params(const CrystalParams& c, double pulse_duration_ps);

// Collinear first-order phase mismatch in the pump frame, rad/mm.
double phase_mismatch(const CrystalParams& c, double detuning_signal, double detuning_idler);

// Phase-matching amplitude as a function of x = dk L / 2.
double pmf_value(PmfKind kind, double gaussian_gamma, double x);

std::string to_string(PmfKind k);
PmfKind pmf_kind_from_string(const std::string& s);

}  // namespace spdc
