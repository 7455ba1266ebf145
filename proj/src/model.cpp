#include "spdc/model.hpp"

#include <cmath>
#include <string>

#include "spdc/errors.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {
void require(bool ok, const std::string& field, const std::string& why) {
    if (!ok) throw config_error(field + " " + why);
}
}  // namespace

void CrystalParams::validate() const {
    require(length_mm > 0.0, "crystal.length_mm", "must be positive");
    require(group_index_pump > 1.0, "crystal.group_index_pump", "must exceed 1 (bulk optics)");
    require(group_index_signal > 1.0, "crystal.group_index_signal", "must exceed 1 (bulk optics)");
    require(group_index_idler > 1.0, "crystal.group_index_idler", "must exceed 1 (bulk optics)");
    require(gaussian_gamma > 0.0, "crystal.gaussian_gamma", "must be positive");
    require(gamma_pump_per_w_m >= 0.0, "crystal.gamma_pump_per_w_m", "must be non-negative");
    require(gamma_signal_per_w_m >= 0.0, "crystal.gamma_signal_per_w_m", "must be non-negative");
    require(gamma_idler_per_w_m >= 0.0, "crystal.gamma_idler_per_w_m", "must be non-negative");
    if (poling_period_um) require(*poling_period_um > 0.0, "crystal.poling_period_um", "must be positive");
}

void PumpParams::validate() const {
    require(center_wavelength_nm > 0.0, "pump.center_wavelength_nm", "must be positive");
    require(pulse_duration_ps > 0.0, "pump.pulse_duration_ps", "must be positive");
    require(gain >= 0.0, "pump.gain", "must be non-negative");
    require(peak_power_w >= 0.0, "pump.peak_power_w", "must be non-negative");
    require(waist_um >= 0.0, "pump.waist_um", "must be non-negative");
    require(rep_rate_khz >= 0.0, "pump.rep_rate_khz", "must be non-negative");
}

double PumpParams::carrier_omega() const { return units::omega_from_wavelength_nm(center_wavelength_nm); }

double group_velocity(double group_index) {
    if (!(group_index > 0.0)) throw config_error("group index must be positive");
    return units::c_mm_per_ps / group_index;
}

double walkoff_beta0(const CrystalParams& c) {
    return 0.5 * c.length_mm * (c.group_index_signal - c.group_index_idler) / units::c_mm_per_ps;
}

GvmParams gvm_params(const CrystalParams& c, double pulse_duration_ps) {
    const double s = std::sqrt(c.gaussian_gamma) * 0.5 * c.length_mm / units::c_mm_per_ps;
    GvmParams g;
    g.eta_signal = s * (c.group_index_signal - c.group_index_pump);
    g.eta_idler = s * (c.group_index_idler - c.group_index_pump);
    g.residual_separability = std::abs(pulse_duration_ps * pulse_duration_ps + g.eta_signal * g.eta_idler);
    g.residual_symmetry = std::abs(g.eta_signal + g.eta_idler);
    return g;
}

double phase_mismatch(const CrystalParams& c, double detuning_signal, double detuning_idler) {
    const double as = (c.group_index_signal - c.group_index_pump) / units::c_mm_per_ps;
    const double ai = (c.group_index_idler - c.group_index_pump) / units::c_mm_per_ps;
    return as * detuning_signal + ai * detuning_idler;
}

double pmf_value(PmfKind kind, double gaussian_gamma, double x) {
    if (kind == PmfKind::gaussian) return std::exp(-gaussian_gamma * x * x);
    if (x == 0.0) return 1.0;
    return std::sin(x) / x;
}

std::string to_string(PmfKind k) { return k == PmfKind::gaussian ? "gaussian" : "sinc"; }

PmfKind pmf_kind_from_string(const std::string& s) {
    if (s == "gaussian") return PmfKind::gaussian;
    if (s == "sinc") return PmfKind::sinc;
    throw config_error("crystal.pmf_kind must be \"sinc\" or \"gaussian\", got \"" + s + "\"");
}

}  // namespace spdc
