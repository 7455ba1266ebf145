#pragma once

#include <complex>

// Internal unit system: mm, ps, rad/ps, W. Configs use the field-name units
// (nm, GHz, fs, ...) and are converted on load, never downstream.

namespace spdc::units {

inline constexpr double c_mm_per_ps = 0.299792458;
inline constexpr double c_nm_per_ps = 299792.458;

inline constexpr std::complex<double> i1{0.0, 1.0};

constexpr double ghz_to_rad_per_ps(double f_ghz) { return f_ghz * 2.0e-3 * 3.141592653589793; }
constexpr double rad_per_ps_to_ghz(double w) { return w / (2.0e-3 * 3.141592653589793); }
constexpr double thz_to_rad_per_ps(double f_thz) { return f_thz * 2.0 * 3.141592653589793; }

// Angular carrier frequency of a vacuum wavelength.
double omega_from_wavelength_nm(double lambda_nm);

// Spectral width conversion about a carrier: d(omega) = 2 pi c d(lambda) / lambda^2.
double bandwidth_nm_to_rad_per_ps(double dlambda_nm, double lambda0_nm);

constexpr double um_to_mm(double x) { return x * 1e-3; }
constexpr double fs_to_ps(double t) { return t * 1e-3; }
constexpr double ns_to_ps(double t) { return t * 1e3; }
constexpr double per_w_m_to_per_w_mm(double g) { return g * 1e-3; }

}  // namespace spdc::units
