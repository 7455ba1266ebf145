#include "spdc/units.hpp"

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"

namespace spdc::units {

double omega_from_wavelength_nm(double lambda_nm) {
    if (!(lambda_nm > 0.0)) throw config_error("wavelength must be positive, got " + std::to_string(lambda_nm));
    return 2.0 * std::numbers::pi * c_nm_per_ps / lambda_nm;
}

double bandwidth_nm_to_rad_per_ps(double dlambda_nm, double lambda0_nm) {
    if (!(lambda0_nm > 0.0)) throw config_error("carrier wavelength must be positive");
    return 2.0 * std::numbers::pi * c_nm_per_ps * dlambda_nm / (lambda0_nm * lambda0_nm);
}

}  // namespace spdc::units
