#include "spdc/grid.hpp"

#include <cmath>
#include <string>

#include "spdc/errors.hpp"

namespace spdc {

FrequencyGrid FrequencyGrid::symmetric(int n_points, double halfwidth) {
    if (n_points < 3 || n_points % 2 == 0)
        throw config_error("frequency grid needs an odd point count >= 3, got " + std::to_string(n_points));
    if (!(halfwidth > 0.0)) throw config_error("frequency grid halfwidth must be positive");
    FrequencyGrid g;
    g.dw_ = 2.0 * halfwidth / (n_points - 1);
    g.w_.resize(static_cast<size_t>(n_points));
    const int h = n_points / 2;
    for (int i = 0; i < n_points; ++i) g.w_[static_cast<size_t>(i)] = (i - h) * g.dw_;
    return g;
}

FrequencyGrid FrequencyGrid::from_samples(std::vector<double> detunings) {
    FrequencyGrid g;
    g.w_ = std::move(detunings);
    if (g.w_.size() >= 2) g.dw_ = g.w_[1] - g.w_[0];
    g.validate();
    return g;
}

void FrequencyGrid::validate() const {
    const int n = size();
    if (n < 3 || n % 2 == 0)
        throw config_error("frequency grid needs an odd point count >= 3, got " + std::to_string(n));
    if (!(dw_ > 0.0)) throw config_error("frequency grid spacing must be positive");
    const double tol = 1e-9 * dw_;
    for (int i = 1; i < n; ++i) {
        if (std::abs((w_[size_t(i)] - w_[size_t(i - 1)]) - dw_) > tol)
            throw config_error("frequency grid is not uniform near index " + std::to_string(i));
    }
    for (int i = 0; i < n; ++i) {
        if (std::abs(w_[size_t(i)] + w_[size_t(n - 1 - i)]) > tol)
            throw config_error("frequency grid is not symmetric about zero");
    }
}

}  // namespace spdc
