#pragma once

#include <vector>

namespace spdc {

// Uniform symmetric detuning grid about a beam carrier. Detunings in rad/ps.
// Kept odd so the carrier itself is a sample; spacing uniformity and symmetry
// are validated because downstream FFT kernels assume both.
class FrequencyGrid {
  public:
    FrequencyGrid() = default;
    static FrequencyGrid symmetric(int n_points, double halfwidth);
    static FrequencyGrid from_samples(std::vector<double> detunings);

    int size() const { return static_cast<int>(w_.size()); }
    double spacing() const { return dw_; }
    double halfwidth() const { return w_.empty() ? 0.0 : -w_.front(); }
    double operator[](int i) const { return w_[static_cast<size_t>(i)]; }
    const std::vector<double>& detunings() const { return w_; }

    bool operator==(const FrequencyGrid& o) const { return w_ == o.w_; }

  private:
    void validate() const;

    std::vector<double> w_;
    double dw_ = 0.0;
};

}  // namespace spdc
