#include "spdc/rng.hpp"

#include <cmath>
#include <numbers>

#include "spdc/errors.hpp"

namespace spdc {

namespace {

constexpr uint64_t kGolden = 0x9E3779B97F4A7C15ull;

uint64_t mix(uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ull;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBull;
    z ^= z >> 31;
    return z;
}

double to_unit(uint64_t b) { return static_cast<double>(b >> 11) * 0x1.0p-53; }

}  // namespace

uint64_t CounterRng::bits(uint64_t counter) const {
    uint64_t z = mix(seed_ + kGolden * (stream_ + 1));
    return mix(z + kGolden * counter + 1);
}

double CounterRng::uniform(uint64_t counter) const { return to_unit(bits(counter)); }

double CounterRng::sub_uniform(uint64_t counter, uint64_t sub) const {
    uint64_t z = mix(seed_ + kGolden * (stream_ + 1));
    z = mix(z + kGolden * counter + 1);
    return to_unit(mix(z + kGolden * (sub + 1)));
}

double CounterRng::normal(uint64_t counter) const {
    const double u1 = sub_uniform(counter, 0);
    const double u2 = sub_uniform(counter, 1);
    const double r = std::sqrt(-2.0 * std::log(1.0 - u1));  // 1-u1 keeps log finite
    return r * std::cos(2.0 * std::numbers::pi * u2);
}

int64_t CounterRng::poisson(double mean, uint64_t counter) const {
    if (!(mean >= 0.0) || !std::isfinite(mean)) throw numeric_error("Poisson mean must be finite and non-negative");
    if (mean == 0.0) return 0;

    if (mean < 30.0) {
        // Inversion by sequential search.
        const double u = sub_uniform(counter, 0);
        double p = std::exp(-mean);
        double cum = p;
        int64_t k = 0;
        while (u > cum && k < 2000) {
            ++k;
            p *= mean / static_cast<double>(k);
            cum += p;
        }
        return k;
    }

    // PTRS transformed rejection (Hormann 1993).
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    const double log_mean = std::log(mean);

    for (uint64_t it = 0;; ++it) {
        if (it > 1000) throw numeric_error("Poisson rejection sampler failed to converge");
        double u = sub_uniform(counter, 2 * it) - 0.5;
        double v = sub_uniform(counter, 2 * it + 1);
        const double us = 0.5 - std::abs(u);
        const auto k = static_cast<int64_t>(std::floor((2.0 * a / us + b) * u + mean + 0.43));
        if (us >= 0.07 && v <= v_r) return k;
        if (k < 0 || (us < 0.013 && v > us)) continue;
        const double lhs = std::log(v * inv_alpha / (a / (us * us) + b));
        const double rhs = -mean + static_cast<double>(k) * log_mean - std::lgamma(static_cast<double>(k) + 1.0);
        if (lhs <= rhs) return k;
    }
}

}  // namespace spdc
