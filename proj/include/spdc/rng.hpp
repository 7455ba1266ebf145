#pragma once

#include <cstdint>

namespace spdc {

// Counter-based generator: every draw is a pure function of
// (seed, stream, counter), so histogram bins and shots can be sampled in any
// order (or re-sampled) with identical results. Mixing is the splitmix64
// finalizer applied twice.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t bits(uint64_t counter) const;
    double uniform(uint64_t counter) const;            // [0, 1)
    double normal(uint64_t counter) const;             // standard normal (Box-Muller)
    // Poisson sample: inversion below mean 30, Hormann's PTRS rejection above.
    // A draw may consume several sub-uniforms; all are derived from `counter`.
    int64_t poisson(double mean, uint64_t counter) const;

  private:
    double sub_uniform(uint64_t counter, uint64_t sub) const;
    uint64_t seed_, stream_;
};

}  // namespace spdc
