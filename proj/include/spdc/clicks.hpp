#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

namespace spdc {

// Threshold-detector statistics of the squeezed pair source, computed from
// Gaussian covariances. Click probabilities follow from vacuum overlaps by
// inclusion-exclusion, so no Fock-space truncation enters anywhere.

// Zero-mean Gaussian state held as the Husimi covariance Q = Sigma_sym + I/2
// on the real basis (x_0..x_{n-1}, p_0..p_{n-1}); vacuum is the identity and
// every physical state obeys Q >= I/2.
class GaussianState {
  public:
    explicit GaussianState(int n_modes);

    int n_modes() const { return n_; }
    const Eigen::MatrixXd& husimi() const { return q_; }
    Eigen::MatrixXd& husimi() { return q_; }

    void validate() const;
    void apply_loss(int mode, double transmissivity);
    // Rotation by theta between two modes, applied to x and p alike;
    // theta = pi/4 is the balanced splitter.
    void beamsplit(int mode_a, int mode_b, double theta);
    GaussianState with_vacuum_ancillas(int extra) const;

    double mean_photons(int mode) const;
    double total_photons() const;

    // Probability that every listed mode holds vacuum, the rest traced out.
    double vacuum_probability(const std::vector<int>& modes) const;

  private:
    int index_x(int mode) const { return mode; }
    int index_p(int mode) const { return n_ + mode; }

    int n_;
    Eigen::MatrixXd q_;
};

// K two-mode squeezers: modes 0..K-1 carry the signal side, K..2K-1 the
// idler side, pair k squeezed by r_k.
GaussianState tmsv_state(const std::vector<double>& squeezing);

struct DetectorLayout {
    std::vector<std::vector<int>> detector_modes;
    int n_detectors() const { return static_cast<int>(detector_modes.size()); }
};

// Probability that exactly the detectors in clicked_mask fire (bit d set
// means detector d clicked) and the rest stay silent.
double pattern_probability(const GaussianState& s, const DetectorLayout& layout,
                           unsigned clicked_mask);
// All 2^D patterns, indexed by mask; sums to one.
std::vector<double> all_pattern_probabilities(const GaussianState& s,
                                              const DetectorLayout& layout);

// Pair source with per-arm transmission. With split_arms each arm feeds a
// balanced splitter onto two detectors, giving the order
// (signal_a, signal_b, idler_a, idler_b); otherwise (signal, idler).
struct ClickModel {
    GaussianState state;
    DetectorLayout layout;
};
ClickModel lossy_pair_model(const std::vector<double>& squeezing, double eta_signal,
                            double eta_idler, bool split_arms);

struct ClickStats {
    long long shots = 0;
    std::vector<long long> pattern_counts;  // indexed by clicked mask

    int n_detectors() const;
    long long singles(int detector) const;
    long long coincidences(int det_a, int det_b) const;
};
// Multinomial draw over patterns, one counter per shot, reproducible.
ClickStats sample_click_stats(const std::vector<double>& probabilities, long long shots,
                              std::uint64_t seed, std::uint64_t stream);

struct GainEstimate {
    double gain = 0.0;
    double residual = 0.0;   // root of the summed squared frequency misfit
    bool all_silent = false; // nothing but the empty pattern was observed
};
// Least-squares match of observed pattern frequencies against the one-pair
// model above, scanned over the gain on [0, 5]. The misfit is unimodal in
// the gain because every pattern probability varies monotonically with it.
GainEstimate estimate_gain(const std::vector<double>& observed_frequencies,
                           double eta_signal, double eta_idler, bool split_arms);

struct KlyshkoEstimate {
    double eta_signal = 0.0;
    double eta_idler = 0.0;
    // Set when click rates imply a mean occupation above 0.1 per arm, where
    // multi-pair emission inflates the ratio estimate.
    bool high_gain_bias = false;
};
// Heralding efficiencies from raw tallies: eta_idler = C / S_signal and
// vice versa, exact in the low-gain limit.
KlyshkoEstimate klyshko_efficiency(double singles_signal, double singles_idler,
                                   double coincidences, double shots);
KlyshkoEstimate klyshko_efficiency(const ClickStats& stats, int det_signal, int det_idler);

}  // namespace spdc
