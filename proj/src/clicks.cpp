#include "spdc/clicks.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numbers>
#include <numeric>

#include "spdc/errors.hpp"
#include "spdc/rng.hpp"

namespace spdc {

GaussianState::GaussianState(int n_modes) : n_(n_modes) {
    if (n_modes <= 0) throw config_error("gaussian state needs at least one mode");
    q_ = Eigen::MatrixXd::Identity(2 * n_, 2 * n_);
}

void GaussianState::validate() const {
    const double scale = std::max(1.0, q_.cwiseAbs().maxCoeff());
    if ((q_ - q_.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale)
        throw numeric_error("husimi covariance lost symmetry");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(q_, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < 0.5 * (1.0 - 1e-9))
        throw numeric_error("husimi covariance dropped below the vacuum floor");
}

void GaussianState::apply_loss(int mode, double transmissivity) {
    if (mode < 0 || mode >= n_) throw config_error("loss applied to a mode outside the state");
    if (transmissivity < 0.0 || transmissivity > 1.0)
        throw config_error("transmissivity must lie in [0, 1]");
    const double t = std::sqrt(transmissivity);
    const int ix = index_x(mode), ip = index_p(mode);
    q_.row(ix) *= t;
    q_.row(ip) *= t;
    q_.col(ix) *= t;
    q_.col(ip) *= t;
    q_(ix, ix) += 1.0 - transmissivity;
    q_(ip, ip) += 1.0 - transmissivity;
}

void GaussianState::beamsplit(int mode_a, int mode_b, double theta) {
    if (mode_a < 0 || mode_a >= n_ || mode_b < 0 || mode_b >= n_ || mode_a == mode_b)
        throw config_error("beamsplitter needs two distinct modes inside the state");
    const double c = std::cos(theta), s = std::sin(theta);
    auto rotate = [&](int i, int j) {
        const Eigen::RowVectorXd ri = q_.row(i), rj = q_.row(j);
        q_.row(i) = c * ri + s * rj;
        q_.row(j) = -s * ri + c * rj;
        const Eigen::VectorXd ci = q_.col(i), cj = q_.col(j);
        q_.col(i) = c * ci + s * cj;
        q_.col(j) = -s * ci + c * cj;
    };
    rotate(index_x(mode_a), index_x(mode_b));
    rotate(index_p(mode_a), index_p(mode_b));
}

GaussianState GaussianState::with_vacuum_ancillas(int extra) const {
    if (extra < 0) throw config_error("ancilla count must be non-negative");
    GaussianState out(n_ + extra);
    const int m = n_ + extra;
    out.q_.block(0, 0, n_, n_) = q_.block(0, 0, n_, n_);          // xx
    out.q_.block(0, m, n_, n_) = q_.block(0, n_, n_, n_);         // xp
    out.q_.block(m, 0, n_, n_) = q_.block(n_, 0, n_, n_);         // px
    out.q_.block(m, m, n_, n_) = q_.block(n_, n_, n_, n_);        // pp
    return out;
}

double GaussianState::mean_photons(int mode) const {
    if (mode < 0 || mode >= n_) throw config_error("mode outside the state");
    return 0.5 * (q_(index_x(mode), index_x(mode)) + q_(index_p(mode), index_p(mode))) - 1.0;
}

double GaussianState::total_photons() const {
    double sum = 0.0;
    for (int m = 0; m < n_; ++m) sum += mean_photons(m);
    return sum;
}

double GaussianState::vacuum_probability(const std::vector<int>& modes) const {
    if (modes.empty()) return 1.0;
    std::vector<char> seen(static_cast<std::size_t>(n_), 0);
    std::vector<int> idx;
    idx.reserve(2 * modes.size());
    for (int m : modes) {
        if (m < 0 || m >= n_) throw config_error("vacuum probability asked for a missing mode");
        if (seen[static_cast<std::size_t>(m)]) throw config_error("mode listed twice");
        seen[static_cast<std::size_t>(m)] = 1;
    }
    for (int m : modes) idx.push_back(index_x(m));
    for (int m : modes) idx.push_back(index_p(m));

    const int k = static_cast<int>(idx.size());
    Eigen::MatrixXd sub(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) sub(i, j) = q_(idx[static_cast<std::size_t>(i)], idx[static_cast<std::size_t>(j)]);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues().minCoeff();
    const double hi = es.eigenvalues().maxCoeff();
    if (lo <= 0.0 || hi / lo > 1e12)
        throw numeric_error("vacuum overlap is ill-conditioned");
    double logdet = 0.0;
    for (int i = 0; i < k; ++i) logdet += std::log(es.eigenvalues()[i]);
    return std::exp(-0.5 * logdet);
}

GaussianState tmsv_state(const std::vector<double>& squeezing) {
    const int kpairs = static_cast<int>(squeezing.size());
    if (kpairs == 0) throw config_error("squeezer list is empty");
    GaussianState st(2 * kpairs);
    auto& q = st.husimi();
    const int n = st.n_modes();
    for (int k = 0; k < kpairs; ++k) {
        const double ch = std::cosh(2.0 * squeezing[static_cast<std::size_t>(k)]);
        const double sh = std::sinh(2.0 * squeezing[static_cast<std::size_t>(k)]);
        const int s = k, i = kpairs + k;
        q(s, s) = q(i, i) = 0.5 * (ch + 1.0);
        q(s, i) = q(i, s) = 0.5 * sh;
        q(n + s, n + s) = q(n + i, n + i) = 0.5 * (ch + 1.0);
        q(n + s, n + i) = q(n + i, n + s) = -0.5 * sh;
    }
    return st;
}

namespace {

std::vector<int> gather_modes(const DetectorLayout& layout, unsigned detector_mask) {
    std::vector<int> modes;
    for (int d = 0; d < layout.n_detectors(); ++d) {
        if (!(detector_mask >> d & 1u)) continue;
        const auto& dm = layout.detector_modes[static_cast<std::size_t>(d)];
        modes.insert(modes.end(), dm.begin(), dm.end());
    }
    return modes;
}

void check_layout(const GaussianState& s, const DetectorLayout& layout) {
    if (layout.n_detectors() == 0 || layout.n_detectors() > 20)
        throw config_error("detector layout must hold between 1 and 20 detectors");
    std::vector<char> seen(static_cast<std::size_t>(s.n_modes()), 0);
    for (const auto& dm : layout.detector_modes) {
        if (dm.empty()) throw config_error("every detector needs at least one mode");
        for (int m : dm) {
            if (m < 0 || m >= s.n_modes()) throw config_error("detector watches a missing mode");
            if (seen[static_cast<std::size_t>(m)]) throw config_error("two detectors share a mode");
            seen[static_cast<std::size_t>(m)] = 1;
        }
    }
}

}  // namespace

double pattern_probability(const GaussianState& s, const DetectorLayout& layout,
                           unsigned clicked_mask) {
    check_layout(s, layout);
    const int d = layout.n_detectors();
    const unsigned full = (1u << d) - 1u;
    if (clicked_mask > full) throw config_error("click pattern addresses a missing detector");
    const unsigned silent = full & ~clicked_mask;

    // P(exactly clicked_mask) = sum over subsets S of the clicked set of
    // (-1)^|S| P(no photons reach silent + S).
    double p = 0.0;
    unsigned sub = clicked_mask;
    while (true) {
        const double sign = (std::popcount(sub) % 2 == 0) ? 1.0 : -1.0;
        p += sign * s.vacuum_probability(gather_modes(layout, silent | sub));
        if (sub == 0) break;
        sub = (sub - 1) & clicked_mask;
    }
    return p;
}

std::vector<double> all_pattern_probabilities(const GaussianState& s,
                                              const DetectorLayout& layout) {
    check_layout(s, layout);
    const int d = layout.n_detectors();
    const unsigned full = (1u << d) - 1u;

    std::vector<double> pvac(full + 1u);
    for (unsigned mask = 0; mask <= full; ++mask)
        pvac[mask] = s.vacuum_probability(gather_modes(layout, mask));

    std::vector<double> probs(full + 1u, 0.0);
    for (unsigned clicked = 0; clicked <= full; ++clicked) {
        const unsigned silent = full & ~clicked;
        double p = 0.0;
        unsigned sub = clicked;
        while (true) {
            const double sign = (std::popcount(sub) % 2 == 0) ? 1.0 : -1.0;
            p += sign * pvac[silent | sub];
            if (sub == 0) break;
            sub = (sub - 1) & clicked;
        }
        probs[clicked] = p;
    }
    return probs;
}

ClickModel lossy_pair_model(const std::vector<double>& squeezing, double eta_signal,
                            double eta_idler, bool split_arms) {
    const int kpairs = static_cast<int>(squeezing.size());
    GaussianState st = tmsv_state(squeezing);
    for (int k = 0; k < kpairs; ++k) {
        st.apply_loss(k, eta_signal);
        st.apply_loss(kpairs + k, eta_idler);
    }

    DetectorLayout layout;
    auto range = [](int first, int count) {
        std::vector<int> v(static_cast<std::size_t>(count));
        std::iota(v.begin(), v.end(), first);
        return v;
    };
    if (!split_arms) {
        layout.detector_modes = {range(0, kpairs), range(kpairs, kpairs)};
        return {std::move(st), std::move(layout)};
    }

    st = st.with_vacuum_ancillas(2 * kpairs);
    const double theta = std::numbers::pi / 4.0;
    for (int k = 0; k < kpairs; ++k) {
        st.beamsplit(k, 2 * kpairs + k, theta);          // signal k with its ancilla
        st.beamsplit(kpairs + k, 3 * kpairs + k, theta); // idler k with its ancilla
    }
    layout.detector_modes = {range(0, kpairs), range(2 * kpairs, kpairs),
                             range(kpairs, kpairs), range(3 * kpairs, kpairs)};
    return {std::move(st), std::move(layout)};
}

int ClickStats::n_detectors() const {
    const std::size_t p = pattern_counts.size();
    int d = 0;
    while ((std::size_t{1} << d) < p) ++d;
    return d;
}

long long ClickStats::singles(int detector) const {
    long long sum = 0;
    for (std::size_t mask = 0; mask < pattern_counts.size(); ++mask)
        if (mask >> detector & 1u) sum += pattern_counts[mask];
    return sum;
}

long long ClickStats::coincidences(int det_a, int det_b) const {
    long long sum = 0;
    for (std::size_t mask = 0; mask < pattern_counts.size(); ++mask)
        if ((mask >> det_a & 1u) && (mask >> det_b & 1u)) sum += pattern_counts[mask];
    return sum;
}

ClickStats sample_click_stats(const std::vector<double>& probabilities, long long shots,
                              std::uint64_t seed, std::uint64_t stream) {
    if (probabilities.empty()) throw data_error("pattern distribution is empty");
    if (shots <= 0) throw config_error("shot count must be positive");
    double total = 0.0;
    for (double p : probabilities) {
        if (p < -1e-12) throw data_error("pattern distribution has a negative entry");
        total += std::max(p, 0.0);
    }
    if (total <= 0.0) throw data_error("pattern distribution sums to zero");

    std::vector<double> cdf(probabilities.size());
    double acc = 0.0;
    for (std::size_t k = 0; k < probabilities.size(); ++k) {
        acc += std::max(probabilities[k], 0.0) / total;
        cdf[k] = acc;
    }
    cdf.back() = 1.0;

    ClickStats stats;
    stats.shots = shots;
    stats.pattern_counts.assign(probabilities.size(), 0);
    CounterRng rng(seed, stream);
    for (long long shot = 0; shot < shots; ++shot) {
        const double u = rng.uniform(static_cast<std::uint64_t>(shot));
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        const std::size_t k = std::min<std::size_t>(
            static_cast<std::size_t>(it - cdf.begin()), cdf.size() - 1);
        ++stats.pattern_counts[k];
    }
    return stats;
}

GainEstimate estimate_gain(const std::vector<double>& observed_frequencies,
                           double eta_signal, double eta_idler, bool split_arms) {
    const std::size_t expect = split_arms ? 16 : 4;
    if (observed_frequencies.size() != expect)
        throw data_error("observed frequency vector does not match the detector layout");

    GainEstimate est;
    double clicked_mass = 0.0;
    for (std::size_t k = 1; k < observed_frequencies.size(); ++k)
        clicked_mass += std::max(observed_frequencies[k], 0.0);
    if (clicked_mass <= 0.0) {
        est.all_silent = true;
        return est;
    }

    auto misfit = [&](double gain) {
        const ClickModel model = lossy_pair_model({gain}, eta_signal, eta_idler, split_arms);
        const std::vector<double> probs = all_pattern_probabilities(model.state, model.layout);
        double sse = 0.0;
        for (std::size_t k = 0; k < probs.size(); ++k) {
            const double r = observed_frequencies[k] - probs[k];
            sse += r * r;
        }
        return sse;
    };

    // Golden-section search; see the header note on unimodality.
    double lo = 1e-6, hi = 5.0;
    const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
    double a = hi - inv_phi * (hi - lo);
    double b = lo + inv_phi * (hi - lo);
    double fa = misfit(a), fb = misfit(b);
    for (int it = 0; it < 80; ++it) {
        if (fa < fb) {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = misfit(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = misfit(b);
        }
    }
    est.gain = 0.5 * (lo + hi);
    if (est.gain > 5.0 - 1e-3)
        throw numeric_error("gain estimate ran into the top of the search range");
    est.residual = std::sqrt(misfit(est.gain));
    return est;
}

KlyshkoEstimate klyshko_efficiency(double singles_signal, double singles_idler,
                                   double coincidences, double shots) {
    if (shots <= 0.0) throw config_error("shot count must be positive");
    if (singles_signal <= 0.0 || singles_idler <= 0.0)
        throw data_error("klyshko ratio needs singles on both arms");
    if (coincidences < 0.0) throw data_error("coincidence count must be non-negative");

    KlyshkoEstimate est;
    est.eta_idler = coincidences / singles_signal;
    est.eta_signal = coincidences / singles_idler;
    auto occupation = [&](double singles) {
        const double p = std::min(singles / shots, 1.0 - 1e-12);
        return p / (1.0 - p);  // thermal-marginal inversion of the click rate
    };
    est.high_gain_bias =
        occupation(singles_signal) > 0.1 || occupation(singles_idler) > 0.1;
    return est;
}

KlyshkoEstimate klyshko_efficiency(const ClickStats& stats, int det_signal, int det_idler) {
    const int d = stats.n_detectors();
    if (det_signal < 0 || det_signal >= d || det_idler < 0 || det_idler >= d ||
        det_signal == det_idler)
        throw config_error("klyshko ratio needs two distinct detectors in range");
    return klyshko_efficiency(static_cast<double>(stats.singles(det_signal)),
                              static_cast<double>(stats.singles(det_idler)),
                              static_cast<double>(stats.coincidences(det_signal, det_idler)),
                              static_cast<double>(stats.shots));
}

}  // namespace spdc
