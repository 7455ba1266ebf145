#include "spdc/analysis.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "spdc/errors.hpp"
#include "spdc/fft.hpp"
#include "spdc/units.hpp"

namespace spdc {

namespace {

double axis_step_ghz(const std::vector<double>& axis) {
    if (axis.size() < 2) throw data_error("histogram axis needs at least 2 bins");
    const double step = axis[1] - axis[0];
    if (step <= 0.0) throw data_error("histogram axis must be increasing");
    for (std::size_t k = 1; k < axis.size(); ++k) {
        if (std::abs(axis[k] - axis[k - 1] - step) > 1e-9 * step)
            throw data_error("histogram axis must be uniform");
    }
    return step;
}

// Conjugate-axis coordinate of FFT bin k, wrapped to the centered interval.
double fft_time(int k, int nfft, double dt) {
    const int kk = (k <= nfft / 2) ? k : k - nfft;
    return kk * dt;
}

// Fractional-bin offset from a three-point parabola on log magnitude.
double parabolic_offset(double lo, double mid, double hi) {
    const double denom = lo - 2.0 * mid + hi;
    if (std::abs(denom) < 1e-300) return 0.0;
    double d = 0.5 * (lo - hi) / denom;
    return std::clamp(d, -0.5, 0.5);
}

}  // namespace

DelayEstimate extract_delay_fft(const Interferogram& histogram, double delay_offset_ps) {
    const auto& dens = histogram.density;
    const int n1 = static_cast<int>(dens.rows());
    const int n2 = static_cast<int>(dens.cols());
    if (n1 < 4 || n2 < 4) throw data_error("histogram too small for sideband extraction");
    if (static_cast<int>(histogram.axis1_ghz.size()) != n1 ||
        static_cast<int>(histogram.axis2_ghz.size()) != n2)
        throw data_error("histogram axes do not match density shape");

    const double dw1 = units::ghz_to_rad_per_ps(axis_step_ghz(histogram.axis1_ghz));
    const double dw2 = units::ghz_to_rad_per_ps(axis_step_ghz(histogram.axis2_ghz));

    // Rank-1 background: the marginal product reproduces any separable
    // envelope exactly, fringe-free data included. Subtracting just the mean
    // is not enough here: the envelope transform decays over about one
    // conjugate bin, and its shoulder outside the DC mask can top the
    // sideband, which only carries a V/2 share of the counts.
    const Eigen::VectorXd r1 = dens.rowwise().sum();
    const Eigen::VectorXd r2 = dens.colwise().sum().transpose();
    const double total = r1.sum();
    if (!(std::abs(total) > 0.0)) throw data_error("histogram is empty");
    const int nf1 = next_pow2(4 * n1);
    const int nf2 = next_pow2(4 * n2);
    Fft2D fft(nf1, nf2);
    fft.fill(std::complex<double>(0.0, 0.0));
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) fft.at(a, b) = dens(a, b) - r1(a) * r2(b) / total;
    fft.forward();

    const double dt1 = 2.0 * std::numbers::pi / (nf1 * dw1);
    const double dt2 = 2.0 * std::numbers::pi / (nf2 * dw2);
    const double bin1 = 2.0 * std::numbers::pi / (n1 * dw1);  // unpadded resolution
    const double bin2 = 2.0 * std::numbers::pi / (n2 * dw2);
    const double r_excl = 2.0 * std::max(bin1, bin2);

    // The fringe depends on w1 - w2 only, so its sidebands sit on the
    // anti-diagonal t2 = -t1; by Hermitian symmetry the t1 > 0 half-line
    // carries both. The envelope transform decays monotonically from DC,
    // which makes its shoulder at the mask edge a boundary extremum, not a
    // peak: only interior local maxima qualify as sidebands.
    const int smax = static_cast<int>(std::min(nf1 / 2.0, (nf2 / 2.0) * dt2 / dt1));
    std::vector<double> line(static_cast<std::size_t>(smax) + 1);
    for (int s = 0; s <= smax; ++s) {
        const int k2 = (nf2 - static_cast<int>(std::lround(s * dt1 / dt2))) % nf2;
        line[static_cast<std::size_t>(s)] = std::abs(fft.at(s % nf1, k2));
    }

    double best = -1.0;
    int bs = -1;
    std::vector<double> mags;
    mags.reserve(line.size());
    for (int s = 1; s < smax; ++s) {
        if (2.0 * s * dt1 < r_excl) continue;
        const double m = line[static_cast<std::size_t>(s)];
        mags.push_back(m);
        if (m > line[static_cast<std::size_t>(s) - 1] && m >= line[static_cast<std::size_t>(s) + 1] && m > best) {
            best = m;
            bs = s;
        }
    }
    if (mags.empty()) throw data_error("histogram support excluded entirely by DC mask");
    std::nth_element(mags.begin(), mags.begin() + mags.size() / 2, mags.end());
    const double median = mags[mags.size() / 2];
    const double significance = best / std::max(median, 1e-300);
    if (bs < 0 || best <= 1e-12 * dens.cwiseAbs().sum() || significance < 5.0)
        throw data_error("no interference sideband above the noise floor");
    const int bk1 = bs % nf1;
    const int bk2 = (nf2 - static_cast<int>(std::lround(bs * dt1 / dt2))) % nf2;

    // Separable parabolic refinement on log magnitude with wrapped neighbors.
    auto logmag = [&](int k1, int k2) {
        const double m = std::abs(fft.at((k1 + nf1) % nf1, (k2 + nf2) % nf2));
        return std::log(std::max(m, 1e-300));
    };
    const double d1 = parabolic_offset(logmag(bk1 - 1, bk2), logmag(bk1, bk2), logmag(bk1 + 1, bk2));
    const double d2 = parabolic_offset(logmag(bk1, bk2 - 1), logmag(bk1, bk2), logmag(bk1, bk2 + 1));
    const double t1 = fft_time(bk1, nf1, dt1) + d1 * dt1;
    const double t2 = fft_time(bk2, nf2, dt2) + d2 * dt2;

    DelayEstimate est;
    est.sideband_t1_ps = t1;
    est.sideband_t2_ps = t2;
    est.raw_separation_ps = std::abs(t1 - t2);
    est.antidiag_offset_ps = std::abs(t1 + t2);
    est.delay_ps = est.raw_separation_ps - delay_offset_ps;
    est.uncertainty_ps = 0.5 * std::max(bin1, bin2);
    est.peak_to_median = significance;
    return est;
}

PhaseSlopeEstimate extract_delay_phase(const JsaGrid& lab_jsa, double amp_threshold_frac) {
    const auto& amp = lab_jsa.amp;
    const int ns = static_cast<int>(amp.rows());
    const int ni = static_cast<int>(amp.cols());
    if (ns < 3 || ni < 3) throw data_error("joint amplitude too small for a phase slope");
    const double dws = lab_jsa.grid_signal.spacing();
    const double dwi = lab_jsa.grid_idler.spacing();
    if (std::abs(dws - dwi) > 1e-9 * dws)
        throw data_error("phase slope needs matching signal and idler spacings");

    const double peak = amp.cwiseAbs().maxCoeff();
    if (peak <= 0.0) throw data_error("joint amplitude is identically zero");
    const double thresh = amp_threshold_frac * peak;

    // Step (is,ii) -> (is+1,ii-1) advances x = (w_s - w_i)/2 by the grid
    // spacing; the product J(next) conj(J(here)) carries exp(i dtheta).
    double wsum = 0.0, wsum_all = 0.0, acc = 0.0;
    int used = 0;
    for (int is = 0; is + 1 < ns; ++is) {
        for (int ii = 1; ii < ni; ++ii) {
            const std::complex<double> a = amp(is, ii);
            const std::complex<double> b = amp(is + 1, ii - 1);
            const double w = std::abs(a) * std::abs(b);
            wsum_all += w;
            if (std::abs(a) < thresh || std::abs(b) < thresh) continue;
            acc += w * std::arg(b * std::conj(a));
            wsum += w;
            ++used;
        }
    }
    if (used < 10 || wsum <= 0.0)
        throw data_error("too few pixels above threshold for a phase slope");

    PhaseSlopeEstimate est;
    est.slope = acc / (wsum * dws);
    est.delay_ps = -est.slope;
    est.n_pairs = used;
    est.weight_fraction = wsum_all > 0.0 ? wsum / wsum_all : 0.0;
    return est;
}

VisibilityFit fit_visibility(const Interferogram& histogram, double fringe_delay_ps) {
    const auto& dens = histogram.density;
    const int n1 = static_cast<int>(dens.rows());
    const int n2 = static_cast<int>(dens.cols());
    if (n1 < 2 || n2 < 2) throw data_error("histogram too small for a visibility fit");
    if ((dens.array() < 0.0).any()) throw data_error("histogram has negative entries");

    const Eigen::VectorXd m1 = dens.rowwise().sum();
    const Eigen::VectorXd m2 = dens.colwise().sum().transpose();
    const double total = m1.sum();
    if (total <= 0.0) throw data_error("histogram is empty");

    Eigen::MatrixXd cosf(n1, n2);
    for (int a = 0; a < n1; ++a) {
        const double w1 = units::ghz_to_rad_per_ps(histogram.axis1_ghz[a]);
        for (int b = 0; b < n2; ++b) {
            const double w2 = units::ghz_to_rad_per_ps(histogram.axis2_ghz[b]);
            cosf(a, b) = std::cos(0.5 * fringe_delay_ps * (w1 - w2));
        }
    }

    // Raw marginals of u_a v_b (1 - V c_ab) carry a damped copy of the
    // fringe, which leaks into a marginal-product envelope and biases the
    // fitted visibility high. Alternate the least-squares solve with
    // re-deriving the envelope factors from the fitted fringe: the model row
    // sums are u_a sum_b v_b (1 - V c_ab), so dividing them out converges to
    // the fringe-free marginals.
    Eigen::VectorXd u = m1 / total, v = m2 / total;
    Eigen::MatrixXd env;
    double alpha = 0.0, beta = 0.0;
    for (int round = 0; round < 8; ++round) {
        env = total * (u * v.transpose());
        double suu = 0.0, suv = 0.0, svv = 0.0, sun = 0.0, svn = 0.0;
        for (int a = 0; a < n1; ++a)
            for (int b = 0; b < n2; ++b) {
                const double e = env(a, b);
                if (e <= 0.0) continue;
                const double c = cosf(a, b);
                const double w = 1.0 / std::max(e, 1.0);  // ~1/variance for Poisson counts
                suu += w * e * e;
                suv += w * e * (-e * c);
                svv += w * e * e * c * c;
                sun += w * e * dens(a, b);
                svn += w * (-e * c) * dens(a, b);
            }
        const double det = suu * svv - suv * suv;
        if (std::abs(det) < 1e-300) throw numeric_error("degenerate visibility fit");
        alpha = (svv * sun - suv * svn) / det;
        beta = (suu * svn - suv * sun) / det;
        if (alpha <= 0.0) throw numeric_error("visibility fit found a non-positive envelope scale");

        const double vc = std::clamp(beta / alpha, 0.0, 0.999);
        Eigen::VectorXd unew(n1), vnew(n2);
        for (int a = 0; a < n1; ++a) {
            double den = 0.0;
            for (int b = 0; b < n2; ++b) den += v(b) * (1.0 - vc * cosf(a, b));
            unew(a) = den > 0.0 ? m1(a) / den : 0.0;
        }
        const double us = unew.sum();
        if (us > 0.0) unew /= us;
        for (int b = 0; b < n2; ++b) {
            double den = 0.0;
            for (int a = 0; a < n1; ++a) den += unew(a) * (1.0 - vc * cosf(a, b));
            vnew(b) = den > 0.0 ? m2(b) / den : 0.0;
        }
        const double vs = vnew.sum();
        if (vs > 0.0) vnew /= vs;
        u = std::move(unew);
        v = std::move(vnew);
    }

    double ss = 0.0, sw = 0.0;
    for (int a = 0; a < n1; ++a)
        for (int b = 0; b < n2; ++b) {
            const double e = env(a, b);
            if (e <= 0.0) continue;
            const double r = dens(a, b) - e * (alpha - beta * cosf(a, b));
            const double w = 1.0 / std::max(e, 1.0);
            ss += w * r * r;
            sw += w;
        }

    VisibilityFit fit;
    fit.visibility = beta / alpha;
    fit.amplitude = alpha;
    fit.rms_residual = std::sqrt(ss / std::max(sw, 1e-300));
    fit.fringe_delay_ps = fringe_delay_ps;
    return fit;
}

SchmidtDiagnostics schmidt_diagnostics(const JsaGrid& j) {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(j.amp);
    const Eigen::VectorXd sv = svd.singularValues();
    const double s2 = sv.squaredNorm();
    if (s2 <= 0.0) throw data_error("joint amplitude is identically zero");

    SchmidtDiagnostics d;
    d.weights.resize(static_cast<std::size_t>(sv.size()));
    double s4 = 0.0;
    for (int k = 0; k < sv.size(); ++k) {
        const double lam = sv[k] * sv[k] / s2;
        d.weights[static_cast<std::size_t>(k)] = lam;
        s4 += lam * lam;
    }
    d.schmidt_number = 1.0 / s4;
    return d;
}

}  // namespace spdc
