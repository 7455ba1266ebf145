#include "spdc/fft.hpp"

#include <fftw3.h>

#include "spdc/errors.hpp"

namespace spdc {

Fft1D::Fft1D(int n) : n_(n) {
    if (n < 2) throw numeric_error("FFT size must be >= 2");
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * static_cast<size_t>(n)));
    if (!buf_) throw numeric_error("FFT buffer allocation failed");
    auto* fb = reinterpret_cast<fftw_complex*>(buf_);
    plan_fwd_ = fftw_plan_dft_1d(n, fb, fb, FFTW_FORWARD, FFTW_ESTIMATE);
    plan_inv_ = fftw_plan_dft_1d(n, fb, fb, FFTW_BACKWARD, FFTW_ESTIMATE);
    if (!plan_fwd_ || !plan_inv_) throw numeric_error("FFTW plan creation failed");
}

Fft1D::~Fft1D() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inv_));
    fftw_free(buf_);
}

void Fft1D::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }
void Fft1D::inverse() { fftw_execute(static_cast<fftw_plan>(plan_inv_)); }

Fft2D::Fft2D(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 2 || cols < 2) throw numeric_error("2-D FFT needs at least 2x2");
    const size_t n = static_cast<size_t>(rows) * static_cast<size_t>(cols);
    buf_ = reinterpret_cast<std::complex<double>*>(fftw_malloc(sizeof(fftw_complex) * n));
    if (!buf_) throw numeric_error("FFT buffer allocation failed");
    auto* fb = reinterpret_cast<fftw_complex*>(buf_);
    plan_fwd_ = fftw_plan_dft_2d(rows, cols, fb, fb, FFTW_FORWARD, FFTW_ESTIMATE);
    if (!plan_fwd_) throw numeric_error("FFTW plan creation failed");
}

Fft2D::~Fft2D() {
    fftw_destroy_plan(static_cast<fftw_plan>(plan_fwd_));
    fftw_free(buf_);
}

void Fft2D::fill(std::complex<double> v) {
    const size_t n = static_cast<size_t>(rows_) * static_cast<size_t>(cols_);
    for (size_t i = 0; i < n; ++i) buf_[i] = v;
}

void Fft2D::forward() { fftw_execute(static_cast<fftw_plan>(plan_fwd_)); }

int next_pow2(int n) {
    int p = 1;
    while (p < n) p <<= 1;
    return p;
}

}  // namespace spdc
