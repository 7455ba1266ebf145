#pragma once

#include <complex>
#include <vector>

namespace spdc {

// Thin RAII wrappers over FFTW c2c plans. Plans are created with
// FFTW_ESTIMATE only: plan choice must be a pure function of the size or
// repeated runs could differ in summation order and break the byte-for-byte
// reproducibility contract of the CLI outputs.

class Fft1D {
  public:
    explicit Fft1D(int n);
    ~Fft1D();
    Fft1D(const Fft1D&) = delete;
    Fft1D& operator=(const Fft1D&) = delete;

    int size() const { return n_; }
    std::complex<double>* buf() { return buf_; }
    void forward();   // in place, e^{-i 2 pi k j / n} convention
    void inverse();   // unnormalized

  private:
    int n_;
    std::complex<double>* buf_;
    void* plan_fwd_;
    void* plan_inv_;
};

class Fft2D {
  public:
    Fft2D(int rows, int cols);
    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    // Row-major element access into the transform buffer.
    std::complex<double>& at(int r, int c) { return buf_[static_cast<size_t>(r) * cols_ + c]; }
    void fill(std::complex<double> v);
    void forward();

  private:
    int rows_, cols_;
    std::complex<double>* buf_;
    void* plan_fwd_;
};

int next_pow2(int n);

}  // namespace spdc
