#pragma once

#include <span>
#include <vector>

#include "anyon/grid.hpp"

namespace anyon {

/// 2D complex FFT on an n x n array (FFTW backend).
///
/// Forward uses e^{-ik.x} and no scaling; inverse includes the 1/n^2.
/// Plans are created once per n under a lock and then only executed, which
/// FFTW allows from several threads at once.
class Fft2D {
public:
    static const Fft2D& get(int n);

    void forward(std::span<const cplx> in, std::span<cplx> out) const;
    void inverse(std::span<const cplx> in, std::span<cplx> out) const;

    std::vector<cplx> forward(std::span<const cplx> in) const;
    std::vector<cplx> inverse(std::span<const cplx> in) const;
    std::vector<cplx> forward_real(std::span<const double> in) const;

    int n() const { return n_; }

    ~Fft2D();
    Fft2D(const Fft2D&) = delete;
    Fft2D& operator=(const Fft2D&) = delete;

private:
    explicit Fft2D(int n);
    int n_;
    void* forward_plan_ = nullptr;
    void* inverse_plan_ = nullptr;
};

} // namespace anyon
