#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <vector>

#include "anyon/errors.hpp"

namespace anyon {

using cplx = std::complex<double>;

/// Periodic square box [-L/2, L/2)^2 sampled on an n x n uniform grid.
///
/// Samples are stored row-major with rows along y: the sample at
/// (x_ix, y_iy) lives at index iy * n + ix. The wavevector attached to
/// FFT index m is 2*pi*m'/L with m' = m for m < n/2 and m - n otherwise.
struct Grid2D {
    double L = 16.0;
    int n = 128;

    Grid2D() = default;
    Grid2D(double side, int points) : L(side), n(points) { validate(); }

    void validate() const {
        if (!(L > 0.0) || !std::isfinite(L))
            throw PreconditionError("Grid2D: side length must be positive, got " + std::to_string(L));
        if (n < 8 || n % 2 != 0)
            throw PreconditionError("Grid2D: points per side must be even and >= 8, got " + std::to_string(n));
    }

    double spacing() const { return L / n; }
    double cell_area() const { return spacing() * spacing(); }
    std::size_t size() const { return static_cast<std::size_t>(n) * static_cast<std::size_t>(n); }
    std::size_t index(int ix, int iy) const { return static_cast<std::size_t>(iy) * n + ix; }

    double coord(int i) const { return -0.5 * L + i * spacing(); }

    // Signed lattice index for FFT slot m.
    int signed_mode(int m) const { return m < n / 2 ? m : m - n; }
    double wavenumber(int m) const { return 2.0 * std::numbers::pi * signed_mode(m) / L; }
    // Same as wavenumber() but zero at the unpaired Nyquist slot; used for odd multipliers.
    double odd_wavenumber(int m) const { return m == n / 2 ? 0.0 : wavenumber(m); }
    bool is_nyquist(int m) const { return m == n / 2; }

    // Largest kinetic energy below which computed eigenvalues are trusted.
    double reliable_energy() const {
        const double kmax = std::numbers::pi * n / L;
        return 0.25 * kmax * kmax;
    }

    bool operator==(const Grid2D& o) const { return L == o.L && n == o.n; }
};

template <class T>
struct Field {
    Grid2D grid;
    std::vector<T> values;

    Field() = default;
    explicit Field(const Grid2D& g, T fill = T{}) : grid(g), values(g.size(), fill) {}
    Field(const Grid2D& g, std::vector<T> v) : grid(g), values(std::move(v)) {
        if (values.size() != grid.size())
            throw ShapeError("Field: sample count does not match grid");
    }

    T& operator[](std::size_t i) { return values[i]; }
    const T& operator[](std::size_t i) const { return values[i]; }
    T& at(int ix, int iy) { return values[grid.index(ix, iy)]; }
    const T& at(int ix, int iy) const { return values[grid.index(ix, iy)]; }
    std::size_t size() const { return values.size(); }
};

using ComplexField = Field<cplx>;
using RealField = Field<double>;

/// Real 2-component field (gauge potentials, currents).
struct VectorField2 {
    Grid2D grid;
    std::vector<double> x;
    std::vector<double> y;

    VectorField2() = default;
    explicit VectorField2(const Grid2D& g) : grid(g), x(g.size(), 0.0), y(g.size(), 0.0) {}
    std::size_t size() const { return x.size(); }
};

/// Complex 2-component field, e.g. the covariant derivative (D_x u, D_y u).
struct ComplexPair {
    ComplexField x;
    ComplexField y;
};

inline void require_same_grid(const Grid2D& a, const Grid2D& b, const char* what) {
    if (!(a == b))
        throw ShapeError(std::string(what) + ": fields live on different grids");
}

// Fill a field by evaluating f(x, y) at every sample.
template <class T, class F>
Field<T> sample(const Grid2D& g, F&& f) {
    Field<T> out(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix)
            out.at(ix, iy) = f(g.coord(ix), g.coord(iy));
    return out;
}

} // namespace anyon
