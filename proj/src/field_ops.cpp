#include "anyon/field_ops.hpp"

#include <algorithm>

#include "anyon/fft.hpp"

namespace anyon {

cplx inner_product(const ComplexField& f, const ComplexField& g) {
    require_same_grid(f.grid, g.grid, "inner_product");
    cplx acc{0.0, 0.0};
    for (std::size_t i = 0; i < f.size(); ++i) acc += std::conj(f[i]) * g[i];
    return acc * f.grid.cell_area();
}

double norm(const ComplexField& f) {
    double acc = 0.0;
    for (const auto& v : f.values) acc += std::norm(v);
    return std::sqrt(acc * f.grid.cell_area());
}

double integrate(const RealField& f) {
    double acc = 0.0;
    for (double v : f.values) acc += v;
    return acc * f.grid.cell_area();
}

ComplexField normalize(const ComplexField& u) {
    const double nu = norm(u);
    if (!(nu > 0.0) || !std::isfinite(nu))
        throw DomainError("normalize: field has zero or non-finite norm");
    ComplexField out = u;
    for (auto& v : out.values) v /= nu;
    return out;
}

ComplexPair spectral_gradient(const ComplexField& f) {
    const Grid2D& g = f.grid;
    const auto& fft = Fft2D::get(g.n);
    const auto fhat = fft.forward(f.values);
    ComplexPair out{ComplexField(g), ComplexField(g)};
    std::vector<cplx> tx(fhat.size()), ty(fhat.size());
    for (int my = 0; my < g.n; ++my) {
        const double ky = g.odd_wavenumber(my);
        for (int mx = 0; mx < g.n; ++mx) {
            const double kx = g.odd_wavenumber(mx);
            const std::size_t i = g.index(mx, my);
            tx[i] = kx * fhat[i];
            ty[i] = ky * fhat[i];
        }
    }
    fft.inverse(tx, out.x.values);
    fft.inverse(ty, out.y.values);
    return out;
}

ComplexPair covariant_derivative(const ComplexField& u, const VectorField2& A) {
    require_same_grid(u.grid, A.grid, "covariant_derivative");
    ComplexPair d = spectral_gradient(u);
    for (std::size_t i = 0; i < u.size(); ++i) {
        d.x[i] += A.x[i] * u[i];
        d.y[i] += A.y[i] * u[i];
    }
    return d;
}

ComplexField magnetic_laplacian(const ComplexField& u, const VectorField2& A) {
    const ComplexPair d = covariant_derivative(u, A);
    const ComplexPair dx = covariant_derivative(d.x, A);
    const ComplexPair dy = covariant_derivative(d.y, A);
    ComplexField out(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) out[i] = dx.x[i] + dy.y[i];
    return out;
}

namespace {
// i k . F or i k x F in Fourier space, returned in real space.
RealField first_order_combination(const VectorField2& F, bool curl) {
    const Grid2D& g = F.grid;
    const auto& fft = Fft2D::get(g.n);
    const auto fx = fft.forward_real(F.x);
    const auto fy = fft.forward_real(F.y);
    std::vector<cplx> t(fx.size());
    const cplx I{0.0, 1.0};
    for (int my = 0; my < g.n; ++my) {
        const double ky = g.odd_wavenumber(my);
        for (int mx = 0; mx < g.n; ++mx) {
            const double kx = g.odd_wavenumber(mx);
            const std::size_t i = g.index(mx, my);
            t[i] = curl ? I * (kx * fy[i] - ky * fx[i]) : I * (kx * fx[i] + ky * fy[i]);
        }
    }
    const auto back = fft.inverse(t);
    RealField out(g);
    for (std::size_t i = 0; i < back.size(); ++i) out[i] = back[i].real();
    return out;
}
} // namespace

RealField spectral_divergence(const VectorField2& F) { return first_order_combination(F, false); }
RealField spectral_curl(const VectorField2& F) { return first_order_combination(F, true); }

RealField density(const ComplexField& u) {
    RealField rho(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) rho[i] = std::norm(u[i]);
    return rho;
}

ComplexField dealias(const ComplexField& u) {
    const Grid2D& g = u.grid;
    const auto& fft = Fft2D::get(g.n);
    auto uhat = fft.forward(u.values);
    const int cut = g.n / 3;
    for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n; ++mx)
            if (std::abs(g.signed_mode(mx)) > cut || std::abs(g.signed_mode(my)) > cut)
                uhat[g.index(mx, my)] = 0.0;
    ComplexField out(g);
    fft.inverse(uhat, out.values);
    return out;
}

ComplexField fourier_interpolate(const ComplexField& u, int n_fine) {
    const Grid2D& g = u.grid;
    if (n_fine < g.n || n_fine % 2 != 0)
        throw PreconditionError("fourier_interpolate: target size must be even and >= the source size");
    const Grid2D fine(g.L, n_fine);
    const auto uhat = Fft2D::get(g.n).forward(u.values);
    std::vector<cplx> big(fine.size(), cplx{});
    const double scale = static_cast<double>(n_fine) * n_fine / (static_cast<double>(g.n) * g.n);
    auto slot = [&](int m) { return m >= 0 ? m : m + n_fine; };
    for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n; ++mx) {
            const int sx = g.signed_mode(mx), sy = g.signed_mode(my);
            const cplx c = scale * uhat[g.index(mx, my)];
            // The unpaired Nyquist coefficient is split evenly between +-n/2.
            const bool nx = g.is_nyquist(mx) && n_fine > g.n, ny = g.is_nyquist(my) && n_fine > g.n;
            const double wx = nx ? 0.5 : 1.0, wy = ny ? 0.5 : 1.0;
            for (int ax = 0; ax < (nx ? 2 : 1); ++ax)
                for (int ay = 0; ay < (ny ? 2 : 1); ++ay) {
                    const int tx = ax ? -sx : sx, ty = ay ? -sy : sy;
                    big[fine.index(slot(tx), slot(ty))] += wx * wy * c;
                }
        }
    ComplexField out(fine);
    Fft2D::get(n_fine).inverse(big, out.values);
    return out;
}

ComplexField operator+(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid, b.grid, "operator+");
    ComplexField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
    return out;
}

ComplexField operator-(const ComplexField& a, const ComplexField& b) {
    require_same_grid(a.grid, b.grid, "operator-");
    ComplexField out = a;
    for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
    return out;
}

ComplexField operator*(cplx s, const ComplexField& a) {
    ComplexField out = a;
    for (auto& v : out.values) v *= s;
    return out;
}

VectorField2 operator+(const VectorField2& a, const VectorField2& b) {
    require_same_grid(a.grid, b.grid, "operator+");
    VectorField2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.x[i] += b.x[i];
        out.y[i] += b.y[i];
    }
    return out;
}

VectorField2 operator*(double s, const VectorField2& a) {
    VectorField2 out = a;
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.x[i] *= s;
        out.y[i] *= s;
    }
    return out;
}

double sup_norm(const ComplexField& f) {
    double m = 0.0;
    for (const auto& v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const RealField& f) {
    double m = 0.0;
    for (double v : f.values) m = std::max(m, std::abs(v));
    return m;
}

double sup_norm(const VectorField2& F) {
    double m = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) m = std::max(m, std::hypot(F.x[i], F.y[i]));
    return m;
}

} // namespace anyon
