#include "anyon/random_fields.hpp"

#include <random>

#include "anyon/fft.hpp"
#include "anyon/field_ops.hpp"

namespace anyon {

ComplexField random_complex_field(const Grid2D& g, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexField u(g);
    for (auto& v : u.values) {
        const double re = normal(rng);
        const double im = normal(rng);
        v = {re, im};
    }
    return normalize(u);
}

ComplexField smooth_random_field(const Grid2D& g, std::uint64_t seed, double envelope_width, double k_width) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<cplx> spec(g.size());
    for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n; ++mx) {
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            const double damp = std::exp(-(kx * kx + ky * ky) / (2.0 * k_width * k_width));
            const double re = normal(rng);
            const double im = normal(rng);
            spec[g.index(mx, my)] = damp * cplx{re, im};
        }
    ComplexField u(g);
    Fft2D::get(g.n).inverse(spec, u.values);
    const double w2 = envelope_width * envelope_width;
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            u.at(ix, iy) *= std::exp(-(x * x + y * y) / (2.0 * w2));
        }
    return normalize(u);
}

ComplexField gaussian_packet(const Grid2D& g, double cx, double cy, double width, double kx, double ky) {
    const double w2 = width * width;
    auto u = sample<cplx>(g, [&](double x, double y) {
        const double r2 = (x - cx) * (x - cx) + (y - cy) * (y - cy);
        return std::exp(-r2 / (2.0 * w2)) * std::polar(1.0, kx * x + ky * y);
    });
    return normalize(u);
}

} // namespace anyon
