#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <numbers>

#include "anyon/fft.hpp"
#include "anyon/field_io.hpp"
#include "anyon/field_ops.hpp"
#include "anyon/random_fields.hpp"

using namespace anyon;
using std::numbers::pi;

TEST_CASE("grid rejects odd or tiny sizes") {
    CHECK_THROWS_AS(Grid2D(16.0, 7), PreconditionError);
    CHECK_THROWS_AS(Grid2D(16.0, 6), PreconditionError);
    CHECK_THROWS_AS(Grid2D(-1.0, 32), PreconditionError);
    const Grid2D g(16.0, 32);
    CHECK(g.coord(0) == doctest::Approx(-8.0));
    CHECK(g.signed_mode(31) == -1);
    CHECK(g.odd_wavenumber(16) == 0.0);
}

TEST_CASE("fft matches a direct DFT and round-trips") {
    const int n = 8;
    const Grid2D g(1.0, n);
    const ComplexField f = random_complex_field(g, 3);
    const auto F = Fft2D::get(n).forward(f.values);
    double worst = 0.0;
    for (int my = 0; my < n; ++my)
        for (int mx = 0; mx < n; ++mx) {
            cplx acc{};
            for (int iy = 0; iy < n; ++iy)
                for (int ix = 0; ix < n; ++ix)
                    acc += f.at(ix, iy) * std::polar(1.0, -2 * pi * (mx * ix + my * iy) / n);
            worst = std::max(worst, std::abs(acc - F[static_cast<std::size_t>(my * n + mx)]));
        }
    CHECK(worst < 1e-12);
    const auto back = Fft2D::get(n).inverse(F);
    for (std::size_t i = 0; i < back.size(); ++i) CHECK(std::abs(back[i] - f[i]) < 1e-14);
}

TEST_CASE("spectral gradient is exact on trigonometric polynomials") {
    const Grid2D g(6.0, 32);
    const double k1 = 2 * pi * 3 / g.L, k2 = 2 * pi * 5 / g.L;
    const auto u = sample<cplx>(g, [&](double x, double y) { return cplx(std::sin(k1 * x) * std::cos(k2 * y), std::cos(k2 * x)); });
    const ComplexPair d = spectral_gradient(u);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            const cplx dx(k1 * std::cos(k1 * x) * std::cos(k2 * y), -k2 * std::sin(k2 * x));
            const cplx dy(-k2 * std::sin(k1 * x) * std::sin(k2 * y), 0.0);
            // d holds -i * derivative
            CHECK(std::abs(d.x.at(ix, iy) - cplx(0, -1) * dx) < 1e-11);
            CHECK(std::abs(d.y.at(ix, iy) - cplx(0, -1) * dy) < 1e-11);
        }
}

TEST_CASE("curl and divergence of band-limited fields") {
    const Grid2D g(2 * pi, 32);
    VectorField2 F(g);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            F.x[g.index(ix, iy)] = std::sin(2 * y);
            F.y[g.index(ix, iy)] = std::cos(3 * x) + std::sin(y);
        }
    const RealField c = spectral_curl(F), d = spectral_divergence(F);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) {
            const double x = g.coord(ix), y = g.coord(iy);
            CHECK(c.at(ix, iy) == doctest::Approx(-3 * std::sin(3 * x) - 2 * std::cos(2 * y)).epsilon(1e-10));
            CHECK(std::abs(d.at(ix, iy) - std::cos(y)) < 1e-10);
        }
}

TEST_CASE("magnetic laplacian is the adjoint square of the covariant derivative") {
    const Grid2D g(8.0, 32);
    VectorField2 A(g);
    for (std::size_t i = 0; i < A.size(); ++i) {
        A.x[i] = 0.3 * std::sin(2 * pi * static_cast<double>(i % 32) / 32);
        A.y[i] = 0.1;
    }
    const ComplexField u = normalize(smooth_random_field(g, 1)), v = normalize(smooth_random_field(g, 2));
    const ComplexPair du = covariant_derivative(u, A), dv = covariant_derivative(v, A);
    const cplx lhs = inner_product(v, magnetic_laplacian(u, A));
    const cplx rhs = inner_product(dv.x, du.x) + inner_product(dv.y, du.y);
    CHECK(std::abs(lhs - rhs) < 1e-10 * std::abs(rhs));
}

TEST_CASE("normalize and quadrature inner product") {
    const Grid2D g(14.0, 96);
    const auto gauss = sample<cplx>(g, [](double x, double y) { return std::exp(-(x * x + y * y) / 2); });
    // integral of e^{-r^2} is pi
    CHECK(std::pow(norm(gauss), 2) == doctest::Approx(pi).epsilon(1e-12));
    CHECK(norm(normalize(gauss)) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK_THROWS_AS(normalize(ComplexField(g)), DomainError);
    CHECK_THROWS_AS(inner_product(gauss, ComplexField(Grid2D(10.0, 32))), ShapeError);
}

TEST_CASE("fourier interpolation reproduces band-limited functions") {
    const Grid2D g(4.0, 16), gf(4.0, 48);
    const double k = 2 * pi * 3 / g.L;
    auto f = [&](double x, double y) { return cplx(std::cos(k * x + 0.3) * std::sin(2 * k * y / 3), std::sin(k * y)); };
    const ComplexField up = fourier_interpolate(sample<cplx>(g, f), gf.n);
    const ComplexField ref = sample<cplx>(gf, f);
    for (std::size_t i = 0; i < ref.size(); ++i) CHECK(std::abs(up[i] - ref[i]) < 1e-12);
}

TEST_CASE("dealias removes the upper third of the spectrum") {
    const Grid2D g(2 * pi, 24);
    const auto u = sample<cplx>(g, [](double x, double y) { return cplx(std::cos(2 * x) + std::cos(10 * y)); });
    const ComplexField f = dealias(u);
    for (int iy = 0; iy < g.n; ++iy)
        for (int ix = 0; ix < g.n; ++ix) CHECK(std::abs(f.at(ix, iy) - std::cos(2 * g.coord(ix))) < 1e-12);
}

TEST_CASE("field dumps round-trip with a JSON sidecar") {
    const auto dir = std::filesystem::temp_directory_path() / "anyon_af_io_test";
    std::filesystem::create_directories(dir);
    const Grid2D g(7.5, 16);
    const ComplexField u = random_complex_field(g, 5);
    write_field(dir / "u", u);
    const ComplexField r = read_complex_field(dir / "u");
    CHECK(r.grid == g);
    CHECK(r.values == u.values);
    CHECK(std::filesystem::file_size(dir / "u.bin") == g.size() * 16);

    RealField rho = density(u);
    write_field(dir / "rho", rho);
    CHECK(read_real_field(dir / "rho").values == rho.values);
    CHECK_THROWS(read_vector_field(dir / "rho"));
    std::filesystem::remove_all(dir);
}

TEST_CASE("random fields are seed-deterministic") {
    const Grid2D g(8.0, 32);
    CHECK(random_complex_field(g, 9).values == random_complex_field(g, 9).values);
    CHECK(random_complex_field(g, 9).values != random_complex_field(g, 10).values);
    CHECK(smooth_random_field(g, 4).values == smooth_random_field(g, 4).values);
}
