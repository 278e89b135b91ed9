#include "doctest.h"

#include <cmath>
#include <numbers>
#include <random>

#include "anyon/eigensolver.hpp"
#include "anyon/field_ops.hpp"
#include "anyon/spectral.hpp"

using namespace anyon;
using std::numbers::pi;

namespace {

const SpectralBasis& harmonic_basis() {
    static const SpectralBasis b = build_spectrum(Grid2D(12.0, 48), ModelParams{}, 60);
    return b;
}

} // namespace

TEST_CASE("lobpcg agrees with a dense solve on a random Hermitian matrix") {
    const int dim = 120;
    std::mt19937_64 rng(1);
    std::normal_distribution<double> nd;
    Eigen::MatrixXcd M(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) M(i, j) = cplx(nd(rng), nd(rng));
    Eigen::MatrixXcd H = (M + M.adjoint()) / 2;
    H.diagonal().array() += Eigen::VectorXd::LinSpaced(dim, 0.0, 200.0).array().cast<cplx>();
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> ref(H);
    const auto res = lobpcg([&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { out = H * in; },
                            [](const Eigen::MatrixXcd& in, const Eigen::VectorXd&, Eigen::MatrixXcd& out) { out = in; },
                            dim, 8);
    for (int i = 0; i < 8; ++i) CHECK(res.values[static_cast<std::size_t>(i)] == doctest::Approx(ref.eigenvalues()[i]).epsilon(1e-9));
    Eigen::MatrixXcd Hc = H;
    const auto dense = dense_lowest(Hc, 8);
    for (int i = 0; i < 8; ++i) CHECK(dense.values[static_cast<std::size_t>(i)] == doctest::Approx(ref.eigenvalues()[i]).epsilon(1e-12));
    CHECK((res.vectors.adjoint() * res.vectors - Eigen::MatrixXcd::Identity(8, 8)).norm() < 1e-10);
}

TEST_CASE("harmonic trap spectrum is 2(k + 1) with multiplicity k + 1") {
    const auto& b = harmonic_basis();
    int idx = 0;
    for (int k = 0; idx < 45; ++k)
        for (int j = 0; j <= k && idx < 45; ++j, ++idx) {
            // the box truncates the Hermite tails at about 1e-7 for the top levels
            CHECK(b.eigenvalues[static_cast<std::size_t>(idx)] == doctest::Approx(2.0 * (k + 1)).epsilon(1e-6));
            CHECK(b.residuals[static_cast<std::size_t>(idx)] < 1e-8);
        }
    // orthonormal modes
    for (int a = 0; a < 6; ++a)
        for (int c = 0; c < 6; ++c)
            CHECK(std::abs(inner_product(b.modes[static_cast<std::size_t>(a)], b.modes[static_cast<std::size_t>(c)]) -
                           (a == c ? 1.0 : 0.0)) < 1e-10);
}

TEST_CASE("dense and LOBPCG back ends agree in a magnetic field") {
    const Grid2D g(10.0, 32);
    ModelParams p;
    p.gauge.kind = GaugeSpec::Kind::uniform;
    p.gauge.B0 = 1.0;
    const auto d = build_spectrum(g, p, 12, 400, EigenMethod::dense);
    const auto l = build_spectrum(g, p, 12, 400, EigenMethod::lobpcg);
    for (int i = 0; i < 12; ++i)
        CHECK(l.eigenvalues[static_cast<std::size_t>(i)] == doctest::Approx(d.eigenvalues[static_cast<std::size_t>(i)]).epsilon(1e-7));
}

TEST_CASE("diamagnetic inequality for the lowest eigenvalue") {
    const Grid2D g(18.0, 48);
    const double free0 = build_spectrum(g, ModelParams{}, 1, 400, EigenMethod::lobpcg).eigenvalues[0];
    for (double B : {0.25, 0.5, 1.0, 2.0}) {
        ModelParams p;
        p.gauge.kind = GaugeSpec::Kind::uniform;
        p.gauge.B0 = B;
        const double lam = build_spectrum(g, p, 1, 400, EigenMethod::lobpcg).eigenvalues[0];
        CHECK(lam >= free0 - 1e-8);
        // Fock-Darwin ground energy: 2 sqrt(1 + B^2/4)
        CHECK(lam == doctest::Approx(2 * std::sqrt(1 + B * B / 4)).epsilon(1e-6));
    }
}

TEST_CASE("spectrum budget and size limits") {
    const Grid2D g(12.0, 16);
    CHECK_THROWS_AS(build_spectrum(g, ModelParams{}, 50, 40), PreconditionError);
    CHECK_THROWS_AS(build_spectrum(g, ModelParams{}, 65), PreconditionError);
}

TEST_CASE("projectors keep degenerate clusters whole") {
    const auto& b = harmonic_basis();
    // sqrt(h) < 3 holds levels 2, 4, 6, 8: 1 + 2 + 3 + 4 modes
    CHECK(build_projector(b, 0.0, 3.0).rank() == 10);
    // Lambda = 2 sits on the level-4 cluster: it starts the next window
    CHECK(build_projector(b, 0.0, 2.0).rank() == 1);
    CHECK(build_projector(b, 2.0, 3.0).rank() == 9);
    CHECK(count_below(b, 2.0) == 1);
    CHECK(count_below(b, std::sqrt(5.0)) == 3);
    const Projector P = build_projector(b, 1.5, 2.5);
    CHECK(P.contains(1));
    CHECK(!P.contains(0));
    CHECK(P.matrix().trace() == doctest::Approx(static_cast<double>(P.rank())));
    CHECK_THROWS_AS(build_projector(b, 2.0, 1.0), PreconditionError);
    // beyond the computed span
    CHECK_THROWS_AS(build_projector(b, 0.0, 20.0), PreconditionError);
}

TEST_CASE("plane-wave compressions are contractions") {
    const auto& b = harmonic_basis();
    for (double Lambda : {2.0, 3.0}) {
        const auto rep = plane_wave_bound_check(b, Lambda, default_k_scan(Lambda));
        CHECK(rep.max_abs_eig <= 1.0 + 1e-10);
        CHECK(rep.rows.size() == 2 * default_k_scan(Lambda).size());
        for (const auto& r : rep.rows) CHECK(r.C == doctest::Approx(r.max_abs_eig * (r.k.x * r.k.x + r.k.y * r.k.y) / (Lambda * Lambda)));
    }
}

TEST_CASE("plane-wave value on the rank-one window is the Gaussian overlap") {
    // P = |phi_0><phi_0|, so the eigenvalue is <phi_0, cos(k.x) phi_0> = exp(-|k|^2/4).
    const auto& b = harmonic_basis();
    const auto rep = plane_wave_bound_check(b, 2.0, {Vec2{2.5, 0.0}, Vec2{1.0, 1.0}});
    for (const auto& r : rep.rows) {
        const double k2 = r.k.x * r.k.x + r.k.y * r.k.y;
        CHECK(r.max_abs_eig == doctest::Approx(r.cosine ? std::exp(-k2 / 4) : 0.0).epsilon(1e-8));
    }
}

TEST_CASE("CLR scan recovers the Weyl exponent of the harmonic trap") {
    const auto& b = harmonic_basis();
    const auto scan = clr_dimension_scan(b, 2.0, {std::sqrt(3.0), std::sqrt(5.0), std::sqrt(7.0), std::sqrt(9.0), std::sqrt(11.0)});
    // counts J (J + 1) / 2 at Lambda^2 = 2 J + 1
    CHECK(scan.counts == std::vector<int>{1, 3, 6, 10, 15});
    CHECK(scan.exponent_bound == 4.0);
    CHECK(scan.slope > 3.5);
    CHECK_THROWS_AS(clr_dimension_scan(b, 2.0, {1.0, 2.0, 3.0}), PreconditionError);
}
