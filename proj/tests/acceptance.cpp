// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>

#include "anyon/field_ops.hpp"
#include "anyon/manybody.hpp"
#include "anyon/random_fields.hpp"
#include "anyon/spectral.hpp"

using namespace anyon;
using std::numbers::pi;

namespace {

struct Outcome {
    bool ok;
    std::string detail;
};

int failures = 0;

void criterion(int id, const char* title, double budget_s, const std::function<Outcome()>& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
        o = body();
    } catch (const std::exception& e) {
        o = {false, std::string("error: ") + e.what()};
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = s <= budget_s;
    const bool ok = o.ok && in_time;
    if (!ok) ++failures;
    std::printf("[%s] %2d %s: %s (%.1f s of %.0f s)\n", ok ? "PASS" : "FAIL", id, title, o.detail.c_str(), s, budget_s);
    std::fflush(stdout);
}

std::string sci(double v) {
    char b[32];
    std::snprintf(b, sizeof b, "%.3e", v);
    return b;
}

// Gauss-Legendre rule on [a, b].
void legendre(int n, double a, double b, std::vector<double>& x, std::vector<double>& w) {
    x.clear();
    w.clear();
    for (int i = 1; i <= n; ++i) {
        double z = std::cos(pi * (i - 0.25) / (n + 0.5)), dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * z * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x.push_back(0.5 * (a + b) + 0.5 * (b - a) * z);
        w.push_back((b - a) / ((1 - z * z) * dp * dp));
    }
}

// (1 / pi R^2) * integral of log|x - y| over |y| < R, polar about the disc
// centre with the radial range split at |x|.
double smeared_oracle(Vec2 x, double R) {
    const double r = length(x);
    std::vector<std::pair<double, double>> pieces = r > 0.0 && r < R ? std::vector<std::pair<double, double>>{{0, r}, {r, R}}
                                                                     : std::vector<std::pair<double, double>>{{0, R}};
    const int nth = 3000;
    double acc = 0.0;
    std::vector<double> rx, rw;
    for (auto [a, b] : pieces) {
        legendre(60, a, b, rx, rw);
        for (std::size_t i = 0; i < rx.size(); ++i) {
            double s = 0.0;
            for (int j = 0; j < nth; ++j) {
                const double th = 2 * pi * (j + 0.5) / nth;
                s += 0.5 * std::log(std::pow(x.x - rx[i] * std::cos(th), 2) + std::pow(x.y - rx[i] * std::sin(th), 2));
            }
            acc += rw[i] * rx[i] * s * 2 * pi / nth;
        }
    }
    return acc / (pi * R * R);
}

ModelParams model(double beta, double R) {
    ModelParams p;
    p.beta = beta;
    p.R.value = R;
    return p;
}

} // namespace

int main() {
    criterion(1, "smeared potential closed form", 10, [] {
        std::mt19937_64 rng(1);
        std::uniform_real_distribution<double> uR(0.01, 0.5), ua(0, 2 * pi), us(0, 3);
        double worst = 0, worst_ext = 0;
        for (int i = 0; i < 100; ++i) {
            const double R = uR(rng), a = ua(rng), r = us(rng) * R;
            const Vec2 x{r * std::cos(a), r * std::sin(a)};
            const double ref = smeared_oracle(x, R);
            if (r <= R)
                worst = std::max(worst, std::abs(eval_w_R(x, R) - ref));
            else {
                worst = std::max(worst, std::abs(eval_w_R(x, R) - ref));
                worst_ext = std::max(worst_ext, std::abs(eval_w_R(x, R) - std::log(r)));
            }
        }
        return Outcome{worst <= 1e-6 && worst_ext <= 1e-10,
                       "max |w_R - quadrature| = " + sci(worst) + ", exterior max |w_R - log|x|| = " + sci(worst_ext)};
    });

    criterion(2, "smeared potential bounds", 5, [] {
        const auto rep = smeared_bound_check({0.5, 0.25, 0.1, 0.05, 0.01});
        return Outcome{rep.ok, "min(1 + |log R| - sup|w_R|) = " + sci(rep.worst_w_margin) + ", max|sup|grad| - 1/R| = " +
                                   sci(rep.worst_grad_deviation) + ", min(1 - sup_{|x|>=1}|grad|) = " +
                                   sci(rep.worst_outside_margin)};
    });

    criterion(3, "beta = 0 harmonic oracle", 60, [] {
        const auto res = minimize_af(Grid2D(16.0, 128), model(0.0, 0.1), SolverConfig{});
        const double err = std::abs(res.energy - 2.0);
        return Outcome{res.converged && err <= 1e-6,
                       "E = " + std::to_string(res.energy) + ", |E - 2| = " + sci(err) + ", " + std::to_string(res.iterations) +
                           " iterations"};
    });

    criterion(4, "gradient finite differences", 60, [] {
        const Grid2D g(16.0, 128);
        double worst = 0.0;
        for (double beta : {0.0, 0.5, 1.0, 2.0})
            for (double R : {0.1, 0.0}) {
                const AverageFieldModel m(g, model(beta, R));
                const ComplexField u = normalize(smooth_random_field(g, 11));
                const ComplexField grad = m.gradient(u);
                for (unsigned d = 0; d < 10; ++d) {
                    const ComplexField v = normalize(smooth_random_field(g, 100 + d, 1.2 + 0.1 * d));
                    const double eps = 1e-5;
                    const double fd = (m.energy(u + cplx(eps) * v) - m.energy(u - cplx(eps) * v)) / (2 * eps);
                    const double an = 2 * inner_product(v, grad).real();
                    worst = std::max(worst, std::abs(fd - an) / std::abs(an));
                }
            }
        return Outcome{worst < 1e-6, "max relative error = " + sci(worst) + " (80 directional derivatives)"};
    });

    criterion(5, "gauge covariance", 10, [] {
        const Grid2D g(16.0, 128);
        ModelParams p = model(1.0, 0.1);
        p.gauge.kind = GaugeSpec::Kind::uniform;
        p.gauge.B0 = 0.5;
        const AverageFieldModel base(g, p);
        const ComplexField u = normalize(smooth_random_field(g, 5));
        const double E0 = base.energy(u);
        std::mt19937_64 rng(5);
        std::uniform_int_distribution<int> mode(-3, 3);
        std::uniform_real_distribution<double> amp(-1, 1), ph(0, 2 * pi);
        double worst = 0;
        for (int t = 0; t < 5; ++t) {
            const double kx = 2 * pi * mode(rng) / g.L, ky = 2 * pi * mode(rng) / g.L, a = amp(rng), th = ph(rng);
            VectorField2 A = base.external_gauge();
            ComplexField w = u;
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix) {
                    const double arg = kx * g.coord(ix) + ky * g.coord(iy) + th;
                    A.x[g.index(ix, iy)] -= a * kx * std::sin(arg);
                    A.y[g.index(ix, iy)] -= a * ky * std::sin(arg);
                    w.at(ix, iy) *= std::polar(1.0, -a * std::cos(arg));
                }
            ModelParams q = p;
            q.gauge.kind = GaugeSpec::Kind::tabulated;
            q.gauge.table = A;
            worst = std::max(worst, std::abs(AverageFieldModel(g, q).energy(w) - E0) / std::abs(E0));
        }
        return Outcome{worst <= 1e-8, "max relative change = " + sci(worst)};
    });

    criterion(6, "product-state identity", 5, [] {
        const Grid2D g(16.0, 128);
        const ModelParams p = model(1.0, 0.1);
        const ComplexField u = normalize(smooth_random_field(g, 6));
        const double eaf = energy_af(u, p);
        double worst = 0;
        for (int N : {2, 5, 50}) {
            const auto b = product_state_energy(u, N, p);
            const double w = p.beta * p.beta / (N - 1.0);
            worst = std::max(worst, std::abs((b.total_per_particle - eaf) - (w * b.self_pair - w * b.three_body)));
        }
        return Outcome{worst <= 1e-12, "max defect = " + sci(worst)};
    });

    criterion(7, "dual-route mixed term", 30, [] {
        const Grid2D g(16.0, 128);
        ModelParams p = model(1.0, 0.1);
        p.gauge.kind = GaugeSpec::Kind::uniform;
        p.gauge.B0 = 0.3;
        double worst = 0;
        for (unsigned s = 0; s < 5; ++s) {
            const auto [a, b] = mixed_term_dual_route(normalize(smooth_random_field(g, 70 + s)), p);
            worst = std::max(worst, std::abs(a - b) / std::abs(a));
        }
        return Outcome{worst <= 1e-6, "max relative difference = " + sci(worst)};
    });

    criterion(8, "two-body variational inequality", 600, [] {
        const Grid2D g(12.0, 48);
        const SpectralBasis basis = build_spectrum(g, model(0.0, 0.1), 30);
        const TwoBodyIntegrals ints = compute_two_body_integrals(basis, model(1.0, 0.1));
        bool ok = true;
        std::string detail;
        for (double beta : {0.5, 1.0}) {
            const ModelParams p = model(beta, 0.1);
            const auto mf = minimize_af(g, p, SolverConfig{});
            const double prod = product_state_energy(mf.u_star, 2, p).total_per_particle;
            double prev = std::numeric_limits<double>::infinity(), e = 0;
            std::string list;
            for (int m : {5, 10, 20, 30}) {
                e = ground_energy_2body(assemble_H2(ints, beta, m));
                ok = ok && e <= prev;
                prev = e;
                list += (list.empty() ? "" : ", ") + std::to_string(e);
            }
            ok = ok && mf.converged && e <= prod;
            detail += "beta " + std::to_string(beta).substr(0, 3) + ": e2 = {" + list + "} vs product " + std::to_string(prod) + "; ";
        }
        return Outcome{ok, detail};
    });

    criterion(9, "three-body positivity", 60, [] {
        const auto chk = three_body_positivity_check(Grid2D(16.0, 128), model(1.0, 0.1), 50, 9);
        return Outcome{chk.nonnegative, "min over 50 bosonic trials = " + sci(chk.min_bosonic) +
                                            " (as given, before symmetrization: " + sci(chk.min_raw) + ")"};
    });

    const Grid2D gs(16.0, 64);
    std::optional<SpectralBasis> basis;
    auto spectral_basis = [&]() -> const SpectralBasis& {
        if (!basis) basis = build_spectrum(gs, model(0.0, 0.1), 200);
        return *basis;
    };

    criterion(10, "plane-wave estimate", 120, [&] {
        double max_eig = 0, lo = 1e300, hi = 0;
        std::string list;
        for (double Lambda : {2.0, 3.0, 4.0}) {
            const auto rep = plane_wave_bound_check(spectral_basis(), Lambda, default_k_scan(Lambda));
            max_eig = std::max(max_eig, rep.max_abs_eig);
            lo = std::min(lo, rep.C_star);
            hi = std::max(hi, rep.C_star);
            list += (list.empty() ? "" : ", ") + std::string("C*(") + std::to_string(static_cast<int>(Lambda)) + ") = " +
                    sci(rep.C_star) + " [rank " + std::to_string(rep.rank) + "]";
        }
        const bool bound = max_eig <= 1 + 1e-10, stable = hi <= 2 * lo;
        return Outcome{bound && stable, "max|eig| = " + sci(max_eig) + (bound ? " (ok)" : " (violated)") + "; " + list +
                                            "; max/min = " + sci(hi / lo) + (stable ? " (ok)" : " (not within factor 2)")};
    });

    criterion(11, "CLR exponent", 120, [&] {
        std::vector<double> Lambdas;
        for (int q = 9; q <= 37; q += 4) Lambdas.push_back(std::sqrt(static_cast<double>(q)));
        const auto scan = clr_dimension_scan(spectral_basis(), 2.0, Lambdas);
        return Outcome{std::abs(scan.slope - 4.0) <= 0.3, "slope = " + std::to_string(scan.slope) + " (target 4 +- 0.3)"};
    });

    criterion(12, "radius-convergence diagnostic", 600, [] {
        const Grid2D g(16.0, 128);
        std::optional<ComplexField> warm;
        std::vector<double> E;
        bool conv = true;
        for (int k = 1; k <= 6; ++k) {
            const ModelParams p = model(1.0, std::ldexp(1.0, -k));
            const auto res = warm ? minimize_af(*warm, p, SolverConfig{}) : minimize_af(g, p, SolverConfig{});
            conv = conv && res.converged;
            warm = res.u_star;
            E.push_back(res.energy);
        }
        bool dec = true;
        std::string list;
        for (std::size_t i = 1; i < E.size(); ++i) {
            const double d = std::abs(E[i] - E[i - 1]);
            if (i > 1) dec = dec && d < std::abs(E[i - 1] - E[i - 2]);
            list += (list.empty() ? "" : ", ") + sci(d);
        }
        return Outcome{dec && conv, "|e_R - e_R/2| = {" + list + "}"};
    });

    std::printf("%d of 12 criteria failed\n", failures);
    return failures == 0 ? 0 : 1;
}
