#include "anyon/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "anyon/field_ops.hpp"
#include "anyon/manybody.hpp"
#include "anyon/random_fields.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

std::string verdict_name(Verdict v) {
    switch (v) {
    case Verdict::pass: return "PASS";
    case Verdict::fail: return "FAIL";
    case Verdict::out_of_range: return "OUT_OF_RANGE";
    }
    return "?";
}

bool VerifyReport::ok() const {
    return std::none_of(results.begin(), results.end(), [](const auto& r) { return r.verdict == Verdict::fail; });
}

std::string VerifyReport::render() const {
    std::string out;
    for (const auto& r : results) {
        std::string v = verdict_name(r.verdict);
        v.resize(13, ' ');
        out += v + r.name + "  " + r.detail + "\n";
    }
    return out;
}

Table VerifyReport::table() const {
    Table t{"verify", {"property", "verdict", "detail"}, {}};
    for (const auto& r : results) {
        std::string d = r.detail;
        std::replace(d.begin(), d.end(), ',', ';');
        t.add_row({r.name, verdict_name(r.verdict), d});
    }
    return t;
}

namespace {

// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(static_cast<std::size_t>(n), 0.0);
    w.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = z;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (z * p1 - p0) / (z * z - 1.0);
            const double dz = p1 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        x[static_cast<std::size_t>(i)] = -z;
        x[static_cast<std::size_t>(n - 1 - i)] = z;
        w[static_cast<std::size_t>(i)] = w[static_cast<std::size_t>(n - 1 - i)] = 2.0 / ((1.0 - z * z) * dp * dp);
    }
}

std::string sci(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3e", v);
    return buf;
}

ModelParams harmonic_params() {
    ModelParams p;
    p.trap = TrapSpec{};
    p.gauge = GaugeSpec{};
    return p;
}

double fallback_R(const RunConfig& cfg) { return cfg.model.R.singular() ? 0.1 : cfg.model.R.value; }

} // namespace

double smeared_log_quadrature(Vec2 x, double R, int nodes) {
    // Radial primitive of r log r.
    auto F = [](double r) { return r > 0.0 ? 0.5 * r * r * (std::log(r) - 0.5) : 0.0; };
    auto ray = [&](double th) {
        const double ex = std::cos(th), ey = std::sin(th);
        const double b = x.x * ex + x.y * ey;
        const double disc = b * b - (x.x * x.x + x.y * x.y) + R * R;
        if (disc <= 0.0) return 0.0;
        const double r2 = -b + std::sqrt(disc);
        const double r1 = std::max(0.0, -b - std::sqrt(disc));
        return r2 > r1 ? F(r2) - F(r1) : 0.0;
    };
    std::vector<double> t, w;
    gauss_legendre(nodes, t, w);
    const double r = length(x);
    double acc = 0.0;
    if (r < R) {
        // Smooth periodic integrand; split the circle to keep nodes dense.
        for (int q = 0; q < 4; ++q) {
            const double a = q * std::numbers::pi / 2;
            for (std::size_t i = 0; i < t.size(); ++i)
                acc += w[i] * std::numbers::pi / 4 * ray(a + std::numbers::pi / 4 * (t[i] + 1.0));
        }
    } else {
        // Cone of directions hitting the disc; theta = phi + c sin(pi s / 2)
        // absorbs the square-root edges.
        const double phi = std::atan2(-x.y, -x.x);
        const double c = std::asin(std::min(1.0, R / r));
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double s = std::numbers::pi / 2 * t[i];
            acc += w[i] * std::numbers::pi / 2 * c * std::cos(s) * ray(phi + c * std::sin(s));
        }
    }
    return acc / (std::numbers::pi * R * R);
}

VerifyReport run_verify(const RunConfig& cfg, const VerifyHooks& hooks) {
    VerifyReport rep;
    const Grid2D& g = cfg.grid;
    const bool coarse = g.n < 32;
    const bool small_box = g.L < 12.0;

    auto run = [&](const std::string& name, bool in_range, const std::string& why, auto&& body) {
        const auto t0 = std::chrono::steady_clock::now();
        PropertyResult res;
        res.name = name;
        if (!in_range) {
            res.verdict = Verdict::out_of_range;
            res.detail = why;
        } else {
            try {
                auto [ok, detail] = body();
                res.verdict = ok ? Verdict::pass : Verdict::fail;
                res.detail = detail;
            } catch (const std::exception& e) {
                res.verdict = Verdict::fail;
                res.detail = std::string("error: ") + e.what();
            }
        }
        res.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        rep.results.push_back(std::move(res));
    };
    const std::string coarse_why = "grid n = " + std::to_string(g.n) + " is below the validated n >= 32";
    const std::string box_why = "box L = " + format_number(g.L) + " is below the validated L >= 12 for the trap";

    run("smeared_potential_closed_form", true, "", [&] {
        std::mt19937_64 rng(cfg.seed);
        std::uniform_real_distribution<double> uR(0.01, 0.5), ur(0.0, 3.0), ua(0.0, 2 * std::numbers::pi);
        double worst = 0.0, worst_ext = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double R = uR(rng), r = ur(rng) * (i % 2 ? 1.0 : R), a = ua(rng);
            const Vec2 x{r * std::cos(a), r * std::sin(a)};
            worst = std::max(worst, std::abs(eval_w_R(x, R) - smeared_log_quadrature(x, R)));
            const Vec2 y{(R + 0.5 + r) * std::cos(a), (R + 0.5 + r) * std::sin(a)};
            worst_ext = std::max(worst_ext, std::abs(eval_w_R(y, R) - std::log(length(y))));
        }
        return std::pair{worst <= 1e-6 && worst_ext <= 1e-10,
                         "max |w_R - quadrature| = " + sci(worst) + ", exterior max |w_R - log| = " + sci(worst_ext)};
    });

    run("smeared_potential_bounds", true, "", [&] {
        const auto b = smeared_bound_check({0.5, 0.25, 0.1, 0.05, 0.01});
        return std::pair{b.ok, "min ball margin = " + sci(b.worst_w_margin) + ", max |sup grad - 1/R| = " +
                                   sci(b.worst_grad_deviation) + ", min exterior margin = " + sci(b.worst_outside_margin)};
    });

    run("harmonic_oracle", !coarse && !small_box, coarse ? coarse_why : box_why, [&] {
        const auto res = minimize_af(g, harmonic_params(), cfg.solver);
        const double err = std::abs(res.energy - 2.0);
        return std::pair{res.converged && err <= 1e-6, "|E - 2| = " + sci(err) + " after " +
                                                           std::to_string(res.iterations) + " iterations"};
    });

    run("gradient_finite_difference", !coarse, coarse_why, [&] {
        double worst = 0.0;
        for (double beta : {0.0, 0.5, 1.0, 2.0})
            for (double R : {fallback_R(cfg), 0.0}) {
                ModelParams p = cfg.model;
                p.beta = beta;
                p.R.value = R;
                AverageFieldModel model(g, p);
                model.self_consistency_sign = hooks.self_consistency_sign;
                const ComplexField u = normalize(smooth_random_field(g, cfg.seed + 17));
                const ComplexField grad = model.gradient(u);
                for (int d = 0; d < 3; ++d) {
                    const ComplexField v = normalize(smooth_random_field(g, cfg.seed + 100 + static_cast<unsigned>(d)));
                    const double eps = 1e-5;
                    const double fd = (model.energy(u + cplx(eps) * v) - model.energy(u - cplx(eps) * v)) / (2 * eps);
                    const double an = 2.0 * inner_product(v, grad).real();
                    worst = std::max(worst, std::abs(fd - an) / std::max({std::abs(an), std::abs(fd), 1e-8}));
                }
            }
        return std::pair{worst < 1e-6, "max relative error = " + sci(worst) + " over beta in {0, 0.5, 1, 2}, R in {" +
                                           format_number(fallback_R(cfg)) + ", 0}"};
    });

    run("gauge_covariance", !coarse, coarse_why, [&] {
        const AverageFieldModel base(g, cfg.model);
        const ComplexField u = normalize(smooth_random_field(g, cfg.seed + 23));
        const double E0 = base.energy(u);
        std::mt19937_64 rng(cfg.seed + 29);
        std::uniform_int_distribution<int> mode(-2, 2);
        std::uniform_real_distribution<double> amp(-0.8, 0.8), ph(0.0, 2 * std::numbers::pi);
        double worst = 0.0;
        for (int trial = 0; trial < 5; ++trial) {
            struct Term {
                double a, kx, ky, th;
            };
            std::vector<Term> terms;
            for (int j = 0; j < 3; ++j)
                terms.push_back({amp(rng), 2 * std::numbers::pi * mode(rng) / g.L, 2 * std::numbers::pi * mode(rng) / g.L,
                                 ph(rng)});
            VectorField2 A = base.external_gauge();
            ComplexField w = u;
            for (int iy = 0; iy < g.n; ++iy)
                for (int ix = 0; ix < g.n; ++ix) {
                    const double x = g.coord(ix), y = g.coord(iy);
                    double phi = 0.0, gx = 0.0, gy = 0.0;
                    for (const auto& t : terms) {
                        phi += t.a * std::cos(t.kx * x + t.ky * y + t.th);
                        gx -= t.a * t.kx * std::sin(t.kx * x + t.ky * y + t.th);
                        gy -= t.a * t.ky * std::sin(t.kx * x + t.ky * y + t.th);
                    }
                    const std::size_t i = g.index(ix, iy);
                    A.x[i] += gx;
                    A.y[i] += gy;
                    w[i] *= std::polar(1.0, -phi);
                }
            ModelParams p = cfg.model;
            p.gauge.kind = GaugeSpec::Kind::tabulated;
            p.gauge.table = A;
            const double E1 = AverageFieldModel(g, p).energy(w);
            worst = std::max(worst, std::abs(E1 - E0) / std::abs(E0));
        }
        return std::pair{worst <= 1e-8, "max relative energy change = " + sci(worst) + " over 5 gauge functions"};
    });

    run("product_state_identity", true, "", [&] {
        ModelParams p = cfg.model;
        p.R.value = fallback_R(cfg);
        if (p.beta == 0.0) p.beta = 1.0;
        const ComplexField u = normalize(smooth_random_field(g, cfg.seed + 31));
        const double eaf = energy_af(u, p);
        double worst = 0.0;
        for (int N : {2, 5, 50}) {
            const auto b = product_state_energy(u, N, p);
            const double lhs = b.total_per_particle - eaf;
            const double rhs = p.beta * p.beta / (N - 1.0) * (b.self_pair - b.three_body);
            worst = std::max(worst, std::abs(lhs - rhs));
        }
        return std::pair{worst <= 1e-12, "max |identity defect| = " + sci(worst) + " for N in {2, 5, 50}"};
    });

    run("mixed_term_dual_route", true, "", [&] {
        ModelParams p = cfg.model;
        if (p.beta == 0.0) p.beta = 1.0;
        double worst = 0.0;
        for (int s = 0; s < 5; ++s) {
            const ComplexField u = normalize(smooth_random_field(g, cfg.seed + 41 + static_cast<unsigned>(s)));
            const auto [a, b] = mixed_term_dual_route(u, p);
            worst = std::max(worst, std::abs(a - b) / std::max(std::abs(a), 1e-300));
        }
        return std::pair{worst <= 1e-6, "max relative difference = " + sci(worst) + " over 5 states"};
    });

    run("three_body_positivity", true, "", [&] {
        ModelParams p = cfg.model;
        p.R.value = fallback_R(cfg);
        const auto chk = three_body_positivity_check(g, p, 50, cfg.seed + 53);
        return std::pair{chk.nonnegative, "min over 50 symmetric trials = " + sci(chk.min_bosonic) +
                                              " (unsymmetrized minimum " + sci(chk.min_raw) + ")"};
    });

    // Spectral properties run on at most 64 x 64 points (dense eigen-solve).
    const Grid2D gs(g.L, std::min(g.n, 64));
    std::optional<SpectralBasis> basis;
    auto spectral_basis = [&]() -> const SpectralBasis& {
        if (!basis) {
            ModelParams p = cfg.model;
            p.beta = 0.0;
            basis = build_spectrum(gs, p, std::min(200, gs.n * gs.n / 4), 400);
        }
        return *basis;
    };
    std::vector<PlaneWaveReport> pw;
    run("plane_wave_bound", !coarse && !small_box, coarse ? coarse_why : box_why, [&] {
        double worst = 0.0;
        for (double Lambda : cfg.Lambda_list) {
            pw.push_back(plane_wave_bound_check(spectral_basis(), Lambda, default_k_scan(Lambda)));
            worst = std::max(worst, pw.back().max_abs_eig);
        }
        return std::pair{worst <= 1.0 + 1e-10, "max |eig(P e_k P)| = " + format_number(worst)};
    });

    run("plane_wave_constant_stability", !coarse && !small_box && cfg.Lambda_list.size() > 1,
        coarse ? coarse_why : small_box ? box_why : "needs at least two cut-offs", [&] {
            if (pw.size() != cfg.Lambda_list.size()) throw NumericalError("plane-wave reports unavailable");
            double lo = pw.front().C_star, hi = lo;
            std::string list;
            for (const auto& r : pw) {
                lo = std::min(lo, r.C_star);
                hi = std::max(hi, r.C_star);
                list += (list.empty() ? "" : ", ") + format_number(r.Lambda) + ": " + sci(r.C_star);
            }
            const double ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
            return std::pair{ratio <= 2.0, "C* by cut-off {" + list + "}, max/min = " + sci(ratio)};
        });

    run("clr_exponent", !coarse && !small_box, coarse ? coarse_why : box_why, [&] {
        const SpectralBasis& b = spectral_basis();
        const double top = std::min(b.eigenvalues.back(), gs.reliable_energy());
        const double hi = std::sqrt(top) * (1.0 - 1e-3);
        std::vector<double> Lambdas;
        for (int i = 0; i < 8; ++i) Lambdas.push_back(hi * std::pow(2.0, -(7 - i) / 7.0));
        const ClrScan scan = clr_dimension_scan(b, cfg.model.trap.s, Lambdas);
        const bool ok = std::abs(scan.slope - scan.exponent_bound) <= 0.3;
        return std::pair{ok, "log-log slope = " + format_number(scan.slope) + " against 2 + 4/s = " +
                                 format_number(scan.exponent_bound)};
    });

    run("variational_chain", !coarse && !small_box, coarse ? coarse_why : box_why, [&] {
        const Grid2D gm(0.75 * g.L, std::min(g.n, 48));
        ModelParams p = cfg.model;
        p.R.value = fallback_R(cfg);
        if (p.beta == 0.0) p.beta = 1.0;
        const auto mf = minimize_af(gm, p, cfg.solver);
        const double prod = product_state_energy(mf.u_star, 2, p).total_per_particle;
        ModelParams one = p;
        one.beta = 0.0;
        const auto ints = compute_two_body_integrals(build_spectrum(gm, one, 20), p);
        std::string list;
        double prev = std::numeric_limits<double>::infinity(), last = 0.0;
        bool mono = true;
        for (int m : {5, 10, 20}) {
            last = ground_energy_2body(assemble_H2(ints, p.beta, m));
            mono = mono && last <= prev + 1e-10;
            prev = last;
            list += (list.empty() ? "" : ", ") + format_number(last);
        }
        return std::pair{mono && last <= prod,
                         "e2(m = 5, 10, 20) = {" + list + "}, product energy = " + format_number(prod)};
    });

    run("radius_convergence", !coarse && !small_box, coarse ? coarse_why : box_why, [&] {
        ModelParams p = cfg.model;
        p.beta = 1.0;
        std::optional<ComplexField> warm;
        std::vector<double> E;
        bool conv = true;
        for (int k = 1; k <= 6; ++k) {
            p.R.value = std::ldexp(1.0, -k);
            const auto res = warm ? minimize_af(*warm, p, cfg.solver) : minimize_af(g, p, cfg.solver);
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
        return std::pair{dec && conv, "Cauchy differences {" + list + "}" + (conv ? "" : " (a run did not converge)")};
    });

    return rep;
}

} // namespace anyon
