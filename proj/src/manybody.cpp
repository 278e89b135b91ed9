#include "anyon/manybody.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>

#include "anyon/field_ops.hpp"
#include "anyon/random_fields.hpp"

namespace anyon {

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void require_normalized(const ComplexField& u, const char* what) {
    const double nu = norm(u);
    if (!(std::abs(nu - 1.0) <= 1e-8))
        throw PreconditionError(std::string(what) + ": u must be normalized, got norm " + std::to_string(nu));
}

double dot_sum(const VectorField2& A, const VectorField2& B) {
    double acc = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) acc += A.x[i] * B.x[i] + A.y[i] * B.y[i];
    return acc * A.grid.cell_area();
}

// Cosine and sine transforms h^2 sum f(x) cos(k.x), h^2 sum f(x) sin(k.x) over
// the actual sample positions, indexed [my][mx] like the FFT lattice.
std::pair<RowMat, RowMat> trig_transforms(const Grid2D& g, const std::vector<double>& f) {
    const int n = g.n;
    RowMat C(n, n), S(n, n);
    for (int m = 0; m < n; ++m)
        for (int i = 0; i < n; ++i) {
            C(m, i) = std::cos(g.wavenumber(m) * g.coord(i));
            S(m, i) = std::sin(g.wavenumber(m) * g.coord(i));
        }
    const Eigen::Map<const RowMat> F(f.data(), n, n);  // F(iy, ix)
    const RowMat FC = F * C.transpose();
    const RowMat FS = F * S.transpose();
    RowMat fc = (C * FC - S * FS) * g.cell_area();
    RowMat fs = (S * FC + C * FS) * g.cell_area();
    return {std::move(fc), std::move(fs)};
}

} // namespace

ProductEnergyBreakdown product_state_energy(const ComplexField& u_in, int N, const ModelParams& params) {
    if (N < 2) throw PreconditionError("product_state_energy: N must be >= 2");
    require_normalized(u_in, "product_state_energy");
    if (params.R.singular())
        throw DomainError("product_state_energy: R = 0 makes the self-pair term diverge (|grad w_0|^2 is not "
                          "locally integrable)");
    const AverageFieldModel model(u_in.grid, params);
    const ComplexField u = params.dealias ? dealias(u_in) : u_in;
    const Grid2D& g = u.grid;

    ProductEnergyBreakdown out;
    out.N = N;
    out.beta = params.beta;

    const ComplexPair d = covariant_derivative(u, model.external_gauge());
    double kin = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        kin += std::norm(d.x[i]) + std::norm(d.y[i]) + model.trap()[i] * std::norm(u[i]);
    out.kinetic = kin * g.cell_area();

    const RealField rho = density(u);
    const VectorField2 A = model.kernel().convolve(rho);
    const VectorField2 J = current_density(u, model.external_gauge());
    out.mixed = 2.0 * dot_sum(A, J);

    double three = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) three += rho[i] * (A.x[i] * A.x[i] + A.y[i] * A.y[i]);
    out.three_body = three * g.cell_area();

    const RealField Srho = SelfPairKernel(g, params.R).convolve(rho);
    double self = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) self += rho[i] * Srho[i];
    out.self_pair = self * g.cell_area();

    out.total_per_particle = out.kinetic + params.beta * out.mixed + out.weight_three() * out.three_body +
                             out.weight_self() * out.self_pair;
    return out;
}

std::pair<double, double> mixed_term_dual_route(const ComplexField& u_in, const ModelParams& params) {
    require_normalized(u_in, "mixed_term_dual_route");
    const AverageFieldModel model(u_in.grid, params);
    const ComplexField u = params.dealias ? dealias(u_in) : u_in;
    const Grid2D& g = u.grid;

    const RealField rho = density(u);
    const VectorField2 J = current_density(u, model.external_gauge());
    const double route_a = 2.0 * dot_sum(model.kernel().convolve(rho), J);

    // mixed = (4 pi / L^2) sum_k chi(|k|R)/|k| (e_perp . J_s rho_c - e_perp . J_c rho_s)
    const auto [rc, rs] = trig_transforms(g, rho.values);
    const auto [jxc, jxs] = trig_transforms(g, J.x);
    const auto [jyc, jys] = trig_transforms(g, J.y);
    double acc = 0.0;
    for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n; ++mx) {
            if (g.is_nyquist(mx) || g.is_nyquist(my) || (mx == 0 && my == 0)) continue;
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            const double k = std::hypot(kx, ky);
            const double ex = -ky / k, ey = kx / k;
            const double w = (params.R.singular() ? 1.0 : disc_form_factor(k * params.R.value)) / k;
            const double js = ex * jxs(my, mx) + ey * jys(my, mx);
            const double jc = ex * jxc(my, mx) + ey * jyc(my, mx);
            acc += w * (js * rc(my, mx) - jc * rs(my, mx));
        }
    const double route_b = 4.0 * std::numbers::pi / (g.L * g.L) * acc;
    return {route_a, route_b};
}

std::size_t two_body_memory_estimate(const Grid2D& g, int m) {
    const std::size_t m2 = static_cast<std::size_t>(m) * m;
    const std::size_t chunk = std::min<std::size_t>(m2, 64);
    const std::size_t fields = (3 * m2 + 3 * chunk) * g.size() * sizeof(cplx);
    const std::size_t mats = 2 * m2 * m2 * sizeof(cplx);
    return fields + mats;
}

TwoBodyIntegrals compute_two_body_integrals(const SpectralBasis& basis, const ModelParams& params,
                                            std::size_t memory_budget) {
    if (params.R.singular())
        throw DomainError("compute_two_body_integrals: R = 0 makes |grad w_0|^2 non-integrable");
    const int m = static_cast<int>(basis.size());
    if (m < 1) throw PreconditionError("compute_two_body_integrals: empty basis");
    const Grid2D& g = basis.grid;
    const std::size_t need = two_body_memory_estimate(g, m);
    if (need > memory_budget)
        throw PreconditionError("compute_two_body_integrals: basis size m = " + std::to_string(m) + " needs about " +
                                std::to_string(need >> 20) + " MiB, above the budget of " +
                                std::to_string(memory_budget >> 20) + " MiB");

    const AverageFieldModel model(g, params);
    const GaugeKernel& K = model.kernel();
    const SelfPairKernel S(g, params.R);
    const auto N = static_cast<Eigen::Index>(g.size());
    const Eigen::Index m2 = static_cast<Eigen::Index>(m) * m;

    std::vector<ComplexPair> Dphi;
    for (const auto& phi : basis.modes) Dphi.push_back(covariant_derivative(phi, model.external_gauge()));

    Eigen::MatrixXcd Jm(2 * N, m2), Rm(N, m2);
    for (int a = 0; a < m; ++a)
        for (int c = 0; c < m; ++c) {
            const Eigen::Index p = static_cast<Eigen::Index>(a) * m + c;
            const auto& fa = basis.modes[static_cast<std::size_t>(a)];
            const auto& fc = basis.modes[static_cast<std::size_t>(c)];
            const auto& da = Dphi[static_cast<std::size_t>(a)];
            const auto& dc = Dphi[static_cast<std::size_t>(c)];
            for (Eigen::Index i = 0; i < N; ++i) {
                const auto s = static_cast<std::size_t>(i);
                const cplx ca = std::conj(fa[s]);
                Rm(i, p) = ca * fc[s];
                Jm(i, p) = std::conj(da.x[s]) * fc[s] + ca * dc.x[s];
                Jm(N + i, p) = std::conj(da.y[s]) * fc[s] + ca * dc.y[s];
            }
        }

    TwoBodyIntegrals out;
    out.m = m;
    out.lambda = basis.eigenvalues;
    out.G2.resize(m2, m2);
    out.GS.resize(m2, m2);
    const Eigen::Index chunk = std::min<Eigen::Index>(m2, 64);
    Eigen::MatrixXcd Ablk(2 * N, chunk), Sblk(N, chunk);
    std::vector<cplx> rho(static_cast<std::size_t>(N));
    for (Eigen::Index q0 = 0; q0 < m2; q0 += chunk) {
        const Eigen::Index len = std::min(chunk, m2 - q0);
        for (Eigen::Index q = 0; q < len; ++q) {
            for (Eigen::Index i = 0; i < N; ++i) rho[static_cast<std::size_t>(i)] = Rm(i, q0 + q);
            const ComplexPair A = K.convolve(std::span<const cplx>(rho));
            const auto Sr = S.convolve(std::span<const cplx>(rho));
            for (Eigen::Index i = 0; i < N; ++i) {
                const auto s = static_cast<std::size_t>(i);
                Ablk(i, q) = A.x[s];
                Ablk(N + i, q) = A.y[s];
                Sblk(i, q) = Sr[s];
            }
        }
        out.G2.middleCols(q0, len).noalias() = Jm.transpose() * Ablk.leftCols(len);
        out.GS.middleCols(q0, len).noalias() = Rm.transpose() * Sblk.leftCols(len);
    }
    out.G2 *= g.cell_area();
    out.GS *= g.cell_area();
    return out;
}

TwoBodyMatrix assemble_H2(const TwoBodyIntegrals& ints, double beta, int m_sub) {
    const int M = ints.m;
    const int m = m_sub < 0 ? M : m_sub;
    if (m < 1 || m > M) throw PreconditionError("assemble_H2: sub-basis size out of range");
    const double alpha = beta;  // alpha = beta / (N - 1) at N = 2
    auto pair = [M](int a, int c) { return static_cast<Eigen::Index>(a) * M + c; };
    auto T = [&](int a, int b, int c, int d) {
        cplx v = (a == c && b == d) ? cplx(ints.lambda[a] + ints.lambda[b]) : cplx{};
        v += alpha * (ints.G2(pair(a, c), pair(b, d)) + ints.G2(pair(b, d), pair(a, c)));
        v += 2.0 * alpha * alpha * ints.GS(pair(a, c), pair(b, d));
        return v;
    };

    TwoBodyMatrix out;
    out.m = m;
    for (int a = 0; a < m; ++a)
        for (int b = a; b < m; ++b) out.labels.emplace_back(a, b);
    const auto dim = static_cast<Eigen::Index>(out.labels.size());
    out.H.resize(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        const auto [a, b] = out.labels[static_cast<std::size_t>(i)];
        const double na = a == b ? 0.5 : std::sqrt(0.5);
        for (Eigen::Index j = 0; j < dim; ++j) {
            const auto [c, d] = out.labels[static_cast<std::size_t>(j)];
            const double nc = c == d ? 0.5 : std::sqrt(0.5);
            out.H(i, j) = na * nc * (T(a, b, c, d) + T(a, b, d, c) + T(b, a, c, d) + T(b, a, d, c));
        }
    }
    const double scale = out.H.cwiseAbs().maxCoeff();
    out.asymmetry = scale > 0.0 ? (out.H - out.H.adjoint()).cwiseAbs().maxCoeff() / scale : 0.0;
    out.flagged = out.asymmetry > 1e-6;
    out.H = (0.5 * (out.H + out.H.adjoint())).eval();
    return out;
}

TwoBodyMatrix assemble_H2(const SpectralBasis& basis, const ModelParams& params, std::size_t memory_budget) {
    return assemble_H2(compute_two_body_integrals(basis, params, memory_budget), params.beta);
}

double ground_energy_2body(const TwoBodyMatrix& H2) {
    if (H2.H.rows() == 0) throw PreconditionError("ground_energy_2body: empty matrix");
    const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(H2.H, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success || !std::isfinite(es.eigenvalues()[0]))
        throw NumericalError("ground_energy_2body: eigensolver failed (dimension " + std::to_string(H2.H.rows()) +
                             ", max |H| " + std::to_string(H2.H.cwiseAbs().maxCoeff()) + ", asymmetry " +
                             std::to_string(H2.asymmetry) + ")");
    return 0.5 * es.eigenvalues()[0];
}

ThreeBodyTrial ThreeBodyTrial::permuted(const std::array<int, 3>& perm) const {
    ThreeBodyTrial out;
    out.factors = factors;
    for (const Term& t : terms) {
        const std::array<int, 3> f{t.f1, t.f2, t.f3};
        out.terms.push_back({t.c, f[perm[0]], f[perm[1]], f[perm[2]]});
    }
    return out;
}

ThreeBodyTrial ThreeBodyTrial::symmetrized() const {
    ThreeBodyTrial out;
    out.factors = factors;
    std::array<int, 3> perm{0, 1, 2};
    do {
        for (const Term& t : permuted(perm).terms) out.terms.push_back({t.c / 6.0, t.f1, t.f2, t.f3});
    } while (std::next_permutation(perm.begin(), perm.end()));
    return out;
}

cplx inner_product(const ThreeBodyTrial& a, const ThreeBodyTrial& b) {
    cplx acc{};
    for (const auto& s : a.terms)
        for (const auto& t : b.terms)
            acc += std::conj(s.c) * t.c * inner_product(a.factors[s.f1], b.factors[t.f1]) *
                   inner_product(a.factors[s.f2], b.factors[t.f2]) * inner_product(a.factors[s.f3], b.factors[t.f3]);
    return acc;
}

namespace {

// Evaluates <Psi, K12 . K13 Psi> and <Psi, (1 + (p_1^A)^2) Psi> for a trial
// whose terms all refer to the same factor list; pair convolutions are cached.
struct ThreeBodyEvaluator {
    const ThreeBodyTrial& psi;
    const AverageFieldModel& model;
    std::map<std::pair<int, int>, ComplexPair> conv;
    std::vector<ComplexPair> dfac;
    Eigen::MatrixXcd gram, kin_gram;

    ThreeBodyEvaluator(const ThreeBodyTrial& p, const AverageFieldModel& m) : psi(p), model(m) {
        const auto nf = static_cast<Eigen::Index>(psi.factors.size());
        gram.resize(nf, nf);
        kin_gram.resize(nf, nf);
        for (const auto& f : psi.factors) dfac.push_back(covariant_derivative(f, model.external_gauge()));
        for (Eigen::Index i = 0; i < nf; ++i)
            for (Eigen::Index j = 0; j < nf; ++j) {
                const auto si = static_cast<std::size_t>(i), sj = static_cast<std::size_t>(j);
                gram(i, j) = inner_product(psi.factors[si], psi.factors[sj]);
                kin_gram(i, j) = inner_product(dfac[si].x, dfac[sj].x) + inner_product(dfac[si].y, dfac[sj].y);
            }
    }

    const ComplexPair& A(int i, int j) {
        auto it = conv.find({i, j});
        if (it != conv.end()) return it->second;
        const auto& fi = psi.factors[static_cast<std::size_t>(i)];
        const auto& fj = psi.factors[static_cast<std::size_t>(j)];
        std::vector<cplx> rho(fi.size());
        for (std::size_t s = 0; s < rho.size(); ++s) rho[s] = std::conj(fi[s]) * fj[s];
        return conv.emplace(std::make_pair(i, j), model.kernel().convolve(std::span<const cplx>(rho))).first->second;
    }

    double form() {
        cplx acc{};
        const double h2 = model.grid().cell_area();
        for (const auto& s : psi.terms)
            for (const auto& t : psi.terms) {
                const ComplexPair& Ab = A(s.f2, t.f2);
                const ComplexPair& Ac = A(s.f3, t.f3);
                const auto& a1 = psi.factors[static_cast<std::size_t>(s.f1)];
                const auto& a2 = psi.factors[static_cast<std::size_t>(t.f1)];
                cplx sum{};
                for (std::size_t i = 0; i < a1.size(); ++i)
                    sum += std::conj(a1[i]) * a2[i] * (Ab.x[i] * Ac.x[i] + Ab.y[i] * Ac.y[i]);
                acc += std::conj(s.c) * t.c * sum * h2;
            }
        return acc.real();
    }

    double one_plus_kinetic() const {
        cplx acc{};
        for (const auto& s : psi.terms)
            for (const auto& t : psi.terms)
                acc += std::conj(s.c) * t.c * gram(s.f2, t.f2) * gram(s.f3, t.f3) *
                       (gram(s.f1, t.f1) + kin_gram(s.f1, t.f1));
        return acc.real();
    }

    double norm_sq() const {
        cplx acc{};
        for (const auto& s : psi.terms)
            for (const auto& t : psi.terms)
                acc += std::conj(s.c) * t.c * gram(s.f1, t.f1) * gram(s.f2, t.f2) * gram(s.f3, t.f3);
        return acc.real();
    }
};

} // namespace

ThreeBodyValue three_body_form(const ThreeBodyTrial& psi, const ModelParams& params) {
    if (psi.factors.empty() || psi.terms.empty()) throw PreconditionError("three_body_form: empty trial");
    const Grid2D& g = psi.factors.front().grid;
    for (const auto& f : psi.factors) require_same_grid(f.grid, g, "three_body_form");
    for (const auto& t : psi.terms)
        for (int f : {t.f1, t.f2, t.f3})
            if (f < 0 || f >= static_cast<int>(psi.factors.size()))
                throw ShapeError("three_body_form: factor index out of range");

    const AverageFieldModel model(g, params);
    ThreeBodyEvaluator raw(psi, model);
    const double nn = raw.norm_sq();
    if (!(nn > 0.0)) throw DomainError("three_body_form: zero trial state");
    // ||Psi - P23 Psi||^2 / ||Psi||^2
    const ThreeBodyTrial swapped = psi.permuted({0, 2, 1});
    const double defect = (2.0 * nn - 2.0 * inner_product(psi, swapped).real()) / nn;
    if (defect > 1e-10)
        throw PreconditionError("three_body_form: trial is not symmetric under exchange of particles 2 and 3 "
                                "(relative defect " + std::to_string(defect) + ")");

    ThreeBodyValue v;
    v.raw = raw.form() / nn;
    const ThreeBodyTrial sym = psi.symmetrized();
    ThreeBodyEvaluator bos(sym, model);
    v.norm_sq = bos.norm_sq();
    if (!(v.norm_sq > 1e-14 * nn)) throw DomainError("three_body_form: symmetrized trial vanishes");
    v.bosonic = bos.form() / v.norm_sq;
    v.kinetic = bos.one_plus_kinetic() / v.norm_sq;
    v.ratio = v.bosonic / v.kinetic;
    return v;
}

ThreeBodyTrial random_three_body_trial(const Grid2D& g, std::uint64_t seed, int max_terms) {
    if (max_terms < 1) throw PreconditionError("random_three_body_trial: max_terms must be >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> count(1, max_terms);
    std::uniform_real_distribution<double> width(0.8, 1.8);
    std::normal_distribution<double> normal;
    ThreeBodyTrial psi;
    const int T = count(rng);
    for (int t = 0; t < T; ++t) {
        psi.factors.push_back(smooth_random_field(g, rng(), width(rng)));
        psi.factors.push_back(smooth_random_field(g, rng(), width(rng)));
        const double re = normal(rng);
        const double im = normal(rng);
        const int u = 2 * t, v = 2 * t + 1;
        psi.terms.push_back({cplx(re, im), u, v, v});
    }
    return psi;
}

ThreeBodyCheck three_body_positivity_check(const Grid2D& g, const ModelParams& params, int samples,
                                           std::uint64_t seed) {
    if (samples < 1) throw PreconditionError("three_body_positivity_check: samples must be >= 1");
    ThreeBodyCheck out;
    out.min_raw = std::numeric_limits<double>::infinity();
    out.min_bosonic = std::numeric_limits<double>::infinity();
    for (int i = 0; i < samples; ++i) {
        const auto v = three_body_form(random_three_body_trial(g, seed + static_cast<std::uint64_t>(i)), params);
        out.min_raw = std::min(out.min_raw, v.raw);
        out.min_bosonic = std::min(out.min_bosonic, v.bosonic);
        out.fitted_C = std::max(out.fitted_C, v.ratio);
        out.values.push_back(v);
    }
    out.nonnegative = out.min_bosonic >= -1e-10;
    return out;
}

} // namespace anyon
