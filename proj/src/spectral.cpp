#include "anyon/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "anyon/eigensolver.hpp"
#include "anyon/fft.hpp"
#include "anyon/field_ops.hpp"

namespace anyon {

namespace {

bool has_gauge(const VectorField2& A) {
    for (std::size_t i = 0; i < A.size(); ++i)
        if (A.x[i] != 0.0 || A.y[i] != 0.0) return true;
    return false;
}

// Clusters of (numerically) degenerate eigenvalues as [begin, end) ranges.
std::vector<std::pair<int, int>> clusters(const std::vector<double>& ev) {
    std::vector<std::pair<int, int>> out;
    int b = 0;
    for (int i = 1; i <= static_cast<int>(ev.size()); ++i) {
        if (i == static_cast<int>(ev.size()) ||
            ev[i] - ev[i - 1] > cluster_tolerance * std::max(1.0, std::abs(ev[i - 1]))) {
            out.emplace_back(b, i);
            b = i;
        }
    }
    return out;
}

bool in_window(double lambda, double lo, double hi) {
    const double v = std::sqrt(std::max(lambda, 0.0));
    const bool above_lo = lo <= 0.0 || v >= lo * (1.0 - cluster_tolerance);
    const bool below_hi = std::isinf(hi) || v < hi * (1.0 - cluster_tolerance);
    return above_lo && below_hi;
}

std::vector<int> window_modes(const SpectralBasis& basis, double lo, double hi) {
    std::vector<int> modes;
    for (auto [b, e] : clusters(basis.eigenvalues)) {
        double mean = 0.0;
        for (int i = b; i < e; ++i) mean += basis.eigenvalues[i];
        mean /= (e - b);
        if (in_window(mean, lo, hi))
            for (int i = b; i < e; ++i) modes.push_back(i);
    }
    return modes;
}

// Largest Lambda^2 for which every mode below it has been computed and trusted.
void require_resolved(const SpectralBasis& basis, double Lambda, const char* what) {
    if (basis.size() == 0) throw PreconditionError(std::string(what) + ": empty basis");
    const double top = basis.eigenvalues.back();
    if (Lambda * Lambda > top * (1.0 + cluster_tolerance))
        throw PreconditionError(std::string(what) + ": Lambda^2 = " + std::to_string(Lambda * Lambda) +
                                " lies above the computed spectrum (largest eigenvalue " + std::to_string(top) +
                                "); compute more modes");
    if (Lambda * Lambda > basis.grid.reliable_energy())
        throw PreconditionError(std::string(what) + ": Lambda^2 = " + std::to_string(Lambda * Lambda) +
                                " exceeds the reliable energy " + std::to_string(basis.grid.reliable_energy()) +
                                " of the grid");
}

} // namespace

OneBodyOperator::OneBodyOperator(const Grid2D& g, const ModelParams& params)
    : grid_(g), V_(build_trap(params.trap, g)), Ae_(build_gauge(params.gauge, g)), magnetic_(has_gauge(Ae_)) {
    vmin_ = *std::min_element(V_.values.begin(), V_.values.end());
}

void OneBodyOperator::apply_raw(const cplx* in, cplx* out) const {
    const Grid2D& g = grid_;
    const auto& fft = Fft2D::get(g.n);
    const std::size_t N = g.size();
    std::span<const cplx> u(in, N);
    const auto uhat = fft.forward(u);
    if (!magnetic_) {
        std::vector<cplx> t(N);
        for (int my = 0; my < g.n; ++my)
            for (int mx = 0; mx < g.n; ++mx) {
                const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
                t[g.index(mx, my)] = (kx * kx + ky * ky) * uhat[g.index(mx, my)];
            }
        fft.inverse(t, std::span<cplx>(out, N));
        for (std::size_t i = 0; i < N; ++i) out[i] += V_[i] * in[i];
        return;
    }
    // sum_j (p_j + A_j)^2 u with p_j the full-lattice multiplier
    std::vector<cplx> acc(N, cplx{});
    std::vector<cplx> t(N), v(N), vh;
    for (int dir = 0; dir < 2; ++dir) {
        const auto& A = dir == 0 ? Ae_.x : Ae_.y;
        auto k_of = [&](std::size_t i) {
            const int mx = static_cast<int>(i % g.n), my = static_cast<int>(i / g.n);
            return dir == 0 ? g.wavenumber(mx) : g.wavenumber(my);
        };
        for (std::size_t i = 0; i < N; ++i) t[i] = k_of(i) * uhat[i];
        fft.inverse(t, v);
        for (std::size_t i = 0; i < N; ++i) v[i] += A[i] * in[i];
        vh = fft.forward(v);
        for (std::size_t i = 0; i < N; ++i) t[i] = k_of(i) * vh[i];
        fft.inverse(t, t);
        for (std::size_t i = 0; i < N; ++i) acc[i] += t[i] + A[i] * v[i];
    }
    for (std::size_t i = 0; i < N; ++i) out[i] = acc[i] + V_[i] * in[i];
}

ComplexField OneBodyOperator::apply(const ComplexField& u) const {
    require_same_grid(u.grid, grid_, "OneBodyOperator::apply");
    ComplexField out(grid_);
    apply_raw(u.values.data(), out.values.data());
    return out;
}

void OneBodyOperator::apply_block(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) const {
    out.resize(in.rows(), in.cols());
    for (Eigen::Index j = 0; j < in.cols(); ++j) apply_raw(in.col(j).data(), out.col(j).data());
}

void OneBodyOperator::precondition_block(const Eigen::MatrixXcd& in, const Eigen::VectorXd& shifts,
                                         Eigen::MatrixXcd& out) const {
    const Grid2D& g = grid_;
    const auto& fft = Fft2D::get(g.n);
    const std::size_t N = g.size();
    std::vector<double> k2(N);
    for (int my = 0; my < g.n; ++my)
        for (int mx = 0; mx < g.n; ++mx) {
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            k2[g.index(mx, my)] = kx * kx + ky * ky;
        }
    out.resize(in.rows(), in.cols());
    std::vector<cplx> t(N);
    std::vector<cplx> w(N);
    for (Eigen::Index j = 0; j < in.cols(); ++j) {
        const double sig = shifts[j];
        // D (|k|^2 + sig)^{-1} D with D = sqrt(sig / (V - vmin + sig)): close to
        // (|k|^2 + V + sig)^{-1} both where V dominates and where |k|^2 does.
        for (std::size_t i = 0; i < N; ++i) w[i] = in(static_cast<Eigen::Index>(i), j) * std::sqrt(sig / (V_[i] - vmin_ + sig));
        fft.forward(w, t);
        for (std::size_t i = 0; i < N; ++i) t[i] /= k2[i] + sig;
        fft.inverse(t, w);
        for (std::size_t i = 0; i < N; ++i) out(static_cast<Eigen::Index>(i), j) = w[i] * std::sqrt(sig / (V_[i] - vmin_ + sig));
    }
}

SpectralBasis SpectralBasis::subset(const std::vector<int>& idx) const {
    SpectralBasis out;
    out.grid = grid;
    for (int i : idx) {
        if (i < 0 || i >= static_cast<int>(size())) throw ShapeError("SpectralBasis::subset: index out of range");
        out.eigenvalues.push_back(eigenvalues[i]);
        out.modes.push_back(modes[i]);
        out.residuals.push_back(residuals[i]);
    }
    return out;
}

Eigen::MatrixXd OneBodyOperator::dense_real() const {
    if (magnetic_) throw PreconditionError("OneBodyOperator::dense_real: operator has a gauge field");
    const Grid2D& g = grid_;
    const int n = g.n;
    // 1D spectral -d^2/dx^2: T1[i][j] = (1/n) sum_m k_m^2 cos(k_m (x_i - x_j))
    std::vector<double> t1(static_cast<std::size_t>(n));
    for (int d = 0; d < n; ++d) {
        double acc = 0.0;
        for (int m = 0; m < n; ++m) {
            const double k = g.wavenumber(m);
            acc += k * k * std::cos(2.0 * std::numbers::pi * g.signed_mode(m) * d / n);
        }
        t1[static_cast<std::size_t>(d)] = acc / n;
    }
    auto T1 = [&](int i, int j) { return t1[static_cast<std::size_t>(((i - j) % n + n) % n)]; };
    const auto N = static_cast<Eigen::Index>(g.size());
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(N, N);
    for (int iy = 0; iy < n; ++iy)
        for (int ix = 0; ix < n; ++ix) {
            const auto r = static_cast<Eigen::Index>(g.index(ix, iy));
            for (int jx = 0; jx < n; ++jx) H(r, static_cast<Eigen::Index>(g.index(jx, iy))) += T1(ix, jx);
            for (int jy = 0; jy < n; ++jy) H(r, static_cast<Eigen::Index>(g.index(ix, jy))) += T1(iy, jy);
            H(r, r) += V_[static_cast<std::size_t>(r)];
        }
    return H;
}

Eigen::MatrixXcd OneBodyOperator::dense_complex() const {
    const auto N = static_cast<Eigen::Index>(grid_.size());
    Eigen::MatrixXcd H(N, N);
    std::vector<cplx> e(static_cast<std::size_t>(N), cplx{});
    for (Eigen::Index j = 0; j < N; ++j) {
        e[static_cast<std::size_t>(j)] = 1.0;
        apply_raw(e.data(), H.col(j).data());
        e[static_cast<std::size_t>(j)] = 0.0;
    }
    return 0.5 * (H + H.adjoint());
}

SpectralBasis build_spectrum(const Grid2D& g, const ModelParams& params, int m, int budget, EigenMethod method) {
    g.validate();
    params.validate(g);
    if (m < 1) throw PreconditionError("build_spectrum: m must be >= 1");
    if (m > budget)
        throw PreconditionError("build_spectrum: m = " + std::to_string(m) + " exceeds the dimension budget " +
                                std::to_string(budget));
    if (static_cast<std::size_t>(m) > g.size() / 4)
        throw PreconditionError("build_spectrum: m too large for the grid");
    const OneBodyOperator h(g, params);
    if (method == EigenMethod::automatic)
        method = g.size() <= 64 * 64 ? EigenMethod::dense : EigenMethod::lobpcg;

    EigenPairs res;
    if (method == EigenMethod::dense) {
        if (h.magnetic()) {
            Eigen::MatrixXcd H = h.dense_complex();
            res = dense_lowest(H, m);
        } else {
            Eigen::MatrixXd H = h.dense_real();
            res = dense_lowest(H, m);
        }
    } else {
        const double vmin = *std::min_element(h.trap().values.begin(), h.trap().values.end());
        // Shift each residual by its Ritz value measured from inf V (at least 1).
        const double floor = 1.0;
        res = lobpcg([&](const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) { h.apply_block(in, out); },
                     [&](const Eigen::MatrixXcd& in, const Eigen::VectorXd& ritz, Eigen::MatrixXcd& out) {
                         Eigen::VectorXd shifts = (ritz.array() - vmin).cwiseMax(floor).matrix();
                         h.precondition_block(in, shifts, out);
                     },
                     static_cast<Eigen::Index>(g.size()), m);
    }

    SpectralBasis basis;
    basis.grid = g;
    basis.eigenvalues = res.values;
    const double scale = 1.0 / g.spacing();
    for (int j = 0; j < m; ++j) {
        ComplexField phi(g);
        for (std::size_t i = 0; i < g.size(); ++i) phi[i] = res.vectors(static_cast<Eigen::Index>(i), j) * scale;
        // residual in the quadrature norm of the normalized mode
        const ComplexField r = h.apply(phi) - cplx(res.values[static_cast<std::size_t>(j)]) * phi;
        basis.residuals.push_back(norm(r));
        basis.modes.push_back(std::move(phi));
    }
    return basis;
}

bool Projector::contains(int a) const { return std::binary_search(modes.begin(), modes.end(), a); }

Eigen::MatrixXd Projector::matrix() const {
    Eigen::MatrixXd P = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(basis_size),
                                              static_cast<Eigen::Index>(basis_size));
    for (int a : modes) P(a, a) = 1.0;
    return P;
}

Projector build_projector(const SpectralBasis& basis, double lo, double hi) {
    if (!(lo >= 0.0) || !(lo < hi)) throw PreconditionError("build_projector: need 0 <= lo < hi");
    if (!std::isinf(hi)) require_resolved(basis, hi, "build_projector");
    Projector P;
    P.lo = lo;
    P.hi = hi;
    P.basis_size = basis.size();
    P.modes = window_modes(basis, lo, hi);
    return P;
}

int count_below(const SpectralBasis& basis, double Lambda) {
    return static_cast<int>(window_modes(basis, 0.0, Lambda).size());
}

ClrScan clr_dimension_scan(const SpectralBasis& basis, double s, const std::vector<double>& Lambdas) {
    if (Lambdas.size() < 4) throw PreconditionError("clr_dimension_scan: need at least 4 scan points");
    if (!(s > 0.0)) throw PreconditionError("clr_dimension_scan: s must be > 0");
    ClrScan scan;
    scan.Lambdas = Lambdas;
    scan.exponent_bound = 2.0 + 4.0 / s;
    std::vector<double> lx, ly;
    for (double L : Lambdas) {
        if (!(L > 0.0)) throw PreconditionError("clr_dimension_scan: Lambda must be > 0");
        require_resolved(basis, L, "clr_dimension_scan");
        const int c = count_below(basis, L);
        if (c == 0)
            throw PreconditionError("clr_dimension_scan: no modes below Lambda = " + std::to_string(L));
        scan.counts.push_back(c);
        lx.push_back(std::log(L));
        ly.push_back(std::log(static_cast<double>(c)));
    }
    const double nx = static_cast<double>(lx.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i] / nx;
        my += ly[i] / nx;
    }
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (!(sxx > 0.0)) throw PreconditionError("clr_dimension_scan: scan points must differ");
    scan.slope = sxy / sxx;
    scan.intercept = my - scan.slope * mx;
    scan.slope_within_bound = scan.slope <= scan.exponent_bound + 0.3;
    return scan;
}

PlaneWaveReport plane_wave_bound_check(const SpectralBasis& basis, double Lambda, const std::vector<Vec2>& ks) {
    const Projector P = build_projector(basis, 0.0, Lambda);
    if (P.rank() == 0) throw PreconditionError("plane_wave_bound_check: empty window");
    const Grid2D& g = basis.grid;

    // conj(phi_a) phi_b e_k contains frequencies up to |k| + 2 k_grid; sample the
    // modes' trigonometric interpolants finely enough that the quadrature of
    // the product does not alias.
    double kmax = 0.0;
    for (const Vec2& k : ks) kmax = std::max(kmax, length(k));
    const int q = 1 + static_cast<int>(std::floor(1.0 + kmax * g.L / (2.0 * std::numbers::pi * g.n)));
    const Grid2D fine(g.L, q * g.n);
    const auto N = static_cast<Eigen::Index>(fine.size());
    const auto r = static_cast<Eigen::Index>(P.rank());
    std::vector<ComplexField> phi;
    for (int a : P.modes) phi.push_back(fourier_interpolate(basis.modes[static_cast<std::size_t>(a)], fine.n));

    // Pair densities conj(phi_a) phi_b for a <= b, one column each.
    const Eigen::Index npairs = r * (r + 1) / 2;
    Eigen::MatrixXcd pairs(N, npairs);
    {
        Eigen::Index c = 0;
        for (Eigen::Index a = 0; a < r; ++a)
            for (Eigen::Index b = a; b < r; ++b, ++c)
                for (Eigen::Index i = 0; i < N; ++i)
                    pairs(i, c) = std::conj(phi[static_cast<std::size_t>(a)][static_cast<std::size_t>(i)]) *
                                  phi[static_cast<std::size_t>(b)][static_cast<std::size_t>(i)];
    }

    PlaneWaveReport rep;
    rep.Lambda = Lambda;
    rep.rank = P.rank();
    Eigen::VectorXcd f(N);
    for (const Vec2& k : ks) {
        for (bool cosine : {true, false}) {
            for (int iy = 0; iy < fine.n; ++iy)
                for (int ix = 0; ix < fine.n; ++ix) {
                    const double ph = k.x * fine.coord(ix) + k.y * fine.coord(iy);
                    f[static_cast<Eigen::Index>(fine.index(ix, iy))] = cosine ? std::cos(ph) : std::sin(ph);
                }
            const Eigen::VectorXcd v = fine.cell_area() * (pairs.transpose() * f);
            Eigen::MatrixXcd M(r, r);
            Eigen::Index c = 0;
            for (Eigen::Index a = 0; a < r; ++a)
                for (Eigen::Index b = a; b < r; ++b, ++c) {
                    M(a, b) = v[c];
                    M(b, a) = std::conj(v[c]);
                }
            const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
            const double emax = es.eigenvalues().cwiseAbs().maxCoeff();
            PlaneWaveRow row;
            row.k = k;
            row.cosine = cosine;
            row.max_abs_eig = emax;
            const double k2 = k.x * k.x + k.y * k.y;
            row.C = emax * k2 / (Lambda * Lambda);
            rep.max_abs_eig = std::max(rep.max_abs_eig, emax);
            if (std::sqrt(k2) > Lambda) rep.C_star = std::max(rep.C_star, row.C);
            rep.rows.push_back(row);
        }
    }
    return rep;
}

std::vector<Vec2> default_k_scan(double Lambda) {
    const double ratios[] = {1.01, 1.25, 1.5, 2.0, 2.5, 3.0, 4.0, 6.0, 8.0};
    const double angles[] = {0.0, std::numbers::pi / 6.0, std::numbers::pi / 4.0, std::numbers::pi / 3.0};
    std::vector<Vec2> ks;
    for (double t : ratios)
        for (double a : angles) ks.push_back({t * Lambda * std::cos(a), t * Lambda * std::sin(a)});
    return ks;
}

SmearedBoundReport smeared_bound_check(const std::vector<double>& Rs, int radial_samples) {
    if (radial_samples < 10) throw PreconditionError("smeared_bound_check: too few samples");
    SmearedBoundReport rep;
    rep.worst_w_margin = std::numeric_limits<double>::infinity();
    rep.worst_outside_margin = std::numeric_limits<double>::infinity();
    const double angles[] = {0.0, 0.7, 1.9, 3.3, 4.4, 5.8};
    for (double R : Rs) {
        if (!(R > 0.0 && R <= 0.5)) throw PreconditionError("smeared_bound_check: R must lie in (0, 0.5]");
        SmearedBoundRow row;
        row.R = R;
        row.w_bound = 1.0 + std::abs(std::log(R));
        std::vector<double> inner, outer;
        for (int j = 0; j <= radial_samples; ++j) inner.push_back(static_cast<double>(j) / radial_samples);
        inner.push_back(R);
        for (int j = 0; j <= radial_samples; ++j) outer.push_back(1.0 + 9.0 * static_cast<double>(j) / radial_samples);
        for (double a : angles) {
            const double c = std::cos(a), s = std::sin(a);
            for (double r : inner) {
                const Vec2 x{r * c, r * s};
                row.max_w_ball = std::max(row.max_w_ball, std::abs(eval_w_R(x, R)));
                row.sup_grad = std::max(row.sup_grad, length(grad_w_R(x, R)));
            }
            for (double r : outer) {
                const Vec2 x{r * c, r * s};
                const double gr = length(grad_w_R(x, R));
                row.sup_grad = std::max(row.sup_grad, gr);
                row.sup_grad_outside = std::max(row.sup_grad_outside, gr);
            }
        }
        rep.worst_w_margin = std::min(rep.worst_w_margin, row.w_bound - row.max_w_ball);
        rep.worst_grad_deviation = std::max(rep.worst_grad_deviation, std::abs(row.sup_grad - 1.0 / R));
        rep.worst_outside_margin = std::min(rep.worst_outside_margin, 1.0 - row.sup_grad_outside);
        rep.rows.push_back(row);
    }
    rep.ok = rep.worst_w_margin >= 0.0 && rep.worst_outside_margin >= 0.0 &&
             rep.worst_grad_deviation <= 1e-12 * (1.0 / (Rs.empty() ? 1.0 : *std::min_element(Rs.begin(), Rs.end())));
    return rep;
}

} // namespace anyon
