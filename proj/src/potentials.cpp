#include "anyon/potentials.hpp"

#include <cmath>
#include <numbers>

#include "anyon/fft.hpp"

namespace anyon {

namespace {
constexpr double pi = std::numbers::pi;

// Taper parameters for the uniform gauge, as fractions of L.
constexpr double taper_width = 1.0 / 40.0;
constexpr double taper_center = 0.5 - 5.5 * taper_width;

double taper(double t, double L) {
    const double w = taper_width * L;
    const double c = taper_center * L;
    return 0.5 * std::erfc((std::abs(t) - c) / w);
}
} // namespace

void SmearingRadius::validate() const {
    if (!(value >= 0.0) || !std::isfinite(value))
        throw PreconditionError("smearing radius must be finite and >= 0, got " + std::to_string(value));
}

void SmearingRadius::validate(const Grid2D& g) const {
    validate();
    if (value > 0.0 && !(value < 0.25 * g.L))
        throw PreconditionError("smearing radius R = " + std::to_string(value) + " must be below L/4 = " +
                                std::to_string(0.25 * g.L));
}

void TrapSpec::validate() const {
    if (table) return;
    if (!(s > 0.0)) throw PreconditionError("trap exponent s must be > 0, got " + std::to_string(s));
    if (!(c > 0.0)) throw PreconditionError("trap scale c must be > 0, got " + std::to_string(c));
    if (!(C0 >= 0.0)) throw PreconditionError("trap offset C0 must be >= 0, got " + std::to_string(C0));
}

void GaugeSpec::validate() const {
    if (!std::isfinite(B0)) throw PreconditionError("gauge B0 must be finite");
    if (kind == Kind::tabulated) {
        if (!table) throw PreconditionError("tabulated gauge requires a field");
        for (std::size_t i = 0; i < table->size(); ++i)
            if (!std::isfinite(table->x[i]) || !std::isfinite(table->y[i]))
                throw PreconditionError("tabulated gauge has non-finite samples");
    }
}

std::string GaugeSpec::name(Kind k) {
    switch (k) {
    case Kind::none: return "none";
    case Kind::uniform: return "uniform";
    case Kind::tabulated: return "tabulated";
    }
    return "unknown";
}

double eval_w_R(Vec2 x, double R) {
    const double r = length(x);
    if (R == 0.0) {
        if (r == 0.0) throw DomainError("w_0 = log|x| is singular at x = 0");
        return std::log(r);
    }
    if (R < 0.0) throw DomainError("eval_w_R: negative radius");
    if (r >= R) return std::log(r);
    return r * r / (2.0 * R * R) + std::log(R) - 0.5;
}

Vec2 grad_w_R(Vec2 x, double R) {
    const double r2 = x.x * x.x + x.y * x.y;
    if (R == 0.0) {
        if (r2 == 0.0) throw DomainError("grad w_0 is singular at x = 0");
        return {x.x / r2, x.y / r2};
    }
    if (R < 0.0) throw DomainError("grad_w_R: negative radius");
    const double d = r2 >= R * R ? r2 : R * R;
    return {x.x / d, x.y / d};
}

double disc_form_factor(double kappa) {
    if (kappa < 0.0) throw DomainError("disc_form_factor: kappa must be >= 0");
    if (kappa < 1e-4) return 1.0 - kappa * kappa / 8.0;
    return 2.0 * std::cyl_bessel_j(1.0, kappa) / kappa;
}

GaugeKernel::GaugeKernel(const Grid2D& g, SmearingRadius R) : grid_(g), R_(R), mx_(g.size()), my_(g.size()) {
    g.validate();
    R.validate(g);
    for (int my = 0; my < g.n; ++my) {
        for (int mx = 0; mx < g.n; ++mx) {
            const std::size_t i = g.index(mx, my);
            if (g.is_nyquist(mx) || g.is_nyquist(my) || (mx == 0 && my == 0)) continue;
            const double kx = g.wavenumber(mx), ky = g.wavenumber(my);
            const double k2 = kx * kx + ky * ky;
            const double form = R.singular() ? 1.0 : disc_form_factor(std::sqrt(k2) * R.value);
            // -2 pi i k^perp / |k|^2 with k^perp = (-k_y, k_x)
            mx_[i] = 2.0 * pi * ky / k2 * form;
            my_[i] = -2.0 * pi * kx / k2 * form;
        }
    }
}

VectorField2 GaugeKernel::convolve(const RealField& rho) const {
    require_same_grid(grid_, rho.grid, "GaugeKernel::convolve");
    const auto& fft = Fft2D::get(grid_.n);
    const auto rhat = fft.forward_real(rho.values);
    std::vector<cplx> ax(rhat.size()), ay(rhat.size());
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < rhat.size(); ++i) {
        ax[i] = I * mx_[i] * rhat[i];
        ay[i] = I * my_[i] * rhat[i];
    }
    fft.inverse(ax, ax);
    fft.inverse(ay, ay);
    VectorField2 A(grid_);
    for (std::size_t i = 0; i < ax.size(); ++i) {
        A.x[i] = ax[i].real();
        A.y[i] = ay[i].real();
    }
    return A;
}

ComplexPair GaugeKernel::convolve(std::span<const cplx> rho) const {
    if (rho.size() != grid_.size()) throw ShapeError("GaugeKernel::convolve: wrong sample count");
    const auto& fft = Fft2D::get(grid_.n);
    const auto rhat = fft.forward(rho);
    ComplexPair out{ComplexField(grid_), ComplexField(grid_)};
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < rhat.size(); ++i) {
        out.x[i] = I * mx_[i] * rhat[i];
        out.y[i] = I * my_[i] * rhat[i];
    }
    fft.inverse(out.x.values, out.x.values);
    fft.inverse(out.y.values, out.y.values);
    return out;
}

RealField GaugeKernel::convolve_dot(const VectorField2& J) const {
    require_same_grid(grid_, J.grid, "GaugeKernel::convolve_dot");
    const auto& fft = Fft2D::get(grid_.n);
    const auto jx = fft.forward_real(J.x);
    const auto jy = fft.forward_real(J.y);
    std::vector<cplx> t(jx.size());
    const cplx I{0.0, 1.0};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = I * (mx_[i] * jx[i] + my_[i] * jy[i]);
    fft.inverse(t, t);
    RealField out(grid_);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].real();
    return out;
}

VectorField2 compute_A_R(const RealField& rho, SmearingRadius R) {
    for (double v : rho.values)
        if (v < -1e-12 || !std::isfinite(v))
            throw PreconditionError("compute_A_R: density has negative or non-finite entries");
    return GaugeKernel(rho.grid, R).convolve(rho);
}

SelfPairKernel::SelfPairKernel(const Grid2D& g, SmearingRadius R) : grid_(g) {
    R.validate(g);
    if (R.singular())
        throw DomainError("|grad w_0|^2 is not locally integrable; the self-pair term needs R > 0");
    std::vector<cplx> k(g.size());
    const double h = g.spacing();
    for (int iy = 0; iy < g.n; ++iy) {
        const double zy = g.signed_mode(iy) * h;
        for (int ix = 0; ix < g.n; ++ix) {
            const double zx = g.signed_mode(ix) * h;
            const Vec2 gw = grad_w_R({zx, zy}, R.value);
            k[g.index(ix, iy)] = (gw.x * gw.x + gw.y * gw.y) * g.cell_area();
        }
    }
    kernel_hat_ = Fft2D::get(g.n).forward(k);
}

std::vector<cplx> SelfPairKernel::convolve(std::span<const cplx> rho) const {
    if (rho.size() != grid_.size()) throw ShapeError("SelfPairKernel::convolve: wrong sample count");
    const auto& fft = Fft2D::get(grid_.n);
    auto t = fft.forward(rho);
    for (std::size_t i = 0; i < t.size(); ++i) t[i] *= kernel_hat_[i];
    fft.inverse(t, t);
    return t;
}

RealField SelfPairKernel::convolve(const RealField& rho) const {
    require_same_grid(grid_, rho.grid, "SelfPairKernel::convolve");
    std::vector<cplx> in(rho.values.begin(), rho.values.end());
    const auto t = convolve(std::span<const cplx>(in));
    RealField out(grid_);
    for (std::size_t i = 0; i < t.size(); ++i) out[i] = t[i].real();
    return out;
}

RealField build_trap(const TrapSpec& spec, const Grid2D& g) {
    spec.validate();
    if (spec.table) {
        require_same_grid(spec.table->grid, g, "build_trap");
        return *spec.table;
    }
    return sample<double>(g, [&](double x, double y) {
        return std::pow(std::hypot(x, y), spec.s) / spec.c - spec.C0;
    });
}

double gauge_interior_halfwidth(const Grid2D& g) { return (taper_center - 5.0 * taper_width) * g.L; }

VectorField2 build_gauge(const GaugeSpec& spec, const Grid2D& g) {
    spec.validate();
    VectorField2 A(g);
    switch (spec.kind) {
    case GaugeSpec::Kind::none:
        break;
    case GaugeSpec::Kind::uniform:
        for (int iy = 0; iy < g.n; ++iy)
            for (int ix = 0; ix < g.n; ++ix) {
                const double x = g.coord(ix), y = g.coord(iy);
                const double t = taper(x, g.L) * taper(y, g.L);
                A.x[g.index(ix, iy)] = -0.5 * spec.B0 * y * t;
                A.y[g.index(ix, iy)] = 0.5 * spec.B0 * x * t;
            }
        break;
    case GaugeSpec::Kind::tabulated:
        require_same_grid(spec.table->grid, g, "build_gauge");
        A = *spec.table;
        break;
    }
    return A;
}

} // namespace anyon
