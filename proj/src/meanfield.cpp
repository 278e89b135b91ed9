#include "anyon/meanfield.hpp"

#include <algorithm>
#include <limits>

#include "anyon/fft.hpp"
#include "anyon/field_ops.hpp"
#include "anyon/random_fields.hpp"

namespace anyon {

namespace {

void require_normalized(const ComplexField& u, const char* what) {
    const double nu = norm(u);
    if (!(std::abs(nu - 1.0) <= 1e-8))
        throw PreconditionError(std::string(what) + ": u must be normalized, got norm " + std::to_string(nu));
}

// Apply (|k|^2 + shift)^{-1} in Fourier space.
ComplexField apply_inverse_kinetic(const ComplexField& u, double shift) {
    const Grid2D& g = u.grid;
    const auto& fft = Fft2D::get(g.n);
    auto t = fft.forward(u.values);
    for (int my = 0; my < g.n; ++my) {
        const double ky = g.wavenumber(my);
        for (int mx = 0; mx < g.n; ++mx) {
            const double kx = g.wavenumber(mx);
            t[g.index(mx, my)] /= kx * kx + ky * ky + shift;
        }
    }
    ComplexField out(g);
    fft.inverse(t, out.values);
    return out;
}

double real_inner(const ComplexField& a, const ComplexField& b) { return inner_product(a, b).real(); }

} // namespace

void ModelParams::validate() const {
    if (!std::isfinite(beta)) throw PreconditionError("beta must be finite");
    R.validate();
    trap.validate();
    gauge.validate();
}

void ModelParams::validate(const Grid2D& g) const {
    validate();
    R.validate(g);
    if (trap.table) require_same_grid(trap.table->grid, g, "trap table");
    if (gauge.table) require_same_grid(gauge.table->grid, g, "gauge table");
}

void SolverConfig::validate() const {
    if (!(step > 0.0)) throw PreconditionError("solver step must be > 0");
    if (!(tol > 0.0)) throw PreconditionError("solver tol must be > 0");
    if (max_iter < 1) throw PreconditionError("solver max_iter must be >= 1");
    if (!(backtracking > 0.0 && backtracking < 1.0)) throw PreconditionError("solver backtracking must lie in (0,1)");
    if (restarts < 0) throw PreconditionError("solver restarts must be >= 0");
}

AverageFieldModel::AverageFieldModel(const Grid2D& g, const ModelParams& params)
    : grid_(g), params_(params), V_(build_trap(params.trap, g)), Ae_(build_gauge(params.gauge, g)),
      kernel_(g, params.R) {
    params.validate(g);
}

VectorField2 AverageFieldModel::total_potential(const ComplexField& u) const {
    require_same_grid(u.grid, grid_, "AverageFieldModel");
    if (params_.beta == 0.0) return Ae_;
    return Ae_ + params_.beta * kernel_.convolve(density(u));
}

double AverageFieldModel::energy_raw(const ComplexField& u) const {
    const VectorField2 A = total_potential(u);
    const ComplexPair d = covariant_derivative(u, A);
    double acc = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i)
        acc += std::norm(d.x[i]) + std::norm(d.y[i]) + V_[i] * std::norm(u[i]);
    return acc * grid_.cell_area();
}

ComplexField AverageFieldModel::gradient_raw(const ComplexField& u) const {
    const VectorField2 A = total_potential(u);
    ComplexField g = magnetic_laplacian(u, A);
    for (std::size_t i = 0; i < u.size(); ++i) g[i] += V_[i] * u[i];
    if (params_.beta != 0.0) {
        // Varying A^R[|u|^2] contributes -2 beta (K * . J) u; the minus sign
        // comes from the oddness of the kernel.
        const RealField phi = kernel_.convolve_dot(current_density(u, A));
        const double c = -2.0 * params_.beta * self_consistency_sign;
        for (std::size_t i = 0; i < u.size(); ++i) g[i] += c * phi[i] * u[i];
    }
    return g;
}

double AverageFieldModel::energy(const ComplexField& u) const {
    require_same_grid(u.grid, grid_, "AverageFieldModel::energy");
    return params_.dealias ? energy_raw(dealias(u)) : energy_raw(u);
}

ComplexField AverageFieldModel::gradient(const ComplexField& u) const {
    require_same_grid(u.grid, grid_, "AverageFieldModel::gradient");
    return params_.dealias ? dealias(gradient_raw(dealias(u))) : gradient_raw(u);
}

double energy_af(const ComplexField& u, const ModelParams& params) {
    require_normalized(u, "energy_af");
    return AverageFieldModel(u.grid, params).energy(u);
}

VectorField2 current_density(const ComplexField& u, const VectorField2& A_total) {
    const ComplexPair d = covariant_derivative(u, A_total);
    VectorField2 J(u.grid);
    for (std::size_t i = 0; i < u.size(); ++i) {
        J.x[i] = (std::conj(u[i]) * d.x[i]).real();
        J.y[i] = (std::conj(u[i]) * d.y[i]).real();
    }
    return J;
}

ComplexField gradient_af(const ComplexField& u, const ModelParams& params) {
    require_normalized(u, "gradient_af");
    return AverageFieldModel(u.grid, params).gradient(u);
}

ComplexField project_tangent(const ComplexField& u, const ComplexField& g) {
    return g - inner_product(u, g) * u;
}

namespace {

MinimizeResult descend(const AverageFieldModel& model, ComplexField u, const SolverConfig& cfg) {
    constexpr double armijo = 1e-4;
    constexpr double min_step = 1e-14;
    const double max_step = 1e3 * cfg.step;
    // Shift of the preconditioner (|k|^2 + shift); keeps it positive definite.
    constexpr double shift = 1.0;

    MinimizeResult res;
    double E = model.energy(u);
    res.trace.push_back(E);
    double tau = cfg.step;

    ComplexField s_prev, d_prev;
    double dg_prev = 0.0;
    for (int it = 0; it < cfg.max_iter; ++it) {
        const ComplexField g = model.gradient(u);
        ComplexField d(u.grid);
        if (cfg.preconditioner == Preconditioner::kinetic) {
            const ComplexField pg = apply_inverse_kinetic(g, shift);
            const ComplexField pu = apply_inverse_kinetic(u, shift);
            const double mu = real_inner(u, pg) / real_inner(u, pu);
            d = pg - cplx(mu) * pu;
        } else {
            d = project_tangent(u, g);
            // keep Re<u, d> = 0 exactly so the first-order model is the tangent one
            d = d - cplx(real_inner(u, d)) * u;
        }
        const double dg = real_inner(d, g);
        ComplexField s = d;
        if (cfg.conjugate_gradient && it > 0 && dg_prev > 0.0) {
            // Polak-Ribiere+ with the previous direction moved to the current tangent space.
            const double gamma = std::max(0.0, (dg - real_inner(d_prev, g)) / dg_prev);
            if (gamma > 0.0) {
                ComplexField t = s_prev - cplx(real_inner(u, s_prev)) * u;
                s = d + cplx(gamma) * t;
                if (!(real_inner(s, g) > 0.0)) s = d;
            }
        }
        const double slope = 2.0 * real_inner(s, g);  // -dE/dtau at tau = 0
        if (!(slope > 0.0)) {
            res.converged = true;
            res.diagnostic = "zero descent slope";
            break;
        }

        bool accepted = false;
        double E_new = E;
        ComplexField u_new;
        while (tau >= min_step) {
            u_new = normalize(u - cplx(tau) * s);
            E_new = model.energy(u_new);
            if (E_new <= E - armijo * tau * slope) {
                accepted = true;
                break;
            }
            tau *= cfg.backtracking;
        }
        if (!accepted) {
            // The predicted decrease is below rounding: treat as converged when it is also below tol.
            if (slope * cfg.step < cfg.tol) {
                res.converged = true;
                res.diagnostic = "descent slope below tolerance";
            } else {
                res.diagnostic = "step underflow during backtracking (tau < 1e-14) at iteration " +
                                 std::to_string(it) + ", slope " + std::to_string(slope);
            }
            break;
        }
        {
            // One quadratic-interpolation refinement of the accepted step.
            const double a = (E_new - E + slope * tau) / (tau * tau);
            if (a > 0.0) {
                const double t = slope / (2.0 * a);
                if (std::abs(t - tau) > 0.1 * tau && t <= max_step) {
                    ComplexField u_t = normalize(u - cplx(t) * s);
                    const double E_t = model.energy(u_t);
                    if (E_t < E_new && E_t <= E - armijo * t * slope) {
                        u_new = std::move(u_t);
                        E_new = E_t;
                        tau = t;
                    }
                }
            }
        }
        const double decrease = E - E_new;
        s_prev = std::move(s);
        d_prev = std::move(d);
        dg_prev = dg;
        u = std::move(u_new);
        E = E_new;
        res.trace.push_back(E);
        res.iterations = it + 1;
        if (decrease < cfg.tol) {
            res.converged = true;
            res.diagnostic = "energy decrease below tol";
            break;
        }
        tau = std::min(tau * 1.5, max_step);
    }
    if (!res.converged && res.diagnostic.empty()) res.diagnostic = "max_iter reached";
    res.u_star = std::move(u);
    res.energy = E;
    return res;
}

} // namespace

MinimizeResult minimize_af(const ComplexField& u0, const ModelParams& params, const SolverConfig& cfg) {
    cfg.validate();
    require_normalized(u0, "minimize_af");
    const AverageFieldModel model(u0.grid, params);
    return descend(model, u0, cfg);
}

MinimizeResult minimize_af(const Grid2D& g, const ModelParams& params, const SolverConfig& cfg) {
    cfg.validate();
    const AverageFieldModel model(g, params);
    std::optional<MinimizeResult> best;
    for (int r = 0; r <= cfg.restarts; ++r) {
        auto res = descend(model, random_complex_field(g, cfg.seed + static_cast<std::uint64_t>(r)), cfg);
        if (!best || res.energy < best->energy) best = std::move(res);
    }
    return std::move(*best);
}

} // namespace anyon
