#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/potentials.hpp"

namespace anyon {

struct ModelParams {
    double beta = 0.0;
    SmearingRadius R{0.1};
    TrapSpec trap;
    GaugeSpec gauge;
    // Evaluate the functional on the 2/3-rule filtered field (stress tests only).
    bool dealias = false;

    void validate() const;
    void validate(const Grid2D& g) const;
};

enum class Preconditioner { none, kinetic };

struct SolverConfig {
    double step = 1.0;
    double tol = 1e-10;
    int max_iter = 50000;
    double backtracking = 0.5;
    std::uint64_t seed = 1;
    // Extra random starts (seed+1, seed+2, ...); the lowest energy wins.
    int restarts = 0;
    Preconditioner preconditioner = Preconditioner::kinetic;
    // Conjugate (Polak-Ribiere+) search directions instead of plain descent.
    bool conjugate_gradient = true;

    void validate() const;
};

struct MinimizeResult {
    ComplexField u_star;
    double energy = 0.0;
    std::vector<double> trace;
    int iterations = 0;
    bool converged = false;
    std::string diagnostic;
};

/// Cached V, A_e and gauge kernel for repeated evaluation of the
/// average-field functional on one grid.
class AverageFieldModel {
public:
    AverageFieldModel(const Grid2D& g, const ModelParams& params);

    /// E[u] with no normalization check.
    double energy(const ComplexField& u) const;
    /// Unprojected gradient g, such that dE(u)[v] = 2 Re <v, g>.
    ComplexField gradient(const ComplexField& u) const;
    /// A_e + beta A^R[|u|^2].
    VectorField2 total_potential(const ComplexField& u) const;

    const Grid2D& grid() const { return grid_; }
    const ModelParams& params() const { return params_; }
    const RealField& trap() const { return V_; }
    const VectorField2& external_gauge() const { return Ae_; }
    const GaugeKernel& kernel() const { return kernel_; }

    // Hooks for mutation tests: scale of the self-consistency term in gradient().
    double self_consistency_sign = 1.0;

private:
    double energy_raw(const ComplexField& u) const;
    ComplexField gradient_raw(const ComplexField& u) const;

    Grid2D grid_;
    ModelParams params_;
    RealField V_;
    VectorField2 Ae_;
    GaugeKernel kernel_;
};

/// integral of |(-i grad + A_e + beta A^R[|u|^2]) u|^2 + V |u|^2.
double energy_af(const ComplexField& u, const ModelParams& params);

/// Re(conj(u) (-i grad + A_total) u).
VectorField2 current_density(const ComplexField& u, const VectorField2& A_total);

/// Unprojected first variation; see AverageFieldModel::gradient.
ComplexField gradient_af(const ComplexField& u, const ModelParams& params);

/// g - <u, g> u.
ComplexField project_tangent(const ComplexField& u, const ComplexField& g);

/// Riemannian gradient descent on the unit sphere with Armijo backtracking.
MinimizeResult minimize_af(const ComplexField& u0, const ModelParams& params, const SolverConfig& cfg);
/// Same, starting from normalized complex Gaussian noise drawn from cfg.seed.
MinimizeResult minimize_af(const Grid2D& g, const ModelParams& params, const SolverConfig& cfg);

} // namespace anyon
