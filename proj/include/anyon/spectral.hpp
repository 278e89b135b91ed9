#pragma once

#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "anyon/grid.hpp"
#include "anyon/meanfield.hpp"
#include "anyon/potentials.hpp"

namespace anyon {

/// h = (p + A_e)^2 + V on the grid. The momentum multiplier keeps the full
/// lattice wavenumber (including the Nyquist slot), so h has no spurious
/// low-kinetic modes.
class OneBodyOperator {
public:
    OneBodyOperator(const Grid2D& g, const ModelParams& params);

    ComplexField apply(const ComplexField& u) const;
    /// Columns are grid samples (Euclidean scaling is irrelevant for a linear map).
    void apply_block(const Eigen::MatrixXcd& in, Eigen::MatrixXcd& out) const;
    /// Approximate (|k|^2 + V - inf V + shift_j)^{-1} applied to column j.
    void precondition_block(const Eigen::MatrixXcd& in, const Eigen::VectorXd& shifts, Eigen::MatrixXcd& out) const;

    const Grid2D& grid() const { return grid_; }
    const RealField& trap() const { return V_; }
    const VectorField2& gauge() const { return Ae_; }
    bool magnetic() const { return magnetic_; }
    /// Dense matrix of h in the sample basis (small grids only).
    Eigen::MatrixXd dense_real() const;
    Eigen::MatrixXcd dense_complex() const;

private:
    void apply_raw(const cplx* in, cplx* out) const;

    Grid2D grid_;
    RealField V_;
    VectorField2 Ae_;
    bool magnetic_;
    double vmin_ = 0.0;
};

struct SpectralBasis {
    Grid2D grid;
    std::vector<double> eigenvalues;
    std::vector<ComplexField> modes;  // orthonormal in the quadrature inner product
    std::vector<double> residuals;    // ||h phi - lambda phi||

    std::size_t size() const { return eigenvalues.size(); }
    /// Basis restricted to the listed modes, in that order.
    SpectralBasis subset(const std::vector<int>& idx) const;
};

enum class EigenMethod { automatic, dense, lobpcg };

/// Lowest m eigenpairs of h. Rejects m above the budget. `automatic` uses a
/// dense LAPACK solve for grids with at most 64 x 64 points and LOBPCG above.
SpectralBasis build_spectrum(const Grid2D& g, const ModelParams& params, int m, int budget = 400,
                             EigenMethod method = EigenMethod::automatic);

/// Relative tolerance for deciding that two eigenvalues are degenerate and
/// that sqrt(lambda) sits on a window edge.
inline constexpr double cluster_tolerance = 1e-6;

/// Spectral projector 1{lo <= sqrt(h) < hi} restricted to the computed span.
/// Degenerate clusters are never split: a cluster is in or out as a whole,
/// decided on its mean eigenvalue, and a cluster on an edge (within
/// cluster_tolerance) belongs to the window that starts there.
struct Projector {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    std::size_t basis_size = 0;
    std::vector<int> modes;

    std::size_t rank() const { return modes.size(); }
    bool contains(int a) const;
    /// Matrix in the eigenbasis (diagonal 0/1).
    Eigen::MatrixXd matrix() const;
};

Projector build_projector(const SpectralBasis& basis, double lo, double hi);

/// Number of modes with sqrt(lambda) < Lambda, counted cluster by cluster.
int count_below(const SpectralBasis& basis, double Lambda);

struct ClrScan {
    std::vector<double> Lambdas;
    std::vector<int> counts;
    double slope = 0.0;
    double intercept = 0.0;
    double exponent_bound = 0.0;  // 2 + 4/s
    bool slope_within_bound = false;  // slope <= exponent_bound + 0.3
};

/// Least-squares slope of log N(Lambda) against log Lambda.
ClrScan clr_dimension_scan(const SpectralBasis& basis, double s, const std::vector<double>& Lambdas);

struct PlaneWaveRow {
    Vec2 k;
    bool cosine = true;
    double max_abs_eig = 0.0;
    double C = 0.0;  // max_abs_eig |k|^2 / Lambda^2
};

struct PlaneWaveReport {
    double Lambda = 0.0;
    std::size_t rank = 0;
    std::vector<PlaneWaveRow> rows;
    double max_abs_eig = 0.0;  // over all rows
    double C_star = 0.0;       // sup of C over rows with |k| > Lambda
};

/// Extreme eigenvalues of P e_k P for e_k = cos(k.x) and sin(k.x), with
/// P = 1{sqrt(h) < Lambda}.
PlaneWaveReport plane_wave_bound_check(const SpectralBasis& basis, double Lambda, const std::vector<Vec2>& ks);

/// |k| = Lambda * {1.01, 1.25, 1.5, 2, 2.5, 3, 4, 6, 8} along four directions.
std::vector<Vec2> default_k_scan(double Lambda);

struct SmearedBoundRow {
    double R = 0.0;
    double max_w_ball = 0.0;       // max over B(0,1) of |w_R|
    double w_bound = 0.0;          // 1 + |log R|
    double sup_grad = 0.0;         // sup |grad w_R|
    double sup_grad_outside = 0.0; // sup over |x| >= 1
};

struct SmearedBoundReport {
    std::vector<SmearedBoundRow> rows;
    double worst_w_margin = 0.0;        // min of w_bound - max_w_ball
    double worst_grad_deviation = 0.0;  // max of |sup_grad - 1/R|
    double worst_outside_margin = 0.0;  // min of 1 - sup_grad_outside
    bool ok = false;
};

/// Dense-sample check of the three smeared-potential bounds.
SmearedBoundReport smeared_bound_check(const std::vector<double>& Rs, int radial_samples = 20000);

} // namespace anyon
