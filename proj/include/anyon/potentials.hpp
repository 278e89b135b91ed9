#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "anyon/grid.hpp"

namespace anyon {

struct Vec2 {
    double x = 0.0;
    double y = 0.0;
};

inline Vec2 perp(Vec2 v) { return {-v.y, v.x}; }
inline double length(Vec2 v) { return std::hypot(v.x, v.y); }

/// Radius of the disc carrying each unit charge; 0 selects the point kernel log|x|.
struct SmearingRadius {
    double value = 0.1;

    bool singular() const { return value == 0.0; }
    void validate() const;
    // R < L/4 whenever R > 0.
    void validate(const Grid2D& g) const;
};

/// V(x) = |x|^s / c - C0, or a tabulated field.
struct TrapSpec {
    double s = 2.0;
    double c = 1.0;
    double C0 = 0.0;
    std::optional<RealField> table;

    void validate() const;
};

/// External vector potential A_e.
struct GaugeSpec {
    enum class Kind { none, uniform, tabulated };
    Kind kind = Kind::none;
    double B0 = 0.0;
    std::optional<VectorField2> table;

    void validate() const;
    static std::string name(Kind k);
};

/// log|.| convolved with the normalized disc indicator of radius R.
double eval_w_R(Vec2 x, double R);
/// Gradient of eval_w_R: x/|x|^2 outside the disc, x/R^2 inside.
Vec2 grad_w_R(Vec2 x, double R);
/// Fourier transform of 1_{B(0,R)}/(pi R^2) at |k| R = kappa: 2 J_1(kappa)/kappa.
double disc_form_factor(double kappa);

/// Fourier multiplier of grad^perp w_R on a grid, shared by every convolution
/// with that kernel. The multiplier is -2 pi i k^perp/|k|^2 times the disc
/// form factor; it is purely imaginary and odd, so only the imaginary parts
/// are stored. The k = 0 and Nyquist slots are zero.
class GaugeKernel {
public:
    GaugeKernel(const Grid2D& g, SmearingRadius R);

    /// (grad^perp w_R) * rho for a real density; zero spatial mean.
    VectorField2 convolve(const RealField& rho) const;
    /// Same convolution for a complex "density" such as conj(f) g.
    ComplexPair convolve(std::span<const cplx> rho) const;
    /// Scalar field (grad^perp w_R) * . J = integral of K(x - y) . J(y) dy.
    RealField convolve_dot(const VectorField2& J) const;

    const Grid2D& grid() const { return grid_; }
    SmearingRadius radius() const { return R_; }

private:
    Grid2D grid_;
    SmearingRadius R_;
    std::vector<double> mx_;  // M_x = i * mx_
    std::vector<double> my_;
};

/// A^R[rho] := grad^perp w_R * rho by periodic spectral convolution.
/// Rejects densities with entries below -1e-12.
VectorField2 compute_A_R(const RealField& rho, SmearingRadius R);

/// Circular convolution with |grad w_R|^2 tabulated in real space at
/// minimum-image separations.
class SelfPairKernel {
public:
    SelfPairKernel(const Grid2D& g, SmearingRadius R);

    RealField convolve(const RealField& rho) const;
    std::vector<cplx> convolve(std::span<const cplx> rho) const;

private:
    Grid2D grid_;
    std::vector<cplx> kernel_hat_;
};

RealField build_trap(const TrapSpec& spec, const Grid2D& g);

/// A_e on the grid. The uniform gauge (B0/2) x^perp is multiplied by a smooth
/// erf taper that is 1 for |x_i| < 0.2375 L and vanishes at the box edge, so
/// that its periodic extension is smooth.
VectorField2 build_gauge(const GaugeSpec& spec, const Grid2D& g);

/// Half-width of the region where the uniform gauge is untapered.
double gauge_interior_halfwidth(const Grid2D& g);

} // namespace anyon
