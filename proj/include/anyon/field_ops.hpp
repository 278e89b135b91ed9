#pragma once

#include "anyon/grid.hpp"

namespace anyon {

/// h^2 * sum conj(f) g over the grid.
cplx inner_product(const ComplexField& f, const ComplexField& g);
double norm(const ComplexField& f);
double integrate(const RealField& f);

/// u / ||u||; throws DomainError for the zero field.
ComplexField normalize(const ComplexField& u);

/// (-i d_x f, -i d_y f) via the Fourier multipliers k_x, k_y.
/// The unpaired Nyquist mode is dropped so real fields keep real derivatives.
ComplexPair spectral_gradient(const ComplexField& f);

/// (-i grad + A) u componentwise.
ComplexPair covariant_derivative(const ComplexField& u, const VectorField2& A);

/// sum_j (-i d_j + A_j)^2 u, the magnetic kinetic operator applied to u.
ComplexField magnetic_laplacian(const ComplexField& u, const VectorField2& A);

RealField spectral_divergence(const VectorField2& F);
RealField spectral_curl(const VectorField2& F);

/// |u|^2 sample-wise.
RealField density(const ComplexField& u);

/// Zero every Fourier mode with |m| > n/3 in either direction (2/3 rule).
ComplexField dealias(const ComplexField& u);

/// Trigonometric interpolant of u sampled on the same box with n_fine points per side.
ComplexField fourier_interpolate(const ComplexField& u, int n_fine);

// Small pointwise helpers shared across modules.
ComplexField operator+(const ComplexField& a, const ComplexField& b);
ComplexField operator-(const ComplexField& a, const ComplexField& b);
ComplexField operator*(cplx s, const ComplexField& a);
VectorField2 operator+(const VectorField2& a, const VectorField2& b);
VectorField2 operator*(double s, const VectorField2& a);

double sup_norm(const ComplexField& f);
double sup_norm(const RealField& f);
double sup_norm(const VectorField2& F);

} // namespace anyon
