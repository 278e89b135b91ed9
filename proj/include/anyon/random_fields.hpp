#pragma once

#include <cstdint>

#include "anyon/grid.hpp"

namespace anyon {

/// Independent complex Gaussian samples at every grid point, normalized.
ComplexField random_complex_field(const Grid2D& g, std::uint64_t seed);

/// Smooth random state: a random band-limited complex field (spectral
/// Gaussian of width k_width) times the envelope exp(-|x|^2 / (2 w^2)),
/// normalized. Carries a nonzero current in general.
ComplexField smooth_random_field(const Grid2D& g, std::uint64_t seed, double envelope_width = 1.5,
                                 double k_width = 1.5);

/// exp(-|x-c|^2/(2 w^2) + i k.x), normalized.
ComplexField gaussian_packet(const Grid2D& g, double cx, double cy, double width, double kx = 0.0,
                             double ky = 0.0);

} // namespace anyon
