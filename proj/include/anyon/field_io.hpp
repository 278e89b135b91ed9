#pragma once

#include <filesystem>
#include <string>

#include "anyon/grid.hpp"

namespace anyon {

// Field dump: <stem>.bin holds little-endian float64 samples, row-major
// (index = iy*n + ix); complex fields interleave (re, im), vector fields
// interleave (x, y). <stem>.json is {"n": n, "L": L, "kind": "..."}.

void write_field(const std::filesystem::path& stem, const ComplexField& f);
void write_field(const std::filesystem::path& stem, const RealField& f);
void write_field(const std::filesystem::path& stem, const VectorField2& f);

ComplexField read_complex_field(const std::filesystem::path& stem);
RealField read_real_field(const std::filesystem::path& stem);
VectorField2 read_vector_field(const std::filesystem::path& stem);

} // namespace anyon
