#pragma once

#include <string>
#include <vector>

#include "anyon/config.hpp"
#include "anyon/experiments.hpp"

namespace anyon {

enum class Verdict { pass, fail, out_of_range };

std::string verdict_name(Verdict v);

struct PropertyResult {
    std::string name;
    Verdict verdict = Verdict::fail;
    std::string detail;
    double seconds = 0.0;
};

struct VerifyReport {
    std::vector<PropertyResult> results;

    /// No property failed (out-of-range verdicts do not count as failures).
    bool ok() const;
    /// One line per property: `PASS|FAIL|OUT_OF_RANGE  name  detail`.
    std::string render() const;
    Table table() const;
};

/// Test-fixture knobs for mutation checks.
struct VerifyHooks {
    // Multiplies the self-consistency term of the gradient.
    double self_consistency_sign = 1.0;
};

/// Runs the property battery on the configured grid and model. Properties
/// that rely on grid quadrature report out_of_range on grids with n < 32
/// (or a box too small for the trap) instead of failing.
VerifyReport run_verify(const RunConfig& cfg, const VerifyHooks& hooks = {});

/// Disc average of log|x - y| over |y| < R by polar quadrature centred at x
/// (independent of the closed form; used as the reference).
double smeared_log_quadrature(Vec2 x, double R, int nodes = 400);

} // namespace anyon
