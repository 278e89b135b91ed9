#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "anyon/config.hpp"

namespace anyon {

/// A CSV result table. Cells are pre-formatted so that rendering is
/// byte-for-byte deterministic.
struct Table {
    std::string name;  // file stem
    std::vector<std::string> columns;
    std::vector<std::vector<std::string>> rows;

    void add_row(std::vector<std::string> cells);
};

/// Shortest round-trip decimal form of v.
std::string format_number(double v);

/// Metadata header (`# ` lines: artifact version, resolved config) followed by the CSV body.
std::string render_csv(const Table& t, const RunConfig& cfg);

struct RunOutput {
    std::vector<Table> tables;
    bool numerical_failure = false;  // some run did not converge
    std::string message;
};

/// One minimization: a single row (params, energy, iterations, converged).
/// Dumps u_star to <out>/u_star when dump_fields is set and `out` is non-empty.
RunOutput run_minimize(const RunConfig& cfg, const std::filesystem::path& out = {});

/// Warm-started minimizations along R_list (largest R first), with
/// Cauchy differences |e_R - e_{R/2}|. Non-converged rows are flagged.
RunOutput run_sweep_radius(const RunConfig& cfg);

/// Independent cold-started minimizations over beta_list, spread over
/// cfg.workers threads; rows are sorted by beta.
RunOutput run_sweep_beta(const RunConfig& cfg);

/// Mean-field minimizer u*, its N-particle product-state breakdown, and the
/// two-body ground energy for every m in m_list (basis of h at beta = 0).
RunOutput run_manybody(const RunConfig& cfg);

/// Lowest `modes` eigenvalues of h, plane-wave reports for Lambda_list and
/// a CLR scan over the resolved part of the spectrum.
RunOutput run_spectrum(const RunConfig& cfg);

/// Writes every table as <dir>/<name>.csv.
void write_tables(const RunOutput& out, const RunConfig& cfg, const std::filesystem::path& dir);

} // namespace anyon
