#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "anyon/grid.hpp"
#include "anyon/meanfield.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

inline constexpr std::string_view version = "0.1.0";

enum class Command { minimize, sweep_radius, sweep_beta, manybody, spectrum, verify };

std::string command_name(Command c);

/// Everything a run needs. Sweep lists and mode counts only matter for the
/// commands that read them, but they are always validated and echoed.
struct RunConfig {
    Command command = Command::minimize;
    Grid2D grid{16.0, 128};
    ModelParams model;
    SolverConfig solver;
    std::string output_dir = "out";
    std::uint64_t seed = 1;
    int workers = 1;
    bool dump_fields = false;

    std::vector<double> R_list{0.5, 0.25, 0.125, 0.0625, 0.03125, 0.015625};
    std::vector<double> beta_list{0.0, 0.25, 0.5, 0.75, 1.0};
    int N = 2;
    int modes = 30;
    std::vector<int> m_list{5, 10, 20, 30};
    EigenMethod eigen_method = EigenMethod::automatic;
    std::vector<double> Lambda_list{2.0, 3.0, 4.0};

    /// Cross-field checks (grid-dependent ranges, command preconditions).
    void validate() const;
};

/// Parses INI-style text: `key = value` lines, optionally grouped under
/// [grid], [model], [solver], [run]. Keys are unique across sections, so a
/// flat document without headers is accepted too. Lists are comma separated
/// (brackets optional). Throws ConfigError naming the key and accepted range.
/// `overrides` (key, value) are applied after the document, replacing any
/// value given there (command-line flags).
RunConfig parse_config(const std::string& text,
                       const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// `key = value` lines for every key, grouped by section, each prefixed with
/// `prefix`. Parsing the output (without prefix) reproduces the config.
std::string resolved_config(const RunConfig& cfg, const std::string& prefix = "");

/// Key reference with defaults and accepted ranges (for --help).
std::string config_reference();

} // namespace anyon
