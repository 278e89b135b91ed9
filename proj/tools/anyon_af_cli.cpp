// anyon-af: command-line driver for the average-field solver.
//
//   anyon-af [command] --config run.ini [--out dir] [--seed k] [--workers w]
//
// Exit status: 0 success, 1 configuration error, 2 numerical failure,
// 3 property failure (verify).

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "anyon/config.hpp"
#include "anyon/experiments.hpp"
#include "anyon/verify.hpp"

namespace {

enum Exit { ok = 0, config_error = 1, numerical_failure = 2, property_failure = 3 };

std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw anyon::ConfigError("cannot read config file '" + path + "'");
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

int run(const anyon::RunConfig& cfg) {
    using namespace anyon;
    const std::filesystem::path out = cfg.output_dir;
    RunOutput res;
    switch (cfg.command) {
    case Command::minimize: res = run_minimize(cfg, out); break;
    case Command::sweep_radius: res = run_sweep_radius(cfg); break;
    case Command::sweep_beta: res = run_sweep_beta(cfg); break;
    case Command::manybody: res = run_manybody(cfg); break;
    case Command::spectrum: res = run_spectrum(cfg); break;
    case Command::verify: {
        const VerifyReport rep = run_verify(cfg);
        std::cout << rep.render();
        res.tables.push_back(rep.table());
        write_tables(res, cfg, out);
        if (!rep.ok()) {
            for (const auto& r : rep.results)
                if (r.verdict == Verdict::fail) std::cerr << "property failed: " << r.name << "\n";
            return property_failure;
        }
        return ok;
    }
    }
    write_tables(res, cfg, out);
    for (const auto& t : res.tables) std::cout << "wrote " << (out / (t.name + ".csv")).string() << "\n";
    if (!res.message.empty()) std::cerr << res.message;
    return res.numerical_failure ? numerical_failure : ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Spectral solver for the average-field anyon functional"};
    app.footer("Config keys (INI, sections optional):\n" + anyon::config_reference() +
               "\nExit status: 0 success, 1 configuration error, 2 numerical failure, 3 property failure.");
    std::string command, config_path, out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> workers;
    app.add_option("command", command, "minimize | sweep-radius | sweep-beta | manybody | spectrum | verify "
                                       "(overrides the config)");
    app.add_option("--config", config_path, "INI configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides output_dir)");
    app.add_option("--seed", seed, "random seed (overrides seed)");
    app.add_option("--workers", workers, "worker threads for sweeps (overrides workers)");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : config_error;
    }

    anyon::RunConfig cfg;
    try {
        std::vector<std::pair<std::string, std::string>> overrides;
        if (!command.empty()) overrides.emplace_back("command", command);
        if (!out_dir.empty()) overrides.emplace_back("output_dir", out_dir);
        if (seed) overrides.emplace_back("seed", std::to_string(*seed));
        if (workers) overrides.emplace_back("workers", std::to_string(*workers));
        cfg = anyon::parse_config(read_file(config_path), overrides);
    } catch (const std::exception& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return config_error;
    }

    try {
        return run(cfg);
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return numerical_failure;
    }
}
