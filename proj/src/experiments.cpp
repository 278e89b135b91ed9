#include "anyon/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <thread>

#include "anyon/field_io.hpp"
#include "anyon/manybody.hpp"
#include "anyon/spectral.hpp"

namespace anyon {

void Table::add_row(std::vector<std::string> cells) {
    if (cells.size() != columns.size())
        throw ShapeError("Table::add_row: " + std::to_string(cells.size()) + " cells for " +
                         std::to_string(columns.size()) + " columns in " + name);
    rows.push_back(std::move(cells));
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::string render_csv(const Table& t, const RunConfig& cfg) {
    std::string out = "# anyon-af " + std::string(version) + "\n# table = " + t.name + "\n";
    out += resolved_config(cfg, "# ");
    for (std::size_t i = 0; i < t.columns.size(); ++i) out += (i ? "," : "") + t.columns[i];
    out += "\n";
    for (const auto& row : t.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) out += (i ? "," : "") + row[i];
        out += "\n";
    }
    return out;
}

void write_tables(const RunOutput& out, const RunConfig& cfg, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    for (const auto& t : out.tables) {
        std::ofstream f(dir / (t.name + ".csv"), std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / (t.name + ".csv")).string());
        f << render_csv(t, cfg);
    }
}

namespace {

using F = decltype(&format_number);
constexpr F num = &format_number;

std::string yes_no(bool b) { return b ? "true" : "false"; }

std::vector<std::string> model_cells(const RunConfig& cfg, const ModelParams& m) {
    return {num(cfg.grid.L), std::to_string(cfg.grid.n), num(m.beta),           num(m.R.value),
            num(m.trap.s),   num(m.trap.c),              num(m.trap.C0),          GaugeSpec::name(m.gauge.kind),
            num(m.gauge.B0)};
}

const std::vector<std::string> model_columns{"L", "n", "beta", "R", "s", "c", "C0", "gauge", "B0"};

std::vector<std::string> concat(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

} // namespace

RunOutput run_minimize(const RunConfig& cfg, const std::filesystem::path& out) {
    const MinimizeResult res = minimize_af(cfg.grid, cfg.model, cfg.solver);
    RunOutput r;
    Table t{"minimize", concat(model_columns, {"energy", "iterations", "converged"}), {}};
    t.add_row(concat(model_cells(cfg, cfg.model), {num(res.energy), std::to_string(res.iterations), yes_no(res.converged)}));
    Table trace{"minimize_trace", {"iteration", "energy"}, {}};
    for (std::size_t i = 0; i < res.trace.size(); ++i) trace.add_row({std::to_string(i), num(res.trace[i])});
    r.tables = {std::move(t), std::move(trace)};
    r.numerical_failure = !res.converged;
    if (!res.converged) r.message = "minimize: not converged: " + res.diagnostic;
    if (cfg.dump_fields && !out.empty()) {
        std::filesystem::create_directories(out);
        write_field(out / "u_star", res.u_star);
    }
    return r;
}

RunOutput run_sweep_radius(const RunConfig& cfg) {
    std::vector<double> Rs = cfg.R_list;
    std::sort(Rs.begin(), Rs.end(), std::greater<>());
    Table t{"sweep_radius", concat(model_columns, {"energy", "iterations", "converged", "cauchy_diff", "flag"}), {}};
    RunOutput r;
    std::optional<ComplexField> warm;
    double prev = 0.0;
    for (std::size_t i = 0; i < Rs.size(); ++i) {
        ModelParams m = cfg.model;
        m.R.value = Rs[i];
        const MinimizeResult res = warm ? minimize_af(*warm, m, cfg.solver) : minimize_af(cfg.grid, m, cfg.solver);
        warm = res.u_star;
        const std::string diff = i == 0 ? "" : num(std::abs(res.energy - prev));
        prev = res.energy;
        if (!res.converged) {
            r.numerical_failure = true;
            r.message += "R = " + num(Rs[i]) + " not converged: " + res.diagnostic + "\n";
        }
        t.add_row(concat(model_cells(cfg, m), {num(res.energy), std::to_string(res.iterations), yes_no(res.converged),
                                               diff, res.converged ? "ok" : "not_converged"}));
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunOutput run_sweep_beta(const RunConfig& cfg) {
    std::vector<double> betas = cfg.beta_list;
    std::sort(betas.begin(), betas.end());
    std::vector<MinimizeResult> results(betas.size());
    std::vector<std::string> errors(betas.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < betas.size();) {
            ModelParams m = cfg.model;
            m.beta = betas[i];
            try {
                results[i] = minimize_af(cfg.grid, m, cfg.solver);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nw = std::max(1, std::min<int>(cfg.workers, static_cast<int>(betas.size())));
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
    for (const auto& e : errors)
        if (!e.empty()) throw NumericalError("sweep-beta: " + e);

    RunOutput r;
    Table t{"sweep_beta", concat(model_columns, {"energy", "iterations", "converged", "flag"}), {}};
    for (std::size_t i = 0; i < betas.size(); ++i) {
        ModelParams m = cfg.model;
        m.beta = betas[i];
        const auto& res = results[i];
        if (!res.converged) {
            r.numerical_failure = true;
            r.message += "beta = " + num(betas[i]) + " not converged: " + res.diagnostic + "\n";
        }
        t.add_row(concat(model_cells(cfg, m), {num(res.energy), std::to_string(res.iterations), yes_no(res.converged),
                                               res.converged ? "ok" : "not_converged"}));
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunOutput run_manybody(const RunConfig& cfg) {
    RunOutput r;
    const MinimizeResult mf = minimize_af(cfg.grid, cfg.model, cfg.solver);
    if (!mf.converged) {
        r.numerical_failure = true;
        r.message = "manybody: mean-field minimization not converged: " + mf.diagnostic;
    }
    const ProductEnergyBreakdown prod = product_state_energy(mf.u_star, cfg.N, cfg.model);
    const ProductEnergyBreakdown prod2 = product_state_energy(mf.u_star, 2, cfg.model);

    ModelParams one_body = cfg.model;
    one_body.beta = 0.0;
    const SpectralBasis basis = build_spectrum(cfg.grid, one_body, cfg.modes, 400, cfg.eigen_method);
    const TwoBodyIntegrals ints = compute_two_body_integrals(basis, cfg.model);

    Table t{"manybody",
            {"N", "R", "beta", "m", "e2", "asymmetry", "kinetic", "mixed", "three_body", "self_pair",
             "total_per_particle", "total_per_particle_N2", "e2_below_product"},
            {}};
    std::vector<int> ms = cfg.m_list;
    std::sort(ms.begin(), ms.end());
    for (int m : ms) {
        const TwoBodyMatrix H = assemble_H2(ints, cfg.model.beta, m);
        const double e2 = ground_energy_2body(H);
        t.add_row({std::to_string(cfg.N), num(cfg.model.R.value), num(cfg.model.beta), std::to_string(m), num(e2),
                   num(H.asymmetry), num(prod.kinetic), num(prod.mixed), num(prod.three_body), num(prod.self_pair),
                   num(prod.total_per_particle), num(prod2.total_per_particle),
                   yes_no(e2 <= prod2.total_per_particle)});
    }
    r.tables.push_back(std::move(t));
    return r;
}

RunOutput run_spectrum(const RunConfig& cfg) {
    RunOutput r;
    ModelParams one_body = cfg.model;
    one_body.beta = 0.0;
    const SpectralBasis basis = build_spectrum(cfg.grid, one_body, cfg.modes, 400, cfg.eigen_method);

    Table spec{"spectrum", {"index", "eigenvalue", "residual"}, {}};
    for (std::size_t i = 0; i < basis.size(); ++i)
        spec.add_row({std::to_string(i), num(basis.eigenvalues[i]), num(basis.residuals[i])});

    Table pw{"plane_wave", {"Lambda", "rank", "kx", "ky", "k", "kind", "max_abs_eig", "C"}, {}};
    Table pws{"plane_wave_summary", {"Lambda", "rank", "max_abs_eig", "C_star", "status"}, {}};
    for (double Lambda : cfg.Lambda_list) {
        try {
            const PlaneWaveReport rep = plane_wave_bound_check(basis, Lambda, default_k_scan(Lambda));
            for (const auto& row : rep.rows)
                pw.add_row({num(Lambda), std::to_string(rep.rank), num(row.k.x), num(row.k.y), num(length(row.k)),
                            row.cosine ? "cos" : "sin", num(row.max_abs_eig), num(row.C)});
            pws.add_row({num(Lambda), std::to_string(rep.rank), num(rep.max_abs_eig), num(rep.C_star), "ok"});
        } catch (const PreconditionError& e) {
            pws.add_row({num(Lambda), "", "", "", "unresolved"});
            r.message += std::string(e.what()) + "\n";
        }
    }

    Table clr{"clr_scan", {"Lambda", "count", "slope", "exponent_bound", "slope_within_bound"}, {}};
    const double top = std::min(basis.eigenvalues.back(), cfg.grid.reliable_energy());
    if (top > 0.0) {
        const double hi = std::sqrt(top) * (1.0 - 1e-3);
        std::vector<double> Lambdas;
        for (int i = 0; i < 8; ++i) Lambdas.push_back(hi * std::pow(2.0, -(7 - i) / 7.0));
        try {
            const ClrScan scan = clr_dimension_scan(basis, cfg.model.trap.s, Lambdas);
            for (std::size_t i = 0; i < scan.Lambdas.size(); ++i)
                clr.add_row({num(scan.Lambdas[i]), std::to_string(scan.counts[i]), num(scan.slope),
                             num(scan.exponent_bound), yes_no(scan.slope_within_bound)});
        } catch (const PreconditionError& e) {
            r.message += std::string(e.what()) + "\n";
        }
    }
    r.tables = {std::move(spec), std::move(pw), std::move(pws), std::move(clr)};
    return r;
}

} // namespace anyon
