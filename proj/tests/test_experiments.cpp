#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "anyon/experiments.hpp"
#include "anyon/field_io.hpp"
#include "anyon/verify.hpp"

using namespace anyon;

namespace {

RunConfig small(const std::string& extra) {
    return parse_config("command = minimize\nL = 12\nn = 32\ntol = 1e-11\n" + extra);
}

double cell(const Table& t, std::size_t row, const std::string& col) {
    const auto it = std::find(t.columns.begin(), t.columns.end(), col);
    REQUIRE(it != t.columns.end());
    return std::stod(t.rows[row][static_cast<std::size_t>(it - t.columns.begin())]);
}

} // namespace

TEST_CASE("minimize writes one row and an optional field dump") {
    const auto dir = std::filesystem::temp_directory_path() / "anyon_af_exp_test";
    std::filesystem::remove_all(dir);
    const RunConfig c = small("dump_fields = true\n");
    const RunOutput out = run_minimize(c, dir);
    REQUIRE(out.tables.size() == 2);
    CHECK(out.tables[0].rows.size() == 1);
    CHECK(cell(out.tables[0], 0, "energy") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(!out.numerical_failure);
    CHECK(read_complex_field(dir / "u_star").grid == c.grid);
    write_tables(out, c, dir);
    std::ifstream f(dir / "minimize.csv");
    std::stringstream ss;
    ss << f.rdbuf();
    CHECK(ss.str().rfind("# anyon-af", 0) == 0);
    CHECK(ss.str().find("# n = 32") != std::string::npos);
    std::filesystem::remove_all(dir);
}

TEST_CASE("radius sweep at beta = 0 is flat") {
    const RunConfig c = small("R_list = 0.5, 0.25, 0.125\n");
    const RunOutput out = run_sweep_radius(c);
    const Table& t = out.tables.at(0);
    REQUIRE(t.rows.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) CHECK(cell(t, i, "energy") == doctest::Approx(cell(t, 0, "energy")).epsilon(1e-9));
}

TEST_CASE("radius sweep is byte-for-byte reproducible and Cauchy differences shrink") {
    const RunConfig c = small("beta = 1\nR_list = 0.5, 0.25, 0.125, 0.0625\n");
    const RunOutput a = run_sweep_radius(c), b = run_sweep_radius(c);
    CHECK(render_csv(a.tables[0], c) == render_csv(b.tables[0], c));
    const Table& t = a.tables[0];
    for (std::size_t i = 2; i < t.rows.size(); ++i) CHECK(cell(t, i, "cauchy_diff") < cell(t, i - 1, "cauchy_diff"));
}

TEST_CASE("beta sweep output does not depend on the worker count") {
    RunConfig c = small("beta_list = 1, 0, 0.5\n");
    const RunOutput one = run_sweep_beta(c);
    c.workers = 3;
    const RunOutput three = run_sweep_beta(c);
    c.workers = 1;
    CHECK(render_csv(one.tables[0], c) == render_csv(three.tables[0], c));
    CHECK(cell(one.tables[0], 0, "beta") == 0.0);
    CHECK(cell(one.tables[0], 2, "beta") == 1.0);
    CHECK(cell(one.tables[0], 2, "energy") > cell(one.tables[0], 1, "energy"));
}

TEST_CASE("non-converged runs are flagged, not dropped") {
    const RunConfig c = small("beta = 1\nmax_iter = 3\nR_list = 0.5, 0.25\n");
    const RunOutput out = run_sweep_radius(c);
    CHECK(out.numerical_failure);
    CHECK(out.tables[0].rows.size() == 2);
    CHECK(out.tables[0].rows[0].back() == "not_converged");
}

TEST_CASE("manybody and spectrum tables") {
    const RunConfig c = parse_config("command = manybody\nL = 12\nn = 32\nbeta = 1\nR = 0.2\nmodes = 6\nm_list = 1, 3, 6\n");
    const RunOutput mb = run_manybody(c);
    const Table& t = mb.tables.at(0);
    REQUIRE(t.rows.size() == 3);
    CHECK(cell(t, 2, "e2") <= cell(t, 1, "e2"));
    CHECK(cell(t, 1, "e2") <= cell(t, 0, "e2"));
    CHECK(t.rows[2].back() == "true");

    const RunConfig s = parse_config("command = spectrum\nL = 12\nn = 32\nmodes = 40\nLambda_list = 2, 3\n");
    const RunOutput sp = run_spectrum(s);
    REQUIRE(sp.tables.size() == 4);
    CHECK(cell(sp.tables[0], 0, "eigenvalue") == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sp.tables[2].rows.size() == 2);
    CHECK(cell(sp.tables[2], 0, "max_abs_eig") <= 1.0 + 1e-10);
}

TEST_CASE("verify separates failures from out-of-range properties") {
    const RunConfig c = parse_config("command = verify\nL = 12\nn = 16\n");
    const VerifyReport rep = run_verify(c);
    int out_of_range = 0;
    for (const auto& r : rep.results) {
        if (r.verdict == Verdict::out_of_range) ++out_of_range;
        if (r.name == "gradient_finite_difference") CHECK(r.verdict == Verdict::out_of_range);
        if (r.name == "product_state_identity") CHECK(r.verdict == Verdict::pass);
        if (r.name == "smeared_potential_closed_form") CHECK(r.verdict == Verdict::pass);
    }
    CHECK(out_of_range >= 5);
    CHECK(rep.ok());
    CHECK(rep.render().find("OUT_OF_RANGE") != std::string::npos);
}

TEST_CASE("verify catches a sign flip in the self-consistency gradient") {
    const RunConfig c = parse_config("command = verify\nL = 12\nn = 32\n");
    VerifyHooks hooks;
    hooks.self_consistency_sign = -1.0;
    const VerifyReport rep = run_verify(c, hooks);
    CHECK(!rep.ok());
    for (const auto& r : rep.results)
        if (r.name == "gradient_finite_difference") CHECK(r.verdict == Verdict::fail);
}
