#include "doctest.h"

#include "anyon/config.hpp"

using namespace anyon;

namespace {

std::string error_of(const std::string& text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

} // namespace

TEST_CASE("minimal config fills defaults") {
    const RunConfig c = parse_config("command = minimize\nbeta = 1.0\nR = 0.1\ns = 2\n");
    CHECK(c.command == Command::minimize);
    CHECK(c.grid.L == 16.0);
    CHECK(c.grid.n == 128);
    CHECK(c.model.beta == 1.0);
    CHECK(c.model.R.value == 0.1);
    CHECK(c.solver.tol == 1e-10);
    CHECK(c.workers == 1);
}

TEST_CASE("sections and flat keys are both accepted") {
    const RunConfig c = parse_config("[run]\ncommand = sweep-radius\nseed = 9\nR_list = 0.5, 0.25, 0.125\n"
                                     "[grid]\nL = 12\nn = 64\n[model]\nbeta = 0.5\ngauge = uniform\nB0 = 0.3\n"
                                     "[solver]\ntol = 1e-9\npreconditioner = none\n");
    CHECK(c.command == Command::sweep_radius);
    CHECK(c.seed == 9);
    CHECK(c.solver.seed == 9);
    CHECK(c.R_list == std::vector<double>{0.5, 0.25, 0.125});
    CHECK(c.grid.n == 64);
    CHECK(c.model.gauge.kind == GaugeSpec::Kind::uniform);
    CHECK(c.solver.preconditioner == Preconditioner::none);
}

TEST_CASE("errors name the key and the accepted range") {
    const std::string e1 = error_of("command = minimize\nbeta = abc\n");
    CHECK(e1.find("'beta'") != std::string::npos);
    CHECK(e1.find("finite real") != std::string::npos);
    CHECK(error_of("command = minimize\nbogus = 1\n").find("unknown key 'bogus'") != std::string::npos);
    CHECK(error_of("beta = 1\n").find("'command'") != std::string::npos);
    CHECK(error_of("command = minimize\nn = 63\n").find("'n'") != std::string::npos);
    CHECK(error_of("command = minimize\nR = 5\n").find("'R'") != std::string::npos);
    CHECK(error_of("command = minimize\n[grid]\nbeta = 1\n").find("section [model]") != std::string::npos);
    CHECK(error_of("command = minimize\nbeta = 1\nbeta = 2\n").find("'beta'") != std::string::npos);
    CHECK(error_of("command = explode\n").find("'command'") != std::string::npos);
    CHECK(error_of("command = minimize\nbacktracking = 1\n").find("(0, 1)") != std::string::npos);
}

TEST_CASE("point-like kernel is rejected for the manybody command") {
    const std::string e = error_of("command = manybody\nR = 0\n");
    CHECK(e.find("'R'") != std::string::npos);
    CHECK_NOTHROW(parse_config("command = minimize\nR = 0\n"));
}

TEST_CASE("radius sweeps must be dyadic and inside (0, L/8]") {
    CHECK(error_of("command = sweep-radius\nR_list = 0.5, 0.3\n").find("'R_list'") != std::string::npos);
    CHECK(error_of("command = sweep-radius\nR_list = 4, 2\n").find("'R_list'") != std::string::npos);
    CHECK_NOTHROW(parse_config("command = sweep-radius\nR_list = [2, 1, 0.5]\n"));
}

TEST_CASE("mode lists stay within the basis") {
    CHECK(error_of("command = manybody\nmodes = 10\nm_list = 5, 20\n").find("'m_list'") != std::string::npos);
    CHECK(error_of("command = spectrum\nn = 16\nmodes = 100\n").find("'modes'") != std::string::npos);
}

TEST_CASE("overrides replace document values") {
    const RunConfig c = parse_config("command = minimize\nseed = 1\n", {{"seed", "42"}, {"command", "verify"}, {"workers", "3"}});
    CHECK(c.seed == 42);
    CHECK(c.solver.seed == 42);
    CHECK(c.command == Command::verify);
    CHECK(c.workers == 3);
    CHECK_THROWS_AS(parse_config("command = minimize\n", {{"workers", "0"}}), ConfigError);
}

TEST_CASE("resolved config round-trips") {
    const RunConfig c = parse_config("command = spectrum\nL = 10\nn = 40\nbeta = -0.25\nR = 0.125\nLambda_list = 2, 3.5\n"
                                     "eigen_method = dense\ndump_fields = yes\n");
    const std::string text = resolved_config(c);
    const RunConfig d = parse_config(text);
    CHECK(resolved_config(d) == text);
    CHECK(d.Lambda_list == std::vector<double>{2.0, 3.5});
    CHECK(d.eigen_method == EigenMethod::dense);
    CHECK(d.dump_fields);
    CHECK(text.find("[solver]") != std::string::npos);
    CHECK(config_reference().find("R_list") != std::string::npos);
}
