#include "anyon/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <functional>
#include <map>
#include <sstream>

#include "CLI11.hpp"

namespace anyon {

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

[[noreturn]] void bad(const std::string& key, const std::string& range, const std::string& got) {
    throw ConfigError("config key '" + key + "': expected " + range + ", got '" + got + "'");
}

std::string trim(std::string s) {
    const auto ws = " \t\r\n";
    s.erase(0, s.find_first_not_of(ws));
    s.erase(s.find_last_not_of(ws) + 1);
    return s;
}

// CLI11 already splits bracketed or space separated lists; commas inside a
// single item are split here.
std::vector<std::string> split_items(const std::vector<std::string>& inputs) {
    std::vector<std::string> out;
    for (const auto& in : inputs) {
        std::string cur;
        for (char ch : in) {
            if (ch == ',' || ch == '[' || ch == ']') {
                if (!trim(cur).empty()) out.push_back(trim(cur));
                cur.clear();
            } else {
                cur += ch;
            }
        }
        if (!trim(cur).empty()) out.push_back(trim(cur));
    }
    return out;
}

std::string joined(const std::vector<std::string>& inputs) {
    std::string s;
    for (const auto& x : inputs) s += (s.empty() ? "" : " ") + x;
    return s;
}

const std::string& single(const std::string& key, const std::string& range, const std::vector<std::string>& in) {
    const auto items = split_items(in);
    if (in.size() != 1 || items.size() != 1) bad(key, range + " (a single value)", joined(in));
    return in.front();
}

double to_double(const std::string& key, const std::string& range, const std::string& s) {
    const std::string t = trim(s);
    double v = 0.0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size() || !std::isfinite(v)) bad(key, range, s);
    return v;
}

long long to_int(const std::string& key, const std::string& range, const std::string& s) {
    const std::string t = trim(s);
    long long v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (t.empty() || res.ec != std::errc{} || res.ptr != t.data() + t.size()) bad(key, range, s);
    return v;
}

bool to_bool(const std::string& key, const std::string& s) {
    std::string t = trim(s);
    std::transform(t.begin(), t.end(), t.begin(), [](unsigned char c) { return std::tolower(c); });
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    bad(key, "a boolean (true/false)", s);
}

template <class Pred>
double real_in(const std::string& key, const std::string& range, const std::vector<std::string>& in, Pred ok) {
    const double v = to_double(key, range, single(key, range, in));
    if (!ok(v)) bad(key, range, joined(in));
    return v;
}

template <class Pred>
long long int_in(const std::string& key, const std::string& range, const std::vector<std::string>& in, Pred ok) {
    const long long v = to_int(key, range, single(key, range, in));
    if (!ok(v)) bad(key, range, joined(in));
    return v;
}

template <class T>
std::string list_str(const std::vector<T>& v) {
    std::string s;
    for (const auto& x : v) {
        if (!s.empty()) s += ", ";
        if constexpr (std::is_floating_point_v<T>)
            s += fmt(x);
        else
            s += std::to_string(x);
    }
    return s;
}

std::string method_name(EigenMethod m) {
    switch (m) {
    case EigenMethod::automatic: return "automatic";
    case EigenMethod::dense: return "dense";
    case EigenMethod::lobpcg: return "lobpcg";
    }
    return "?";
}

struct Key {
    std::string section;
    std::string name;
    std::string range;
    std::function<void(RunConfig&, const std::vector<std::string>&)> set;
    std::function<std::string(const RunConfig&)> get;
};

const std::vector<Key>& registry() {
    static const std::vector<Key> keys = [] {
        std::vector<Key> k;
        auto add = [&](std::string sec, std::string name, std::string range, auto set, auto get) {
            k.push_back({std::move(sec), std::move(name), std::move(range), set, get});
        };
        const auto pos = [](double v) { return v > 0.0; };
        const auto any = [](double) { return true; };

        // [grid]
        add("grid", "L", "a real number > 0",
            [=](RunConfig& c, const auto& in) { c.grid.L = real_in("L", "a real number > 0", in, pos); },
            [](const RunConfig& c) { return fmt(c.grid.L); });
        add("grid", "n", "an even integer in [8, 1024]",
            [](RunConfig& c, const auto& in) {
                c.grid.n = static_cast<int>(int_in("n", "an even integer in [8, 1024]", in,
                                                   [](long long v) { return v >= 8 && v <= 1024 && v % 2 == 0; }));
            },
            [](const RunConfig& c) { return std::to_string(c.grid.n); });

        // [model]
        add("model", "beta", "a finite real number",
            [=](RunConfig& c, const auto& in) { c.model.beta = real_in("beta", "a finite real number", in, any); },
            [](const RunConfig& c) { return fmt(c.model.beta); });
        add("model", "R", "a real number in [0, L/4) (0 selects the point-like kernel)",
            [](RunConfig& c, const auto& in) {
                c.model.R.value = real_in("R", "a real number in [0, L/4)", in, [](double v) { return v >= 0.0; });
            },
            [](const RunConfig& c) { return fmt(c.model.R.value); });
        add("model", "s", "a real number > 0 (trap exponent)",
            [=](RunConfig& c, const auto& in) { c.model.trap.s = real_in("s", "a real number > 0", in, pos); },
            [](const RunConfig& c) { return fmt(c.model.trap.s); });
        add("model", "c", "a real number > 0 (trap scale)",
            [=](RunConfig& c, const auto& in) { c.model.trap.c = real_in("c", "a real number > 0", in, pos); },
            [](const RunConfig& c) { return fmt(c.model.trap.c); });
        add("model", "C0", "a finite real number (trap offset)",
            [=](RunConfig& c, const auto& in) { c.model.trap.C0 = real_in("C0", "a finite real number", in, any); },
            [](const RunConfig& c) { return fmt(c.model.trap.C0); });
        add("model", "gauge", "one of none, uniform",
            [](RunConfig& c, const auto& in) {
                const std::string v = trim(single("gauge", "one of none, uniform", in));
                if (v == "none")
                    c.model.gauge.kind = GaugeSpec::Kind::none;
                else if (v == "uniform")
                    c.model.gauge.kind = GaugeSpec::Kind::uniform;
                else
                    bad("gauge", "one of none, uniform", v);
            },
            [](const RunConfig& c) { return GaugeSpec::name(c.model.gauge.kind); });
        add("model", "B0", "a finite real number (uniform field strength)",
            [=](RunConfig& c, const auto& in) { c.model.gauge.B0 = real_in("B0", "a finite real number", in, any); },
            [](const RunConfig& c) { return fmt(c.model.gauge.B0); });
        add("model", "dealias", "a boolean",
            [](RunConfig& c, const auto& in) { c.model.dealias = to_bool("dealias", single("dealias", "a boolean", in)); },
            [](const RunConfig& c) { return std::string(c.model.dealias ? "true" : "false"); });

        // [solver]
        add("solver", "step", "a real number > 0",
            [=](RunConfig& c, const auto& in) { c.solver.step = real_in("step", "a real number > 0", in, pos); },
            [](const RunConfig& c) { return fmt(c.solver.step); });
        add("solver", "tol", "a real number > 0",
            [=](RunConfig& c, const auto& in) { c.solver.tol = real_in("tol", "a real number > 0", in, pos); },
            [](const RunConfig& c) { return fmt(c.solver.tol); });
        add("solver", "max_iter", "an integer in [1, 10000000]",
            [](RunConfig& c, const auto& in) {
                c.solver.max_iter = static_cast<int>(int_in("max_iter", "an integer in [1, 10000000]", in,
                                                            [](long long v) { return v >= 1 && v <= 10000000; }));
            },
            [](const RunConfig& c) { return std::to_string(c.solver.max_iter); });
        add("solver", "backtracking", "a real number in (0, 1)",
            [](RunConfig& c, const auto& in) {
                c.solver.backtracking =
                    real_in("backtracking", "a real number in (0, 1)", in, [](double v) { return v > 0.0 && v < 1.0; });
            },
            [](const RunConfig& c) { return fmt(c.solver.backtracking); });
        add("solver", "restarts", "an integer in [0, 1000]",
            [](RunConfig& c, const auto& in) {
                c.solver.restarts = static_cast<int>(
                    int_in("restarts", "an integer in [0, 1000]", in, [](long long v) { return v >= 0 && v <= 1000; }));
            },
            [](const RunConfig& c) { return std::to_string(c.solver.restarts); });
        add("solver", "preconditioner", "one of none, kinetic",
            [](RunConfig& c, const auto& in) {
                const std::string v = trim(single("preconditioner", "one of none, kinetic", in));
                if (v == "none")
                    c.solver.preconditioner = Preconditioner::none;
                else if (v == "kinetic")
                    c.solver.preconditioner = Preconditioner::kinetic;
                else
                    bad("preconditioner", "one of none, kinetic", v);
            },
            [](const RunConfig& c) {
                return std::string(c.solver.preconditioner == Preconditioner::none ? "none" : "kinetic");
            });
        add("solver", "conjugate_gradient", "a boolean",
            [](RunConfig& c, const auto& in) {
                c.solver.conjugate_gradient = to_bool("conjugate_gradient", single("conjugate_gradient", "a boolean", in));
            },
            [](const RunConfig& c) { return std::string(c.solver.conjugate_gradient ? "true" : "false"); });

        // [run]
        add("run", "command", "one of minimize, sweep-radius, sweep-beta, manybody, spectrum, verify",
            [](RunConfig& c, const auto& in) {
                const std::string range = "one of minimize, sweep-radius, sweep-beta, manybody, spectrum, verify";
                const std::string v = trim(single("command", range, in));
                static const std::map<std::string, Command> names{
                    {"minimize", Command::minimize}, {"sweep-radius", Command::sweep_radius},
                    {"sweep-beta", Command::sweep_beta}, {"manybody", Command::manybody},
                    {"spectrum", Command::spectrum},   {"verify", Command::verify}};
                const auto it = names.find(v);
                if (it == names.end()) bad("command", range, v);
                c.command = it->second;
            },
            [](const RunConfig& c) { return command_name(c.command); });
        add("run", "seed", "a non-negative integer",
            [](RunConfig& c, const auto& in) {
                c.seed = static_cast<std::uint64_t>(
                    int_in("seed", "a non-negative integer", in, [](long long v) { return v >= 0; }));
            },
            [](const RunConfig& c) { return std::to_string(c.seed); });
        add("run", "output_dir", "a non-empty path",
            [](RunConfig& c, const auto& in) {
                const std::string v = trim(single("output_dir", "a non-empty path", in));
                if (v.empty()) bad("output_dir", "a non-empty path", v);
                c.output_dir = v;
            },
            [](const RunConfig& c) { return c.output_dir; });
        add("run", "workers", "an integer in [1, 256]",
            [](RunConfig& c, const auto& in) {
                c.workers = static_cast<int>(
                    int_in("workers", "an integer in [1, 256]", in, [](long long v) { return v >= 1 && v <= 256; }));
            },
            [](const RunConfig& c) { return std::to_string(c.workers); });
        add("run", "dump_fields", "a boolean",
            [](RunConfig& c, const auto& in) { c.dump_fields = to_bool("dump_fields", single("dump_fields", "a boolean", in)); },
            [](const RunConfig& c) { return std::string(c.dump_fields ? "true" : "false"); });
        add("run", "R_list", "a list of radii in (0, L/8], each half the previous",
            [](RunConfig& c, const auto& in) {
                const std::string range = "a list of radii in (0, L/8], each half the previous";
                c.R_list.clear();
                for (const auto& s : split_items(in)) c.R_list.push_back(to_double("R_list", range, s));
                if (c.R_list.empty()) bad("R_list", range, joined(in));
            },
            [](const RunConfig& c) { return list_str(c.R_list); });
        add("run", "beta_list", "a non-empty list of finite reals",
            [](RunConfig& c, const auto& in) {
                c.beta_list.clear();
                for (const auto& s : split_items(in))
                    c.beta_list.push_back(to_double("beta_list", "a non-empty list of finite reals", s));
                if (c.beta_list.empty()) bad("beta_list", "a non-empty list of finite reals", joined(in));
            },
            [](const RunConfig& c) { return list_str(c.beta_list); });
        add("run", "N", "an integer in [2, 1000000] (particle number)",
            [](RunConfig& c, const auto& in) {
                c.N = static_cast<int>(
                    int_in("N", "an integer in [2, 1000000]", in, [](long long v) { return v >= 2 && v <= 1000000; }));
            },
            [](const RunConfig& c) { return std::to_string(c.N); });
        add("run", "modes", "an integer in [1, 400] (one-body basis size)",
            [](RunConfig& c, const auto& in) {
                c.modes = static_cast<int>(
                    int_in("modes", "an integer in [1, 400]", in, [](long long v) { return v >= 1 && v <= 400; }));
            },
            [](const RunConfig& c) { return std::to_string(c.modes); });
        add("run", "m_list", "a non-empty list of integers in [1, modes]",
            [](RunConfig& c, const auto& in) {
                const std::string range = "a non-empty list of integers in [1, modes]";
                c.m_list.clear();
                for (const auto& s : split_items(in)) c.m_list.push_back(static_cast<int>(to_int("m_list", range, s)));
                if (c.m_list.empty()) bad("m_list", range, joined(in));
            },
            [](const RunConfig& c) { return list_str(c.m_list); });
        add("run", "eigen_method", "one of automatic, dense, lobpcg",
            [](RunConfig& c, const auto& in) {
                const std::string v = trim(single("eigen_method", "one of automatic, dense, lobpcg", in));
                if (v == "automatic")
                    c.eigen_method = EigenMethod::automatic;
                else if (v == "dense")
                    c.eigen_method = EigenMethod::dense;
                else if (v == "lobpcg")
                    c.eigen_method = EigenMethod::lobpcg;
                else
                    bad("eigen_method", "one of automatic, dense, lobpcg", v);
            },
            [](const RunConfig& c) { return method_name(c.eigen_method); });
        add("run", "Lambda_list", "a non-empty list of reals > 0 (spectral cut-offs)",
            [](RunConfig& c, const auto& in) {
                const std::string range = "a non-empty list of reals > 0";
                c.Lambda_list.clear();
                for (const auto& s : split_items(in)) c.Lambda_list.push_back(to_double("Lambda_list", range, s));
                if (c.Lambda_list.empty()) bad("Lambda_list", range, joined(in));
            },
            [](const RunConfig& c) { return list_str(c.Lambda_list); });
        return k;
    }();
    return keys;
}

const Key* find_key(const std::string& name) {
    for (const auto& k : registry())
        if (k.name == name) return &k;
    return nullptr;
}

} // namespace

std::string command_name(Command c) {
    switch (c) {
    case Command::minimize: return "minimize";
    case Command::sweep_radius: return "sweep-radius";
    case Command::sweep_beta: return "sweep-beta";
    case Command::manybody: return "manybody";
    case Command::spectrum: return "spectrum";
    case Command::verify: return "verify";
    }
    return "?";
}

void RunConfig::validate() const {
    // Forward module preconditions, re-labelled with the offending key.
    auto forward = [](const char* key, auto&& check) {
        try {
            check();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        } catch (const std::domain_error& e) {
            throw ConfigError(std::string("config key '") + key + "': " + e.what());
        }
    };
    forward("n", [&] { grid.validate(); });
    forward("R", [&] { model.R.validate(grid); });
    forward("s", [&] { model.trap.validate(); });
    forward("gauge", [&] { model.gauge.validate(); });
    forward("step", [&] { solver.validate(); });

    if (command == Command::manybody && model.R.singular())
        bad("R", "a radius in (0, L/4) for command manybody (the self-pair term diverges at R = 0)", fmt(model.R.value));

    const std::string rrange = "a list of radii in (0, L/8] = (0, " + fmt(grid.L / 8) + "], each half the previous";
    for (std::size_t i = 0; i < R_list.size(); ++i) {
        if (!(R_list[i] > 0.0 && R_list[i] <= grid.L / 8)) bad("R_list", rrange, list_str(R_list));
        if (i > 0 && std::abs(R_list[i] * 2.0 - R_list[i - 1]) > 1e-12 * R_list[i - 1])
            bad("R_list", rrange, list_str(R_list));
    }
    for (int m : m_list)
        if (m < 1 || m > modes)
            bad("m_list", "a list of integers in [1, modes] = [1, " + std::to_string(modes) + "]", list_str(m_list));
    for (double L : Lambda_list)
        if (!(L > 0.0)) bad("Lambda_list", "a non-empty list of reals > 0", list_str(Lambda_list));
    if (modes > grid.n * grid.n / 4)
        bad("modes", "an integer in [1, min(400, n^2/4)] = [1, " + std::to_string(std::min(400, grid.n * grid.n / 4)) + "]",
            std::to_string(modes));
}

RunConfig parse_config(const std::string& text, const std::vector<std::pair<std::string, std::string>>& overrides) {
    std::istringstream in(text);
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigINI().from_config(in);
    } catch (const CLI::Error& e) {
        throw ConfigError(std::string("config: malformed document: ") + e.what());
    }

    RunConfig cfg;
    std::map<std::string, bool> seen;
    for (const auto& it : items) {
        if (it.name == "++" || it.name == "--") continue;
        if (it.parents.size() > 1) throw ConfigError("config: nested section '" + it.fullname() + "' is not supported");
        const Key* key = find_key(it.name);
        if (!key) throw ConfigError("config: unknown key '" + it.fullname() + "'");
        if (!it.parents.empty() && it.parents.front() != key->section)
            throw ConfigError("config key '" + it.name + "': belongs to section [" + key->section + "], found under [" +
                              it.parents.front() + "]");
        if (seen[key->name]) throw ConfigError("config key '" + key->name + "': given more than once");
        seen[key->name] = true;
        key->set(cfg, it.inputs);
    }
    for (const auto& [name, value] : overrides) {
        const Key* key = find_key(name);
        if (!key) throw ConfigError("config: unknown key '" + name + "'");
        seen[key->name] = true;
        key->set(cfg, split_items({value}));
    }
    if (!seen["command"])
        throw ConfigError("config: missing required key 'command' (one of minimize, sweep-radius, sweep-beta, manybody, "
                          "spectrum, verify)");
    cfg.solver.seed = cfg.seed;
    cfg.validate();
    return cfg;
}

std::string resolved_config(const RunConfig& cfg, const std::string& prefix) {
    std::string out;
    std::string section;
    for (const auto& k : registry()) {
        if (k.section != section) {
            section = k.section;
            out += prefix + "[" + section + "]\n";
        }
        out += prefix + k.name + " = " + k.get(cfg) + "\n";
    }
    return out;
}

std::string config_reference() {
    const RunConfig defaults;
    std::string out;
    std::string section;
    for (const auto& k : registry()) {
        if (k.section != section) {
            section = k.section;
            out += "[" + section + "]\n";
        }
        out += "  " + k.name + " = " + (k.name == "command" ? std::string("<required>") : k.get(defaults)) + "    # " +
               k.range + "\n";
    }
    return out;
}

} // namespace anyon
